#include "kicktop/params.hpp"

#include "kicktop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kicktop {

void SystemParams::validate() const {
    if (J < 1) throw InputError("J must be >= 1, got " + std::to_string(J));
    if (T <= J) throw InputError("T must exceed J (T=" + std::to_string(T) + ", J=" + std::to_string(J) + ")");
    if (!(I > 0.0)) throw InputError("I must be positive");
    if (!(tau_eps > 0.0)) throw InputError("tau_eps must be positive");
    if (!(hbar_eff > 0.0)) throw InputError("hbar_eff must be positive");
    if (!std::isfinite(k)) throw InputError("k must be finite");
    if (N0 < n_min() || N0 > n_max()) {
        throw ChannelRangeError("N0=" + std::to_string(N0) + " outside channel range [" +
                                std::to_string(n_min()) + ", " + std::to_string(n_max()) + "]");
    }
}

ChannelIndex channel_of(long N, const SystemParams& params) {
    if (N < params.n_min() || N > params.n_max()) {
        throw ChannelRangeError("channel N=" + std::to_string(N) + " outside [" + std::to_string(params.n_min()) +
                                ", " + std::to_string(params.n_max()) + "]");
    }
    return {params.T - N, N};
}

namespace {

long scaled_integer(long value, double s, const char* name) {
    const double x = s * static_cast<double>(value);
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-9 * std::max(1.0, std::abs(x))) {
        throw IncompatibleScaleError(std::string("scale ") + std::to_string(s) + " maps " + name + "=" +
                                     std::to_string(value) + " to non-integer " + std::to_string(x));
    }
    return static_cast<long>(r);
}

}  // namespace

SystemParams rescale(const SystemParams& params, double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw IncompatibleScaleError("scale factor must be positive and finite");
    if (s == 1.0) return params;

    SystemParams out = params;
    out.J = scaled_integer(params.J, s, "J");
    out.T = scaled_integer(params.T, s, "T");
    // s*N0 lies in [s(T-J), s(T+J)] whose endpoints are integers, so rounding stays in range.
    out.N0 = static_cast<long>(std::lround(s * static_cast<double>(params.N0)));
    out.I = params.I * s;
    out.hbar_eff = params.hbar_eff / s;
    out.validate();
    return out;
}

}  // namespace kicktop
