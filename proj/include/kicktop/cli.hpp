// cli.hpp: experiment runner behind the `kicktop` executable
#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace kicktop::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

// args excludes the program name, e.g. {"compare", "--config", "fig2a.cfg"}.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

// "fig2a" -> "fig2_a"; other stems are returned unchanged.
std::string output_prefix(const std::string& config_stem);

}  // namespace kicktop::cli
