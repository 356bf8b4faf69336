#include "kicktop/csv.hpp"

#include <fmt/format.h>

#include <stdexcept>
#include <vector>

namespace kicktop {

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header)
    : CsvWriter(path, std::vector<std::string>(header.begin(), header.end())) {}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::write_cells(auto begin, auto end) {
    bool first = true;
    for (auto it = begin; it != end; ++it) {
        if (!first) out_ << ',';
        first = false;
        std::visit(
            [this](const auto& v) {
                using V = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<V, double>) {
                    out_ << format_real(v);
                } else {
                    out_ << v;
                }
            },
            *it);
    }
    out_ << '\n';
    if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

void CsvWriter::row(std::initializer_list<Cell> cells) { write_cells(cells.begin(), cells.end()); }

void CsvWriter::row(const std::vector<Cell>& cells) { write_cells(cells.begin(), cells.end()); }

}  // namespace kicktop
