// csv.hpp: comma-separated output: header row, LF endings, 17 significant digits
#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kicktop {

class CsvWriter {
public:
    using Cell = std::variant<long long, double, std::string_view>;

    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    void row(std::initializer_list<Cell> cells);
    void row(const std::vector<Cell>& cells);

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    void write_cells(auto begin, auto end);

    std::filesystem::path path_;
    std::ofstream out_;
};

// 17 significant digits, round-trip exact.
std::string format_real(double v);

}  // namespace kicktop
