#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace mcchan {

/// One CSV cell: numbers print in scientific notation with 9 significant
/// digits, integers verbatim, strings quoted when they contain `,`, `"` or a
/// line break. std::monostate prints as an empty cell.
using CsvCell = std::variant<std::monostate, double, std::int64_t, std::string>;

[[nodiscard]] std::string format_cell(const CsvCell& cell);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& names);
    void row(const std::vector<CsvCell>& cells);

private:
    std::ostream& out_;
};

}  // namespace mcchan
