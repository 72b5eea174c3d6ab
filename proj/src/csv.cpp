#include "mcchan/csv.hpp"

#include <cmath>
#include <cstdio>

namespace mcchan {

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') {
            q += '"';
        }
        q += c;
    }
    return q + '"';
}

}  // namespace

std::string format_cell(const CsvCell& cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double v) const {
            if (std::isnan(v)) {
                return "nan";
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.8e", v);
            return buf;
        }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(const std::string& s) const { return quote(s); }
    };
    return std::visit(Visitor{}, cell);
}

void CsvWriter::header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        out_ << (i ? "," : "") << quote(names[i]);
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out_ << (i ? "," : "") << format_cell(cells[i]);
    }
    out_ << '\n';
}

}  // namespace mcchan
