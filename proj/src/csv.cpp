#include "esampling/csv.hpp"

#include <array>
#include <istream>
#include <stdexcept>
#include <system_error>

namespace esampling::csv {

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: buffer too small");
    }
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) {
    text = trim(text);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return value;
}

std::string_view trim(std::string_view text) {
    constexpr std::string_view ws = " \t\r\n";
    const auto first = text.find_first_not_of(ws);
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(ws);
    return text.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

Table read(std::istream& in) {
    Table table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split(line);
        if (!have_header) {
            for (auto f : fields) {
                table.header.emplace_back(f);
            }
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(table.header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        std::vector<std::string> row;
        row.reserve(fields.size());
        for (auto f : fields) {
            row.emplace_back(f);
        }
        table.rows.push_back(std::move(row));
        table.line_numbers.push_back(line_no);
    }
    if (!have_header) {
        throw std::runtime_error("missing header row");
    }
    return table;
}

}  // namespace esampling::csv
