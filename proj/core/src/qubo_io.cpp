#include "qsplit/qubo_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

namespace qsplit {

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string serialize_qubo_file(const QuboMatrix& q) {
    std::string out;
    out += "p " + std::to_string(q.size()) + "\n";
    if (q.offset() != 0.0) out += "o " + format_double(q.offset()) + "\n";
    for (const auto& [key, coeff] : q.entries()) {
        out += std::to_string(key.first) + " " + std::to_string(key.second) + " " +
               format_double(coeff) + "\n";
    }
    return out;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
        if (pos > start) fields.push_back(line.substr(start, pos - start));
    }
    return fields;
}

std::size_t parse_index(std::string_view field, std::size_t line_no) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError("malformed index '" + std::string(field) + "'", line_no);
    return value;
}

double parse_number(std::string_view field, std::size_t line_no) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError("malformed number '" + std::string(field) + "'", line_no);
    if (!std::isfinite(value))
        throw ParseError("non-finite number '" + std::string(field) + "'", line_no);
    return value;
}

}  // namespace

QuboMatrix parse_qubo_file(std::string_view text) {
    QuboMatrix q;
    bool have_header = false;
    bool have_offset = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        auto fields = split_fields(line);
        if (fields.empty() || fields[0].front() == '#') continue;
        if (!have_header) {
            if (fields[0] != "p" || fields.size() != 2)
                throw ParseError("expected header 'p <n>'", line_no);
            q = QuboMatrix(parse_index(fields[1], line_no));
            have_header = true;
        } else if (fields[0] == "o") {
            if (fields.size() != 2) throw ParseError("expected 'o <offset>'", line_no);
            if (have_offset) throw ParseError("duplicate offset line", line_no);
            q.set_offset(parse_number(fields[1], line_no));
            have_offset = true;
        } else {
            if (fields.size() != 3)
                throw ParseError("expected entry '<i> <j> <coeff>'", line_no);
            std::size_t i = parse_index(fields[0], line_no);
            std::size_t j = parse_index(fields[1], line_no);
            double coeff = parse_number(fields[2], line_no);
            if (i > j) throw ParseError("entry has i > j", line_no);
            if (j >= q.size()) throw ParseError("entry index out of range", line_no);
            if (q.entries().count({i, j})) throw ParseError("duplicate entry", line_no);
            q.set(i, j, coeff);
        }
    }
    if (!have_header) throw ParseError("missing header 'p <n>'", line_no);
    return q;
}

}  // namespace qsplit
