#include "drillport/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "drillport/error.hpp"

namespace drillport {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(std::string_view line, const std::string& where) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            out.emplace_back(was_quoted ? cur : std::string(trim(cur)));
            cur.clear();
            was_quoted = false;
        } else {
            cur += c;
        }
    }
    if (quoted) throw InputError(where + ": unterminated quoted field");
    out.emplace_back(was_quoted ? cur : std::string(trim(cur)));
    return out;
}

} // namespace

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

std::size_t CsvTable::column(std::string_view name) const {
    if (auto c = find_column(name)) return *c;
    throw InputError(source + ": missing column '" + std::string(name) + "'");
}

std::string CsvTable::where(std::size_t row) const {
    return source + ":" + std::to_string(lines.at(row));
}

const std::string& CsvTable::field(std::size_t row, std::string_view name) const {
    return rows.at(row).at(column(name));
}

double CsvTable::number(std::size_t row, std::string_view name) const {
    const std::string& s = field(row, name);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw InputError(where(row) + ": column '" + std::string(name) + "': '" + s +
                         "' is not a number");
    }
    return v;
}

long CsvTable::integer(std::size_t row, std::string_view name) const {
    const std::string& s = field(row, name);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw InputError(where(row) + ": column '" + std::string(name) + "': '" + s +
                         "' is not an integer");
    }
    return v;
}

CsvTable parse_csv(std::string_view text, std::string source) {
    CsvTable t;
    t.source = std::move(source);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        const auto raw = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const std::string where = t.source + ":" + std::to_string(line_no);
        auto fields = split_line(line, where);
        if (t.header.empty()) {
            t.header = std::move(fields);
            continue;
        }
        if (fields.size() != t.header.size()) {
            throw InputError(where + ": expected " + std::to_string(t.header.size()) +
                             " fields, found " + std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
        t.lines.push_back(line_no);
    }
    if (t.header.empty()) throw InputError(t.source + ": file is empty");
    return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str(), path.string());
}

std::string format_double(double v) {
    if (v == 0.0) return "0";
    char buf[512];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
    if (ec != std::errc{}) throw InputError("cannot format number");
    return std::string(buf, ptr);
}

void write_csv_row(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        const auto& f = fields[i];
        if (f.find_first_of(",\"\n") != std::string::npos) {
            out << '"';
            for (char c : f) {
                if (c == '"') out << '"';
                out << c;
            }
            out << '"';
        } else {
            out << f;
        }
    }
    out << '\n';
}

} // namespace drillport
