#include "cusplab/csv.hpp"

#include <cstdio>

namespace cusplab {

std::string csv_format(const CsvValue& v) {
    if (std::holds_alternative<std::string>(v)) {
        const std::string& s = std::get<std::string>(v);
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        quoted += '"';
        return quoted;
    }
    if (std::holds_alternative<long long>(v))
        return std::to_string(std::get<long long>(v));
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(v));
    return buf;
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::header(const std::vector<std::string>& columns) {
    for (size_t i = 0; i < columns.size(); ++i)
        out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
}

void CsvWriter::row(const std::vector<CsvValue>& values) {
    for (size_t i = 0; i < values.size(); ++i)
        out_ << (i ? "," : "") << csv_format(values[i]);
    out_ << "\n";
}

uint64_t config_hash(const std::string& canonical) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace cusplab
