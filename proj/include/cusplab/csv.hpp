#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace cusplab {

/// One CSV cell: string, integer or real. Reals print with 17 significant
/// digits ('.' decimal) so that round-tripping is exact and outputs diff
/// cleanly.
using CsvValue = std::variant<std::string, long long, double>;

std::string csv_format(const CsvValue& v);

/// RFC-4180-style writer: one header row, optional leading comment lines
/// (prefixed with '#') for run metadata such as the config hash.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void comment(const std::string& text);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<CsvValue>& values);

private:
    std::ostream& out_;
};

/// FNV-1a hash of the canonical config string, printed in CSV comments so a
/// result file is traceable to its exact configuration.
uint64_t config_hash(const std::string& canonical);

} // namespace cusplab
