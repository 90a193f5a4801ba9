#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace riskbound {

// Flat ordered key-value record used for all CLI output. Doubles are printed
// with 17 significant digits so emitted files are byte-stable and round-trip
// exactly; non-finite doubles are emitted as the strings "inf"/"-inf"/"nan".
class Record {
public:
    using Value = std::variant<std::int64_t, double, bool, std::string>;

    Record& add(std::string key, std::int64_t v);
    Record& add(std::string key, int v) { return add(std::move(key), static_cast<std::int64_t>(v)); }
    Record& add(std::string key, std::uint64_t v);
    Record& add(std::string key, double v);
    Record& add(std::string key, bool v);
    Record& add(std::string key, std::string v);
    Record& add(std::string key, const char* v) { return add(std::move(key), std::string(v)); }

    const std::vector<std::pair<std::string, Value>>& fields() const { return fields_; }

    std::string to_json() const;       // single object, keys in insertion order
    std::string csv_header() const;    // comma-separated keys
    std::string csv_row() const;       // values, quoted where needed

private:
    std::vector<std::pair<std::string, Value>> fields_;
};

// Fixed-precision double formatting shared by both output formats.
std::string format_double_17(double v);

// Splits one CSV line into fields, honoring double-quote escaping.
std::vector<std::string> parse_csv_line(const std::string& line);

}  // namespace riskbound
