#include "riskbound/record.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace riskbound {

namespace {

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string json_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string value_text(const Record::Value& v, bool json) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&v)) {
        if (!std::isfinite(*d)) {
            const std::string word = std::isnan(*d) ? "nan" : (*d > 0 ? "inf" : "-inf");
            return json ? "\"" + word + "\"" : word;
        }
        return format_double_17(*d);
    }
    if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    const auto& s = std::get<std::string>(v);
    return json ? json_quote(s) : csv_quote(s);
}

}  // namespace

std::string format_double_17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Record& Record::add(std::string key, std::int64_t v) {
    fields_.emplace_back(std::move(key), Value(v));
    return *this;
}

Record& Record::add(std::string key, std::uint64_t v) {
    return add(std::move(key), static_cast<std::int64_t>(v));
}

Record& Record::add(std::string key, double v) {
    fields_.emplace_back(std::move(key), Value(v));
    return *this;
}

Record& Record::add(std::string key, bool v) {
    fields_.emplace_back(std::move(key), Value(v));
    return *this;
}

Record& Record::add(std::string key, std::string v) {
    fields_.emplace_back(std::move(key), Value(std::move(v)));
    return *this;
}

std::string Record::to_json() const {
    std::string out = "{";
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (i) out += ",";
        out += json_quote(fields_[i].first);
        out += ":";
        out += value_text(fields_[i].second, true);
    }
    out += "}";
    return out;
}

std::string Record::csv_header() const {
    std::string out;
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (i) out += ",";
        out += csv_quote(fields_[i].first);
    }
    return out;
}

std::string Record::csv_row() const {
    std::string out;
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (i) out += ",";
        out += value_text(fields_[i].second, false);
    }
    return out;
}

std::vector<std::string> parse_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace riskbound
