#pragma once

// Locale-independent CSV output.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace constelsim::csv {

inline constexpr int kSignificantDigits = 12;

/// General-format number with 12 significant digits ('.' decimal point,
/// no locale). Integers print without exponent or trailing zeros.
inline std::string format_number(double v, int digits = kSignificantDigits) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    if (res.ec != std::errc{}) return "nan";
    return {buf, res.ptr};
}

inline std::string format_number(std::size_t v) { return std::to_string(v); }
inline std::string format_number(long long v) { return std::to_string(v); }

/// Writes rows with '\n' line endings. Fields are written verbatim; callers
/// pass plain identifiers and numbers only.
class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

private:
    std::ostream& out_;
};

/// Parses a full-field double; returns false on trailing garbage.
inline bool parse_double(std::string_view s, double& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

}  // namespace constelsim::csv
