#pragma once

#include <string>
#include <vector>

namespace depstat {

/// "%.17g" — round-trip exact for doubles.
std::string fmt_g17(double v);

/// "%.6f" — the human-facing rate format.
std::string fmt_f6(double v);

/// Full-consumption string-to-double; returns false on trailing garbage,
/// empty input, or non-finite results.
bool parse_double(const std::string& token, double& out);

bool parse_long(const std::string& token, long& out);

bool parse_u64(const std::string& token, unsigned long long& out);

/// Splits on a separator, keeping empty fields.
std::vector<std::string> split(const std::string& line, char sep);

}  // namespace depstat
