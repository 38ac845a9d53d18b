#pragma once

#include <string>

#include "depstat/sample.hpp"

namespace depstat {

/// Serializes a paired sample as CSV: header row "x1,..,xp,y1,..,yq",
/// then one row per observation, values in round-trip-exact "%.17g",
/// LF line endings.
std::string dataset_to_csv(const PairedSample& sample);

/// Parses the dataset CSV format; p and q are inferred from the header.
/// Throws ParseError (carrying the offending 1-based line) on malformed
/// input.
PairedSample parse_dataset_csv(const std::string& text);

/// File helpers. Throw IoError on filesystem failures.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace depstat
