#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "candlecast/ohlc.hpp"

namespace candlecast {

/// Parses `date,open,high,low,close` CSV text. The header row is required;
/// extra trailing columns are ignored. Throws DataError on malformed rows.
[[nodiscard]] std::vector<RawBar> parse_ohlc_csv(std::istream& in);
[[nodiscard]] std::vector<RawBar> read_ohlc_csv(const std::filesystem::path& path);

void write_ohlc_csv(std::ostream& out, const OhlcSeries& series);

/// Shortest decimal that round-trips to the same double.
[[nodiscard]] std::string format_double(double value);

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace candlecast
