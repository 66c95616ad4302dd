#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ecram_stp::csv {

/// Nine significant digits, shortest of fixed/scientific ("%.9g"); "inf"/"nan" spelled out.
std::string number(double v);

/// Provenance lines written as "# key=value" ahead of the header row.
struct Provenance {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  double dt = 0;
  std::string version;

  void write(std::ostream& out) const;
};

/// FNV-1a 64-bit, used to fingerprint resolved configs.
std::uint64_t fnv1a64(std::string_view bytes);

std::string hex64(std::uint64_t v);

void write_row(std::ostream& out, const std::vector<std::string>& cells);

/// Minimal reader for the files this project writes: skips '#' lines, splits on ','.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

Table read(std::istream& in);

}  // namespace ecram_stp::csv
