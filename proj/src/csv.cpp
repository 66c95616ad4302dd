#include "ecram_stp/csv.hpp"

#include <fmt/format.h>

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "ecram_stp/errors.hpp"

namespace ecram_stp::csv {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0) return "0";  // folds -0
  return fmt::format("{:.9g}", v);
}

void Provenance::write(std::ostream& out) const {
  out << "# config_hash=" << hex64(config_hash) << '\n'
      << "# seed=" << seed << '\n'
      << "# dt=" << number(dt) << '\n'
      << "# version=" << version << '\n';
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ConfigError("csv: no column named '" + std::string(name) + "'");
}

Table read(std::istream& in) {
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

}  // namespace ecram_stp::csv
