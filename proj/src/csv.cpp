#include "vdlab/csv.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "vdlab/io.hpp"

namespace vdlab {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto b = cell.find_first_not_of(" \t");
    const auto e = cell.find_last_not_of(" \t");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

std::string format_csv(const harness::DecayTable& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  char buf[64];
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw InputError("format_csv: row width differs from header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof buf, c ? ",%.16e" : "%.16e", row[c]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

harness::DecayTable parse_csv(const std::string& text) {
  harness::DecayTable table;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (header) {
      for (const auto& c : cells)
        if (c.empty()) throw InputError("csv line 1: empty column name");
      table.columns = std::move(cells);
      header = false;
      continue;
    }
    if (cells.size() != table.columns.size()) {
      throw InputError("csv line " + std::to_string(number) + ": " + std::to_string(cells.size()) +
                       " cells, header has " + std::to_string(table.columns.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const char* end = cells[c].data() + cells[c].size();
      const auto [ptr, ec] = std::from_chars(cells[c].data(), end, row[c]);
      if (ec != std::errc() || ptr != end || cells[c].empty()) {
        throw InputError("csv line " + std::to_string(number) + ": '" + cells[c] + "' is not a number");
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (header) throw InputError("csv: no header row");
  return table;
}

void write_csv(const std::filesystem::path& path, const harness::DecayTable& table) {
  write_file_atomic(path, format_csv(table));
}

harness::DecayTable read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

}  // namespace vdlab
