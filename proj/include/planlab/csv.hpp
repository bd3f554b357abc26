#pragma once
// Minimal CSV support for the experiment outputs: deterministic number
// formatting, a row writer, and a small reader for the plot command. Our
// files never contain quotes or embedded commas.

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace planlab {

inline std::string fmt_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_num(*v) : std::string{};
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  static std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur.push_back(ch);
      }
    }
    out.push_back(cur);
    return out;
  }

  static CsvTable read(std::istream& is) {
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("csv: empty input");
    t.header = split(line);
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      t.rows.push_back(split(line));
    }
    return t;
  }

  int column_index(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  }

  // Blank cells become NaN.
  std::vector<double> numeric_column(const std::string& name) const {
    int ci = column_index(name);
    if (ci < 0) throw std::runtime_error("csv: no column named '" + name + "'");
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
      const std::string& cell = row.at(static_cast<std::size_t>(ci));
      if (cell.empty()) {
        out.push_back(std::numeric_limits<double>::quiet_NaN());
      } else {
        out.push_back(std::stod(cell));
      }
    }
    return out;
  }
};

}  // namespace planlab
