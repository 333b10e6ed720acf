#pragma once

#include <cstdio>
#include <ostream>
#include <set>
#include <utility>
#include <sstream>
#include <string>

#include "recreg/simulation.hpp"

namespace recreg::sim {

namespace detail {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "model,design,d,n,x,estimator,coverage,se,mean_width,theoretical_level";

/// One row per cell. Formatting goes through printf in the C locale so the
/// output is byte-stable and always uses '.' as decimal separator.
inline void write_csv(std::ostream& os, const CoverageReport& report, bool header = true) {
  if (header) os << kCsvHeader << '\n';
  for (const auto& c : report.cells) {
    os << c.model << ',' << c.design << ',' << detail::fmt("%g", c.d) << ',' << c.n << ','
       << detail::fmt("%g", c.x) << ',' << c.estimator << ',' << detail::fmt("%.6f", c.coverage)
       << ',' << detail::fmt("%.6f", c.se) << ',' << detail::fmt("%.8g", c.mean_width) << ','
       << detail::fmt("%.6f", c.theoretical_level) << '\n';
  }
}

inline std::string to_csv(const CoverageReport& report, bool header = true) {
  std::ostringstream os;
  write_csv(os, report, header);
  return os.str();
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

/// Aligned text table: one block per (model, design), a sub-block per d,
/// columns grouped by x then n, one line per estimator and the theoretical
/// level in the last column.
inline void write_text_table(std::ostream& os, const CoverageReport& report) {
  std::set<std::pair<std::string, std::string>> tables;
  std::set<double> ds, xs;
  std::set<std::size_t> ns;
  for (const auto& c : report.cells) {
    tables.insert({c.model, c.design});
    ds.insert(c.d);
    xs.insert(c.x);
    ns.insert(c.n);
  }
  constexpr std::size_t label_w = 10, col_w = 9;
  for (const auto& [model, design] : tables) {
    os << "model " << model << ", design " << design << '\n';
    std::string head = pad("", label_w), sub = pad("", label_w);
    for (double x : xs) {
      head += pad("x=" + detail::fmt("%g", x), col_w * ns.size());
      for (std::size_t n : ns) sub += pad("n=" + std::to_string(n), col_w);
    }
    os << head << "CL\n" << sub << '\n';
    for (double d : ds) {
      os << "d=" << detail::fmt("%g", d) << '\n';
      for (const char* est : {"nw", "averaged"}) {
        std::string line = pad(est, label_w);
        double level = NAN;
        bool any = false;
        for (double x : xs) {
          for (std::size_t n : ns) {
            const CoverageCell* cell = nullptr;
            for (const auto& c : report.cells) {
              if (c.model == model && c.design == design && c.d == d && c.n == n && c.x == x &&
                  c.estimator == est) {
                cell = &c;
                break;
              }
            }
            if (cell) {
              line += pad(detail::fmt("%.2f%%", 100.0 * cell->coverage), col_w);
              level = cell->theoretical_level;
              any = true;
            } else {
              line += pad("-", col_w);
            }
          }
        }
        if (any) os << line << detail::fmt("%.2f%%", 100.0 * level) << '\n';
      }
    }
    os << '\n';
  }
}

inline std::string to_text_table(const CoverageReport& report) {
  std::ostringstream os;
  write_text_table(os, report);
  return os.str();
}

}  // namespace recreg::sim
