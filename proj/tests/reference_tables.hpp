#pragma once

// Published coverage levels in percent, N = 5000 replications.
// Per table: rows d=1 NW, d=1 averaged, d=2 NW, d=2 averaged.
// Columns: x = -0.5, 0, 0.5, each at n = 50, 100, 200.

#include <array>
#include <string_view>

namespace reference {

struct Table {
  std::string_view model;
  std::string_view design;
  std::array<std::array<double, 9>, 4> levels;
};

inline constexpr std::array<double, 3> kPoints{-0.5, 0.0, 0.5};
inline constexpr std::array<std::size_t, 3> kSizes{50, 100, 200};

inline constexpr std::array<Table, 9> kTables{{
    {"cos", "std_normal",
     {{
         {96.5, 96.76, 96.5, 96.44, 96.62, 96.84, 96.7, 97.04, 96.92},
         {99.82, 99.9, 99.92, 99.8, 99.68, 99.76, 99.94, 99.86, 99.88},
         {95.42, 95.32, 95.7, 94.94, 95.44, 95.08, 95.4, 95.44, 96.2},
         {99.82, 99.86, 99.76, 99.66, 99.6, 99.44, 99.82, 99.9, 99.98},
     }}},
    {"bimodal_exp", "std_normal",
     {{
         {95.04, 94.74, 95.08, 95.06, 95.28, 95.4, 95.44, 95.44, 95.84},
         {99.8, 99.62, 99.46, 99.24, 99.34, 99.06, 99.34, 99.34, 99.12},
         {95.26, 95.14, 95.34, 94.74, 94.88, 95.06, 94.48, 95.56, 95.62},
         {99.86, 99.76, 99.72, 99.64, 99.52, 99.38, 99.62, 99.74, 99.6},
     }}},
    {"linear", "std_normal",
     {{
         {96.32, 95.94, 96.1, 96.24, 96.2, 96, 96.1, 96.24, 96.62},
         {99.84, 99.9, 99.6, 99.92, 99.82, 99.72, 99.86, 99.8, 99.76},
         {95.46, 94.76, 95.16, 95.56, 95.38, 95.54, 94.98, 94.96, 95.62},
         {99.82, 99.88, 99.62, 99.88, 99.78, 99.68, 99.88, 99.82, 99.68},
     }}},
    {"cos", "normal_mixture",
     {{
         {96.96, 97.06, 97.12, 97.26, 96.8, 97.1, 97.46, 96.94, 96.94},
         {99.96, 99.92, 99.88, 99.86, 99.8, 99.66, 99.96, 99.96, 99.8},
         {95.6, 95.32, 95.56, 95.08, 95.36, 95.64, 96.38, 95.7, 95.34},
         {99.82, 99.92, 99.74, 99.94, 99.78, 99.64, 99.96, 99.9, 99.64},
     }}},
    {"bimodal_exp", "normal_mixture",
     {{
         {94.9, 95.38, 95.3, 95.56, 94.56, 94.86, 95.24, 95.24, 95.48},
         {99.74, 99.62, 99.58, 99.44, 99.22, 99.1, 99.34, 99.28, 99.06},
         {94.54, 95.34, 94.92, 95.2, 94.4, 94.82, 95.24, 95.06, 95.14},
         {99.82, 99.78, 99.74, 99.84, 99.74, 99.6, 99.8, 99.78, 99.58},
     }}},
    {"linear", "normal_mixture",
     {{
         {96.32, 96.66, 96.84, 96.46, 96.74, 96.64, 96.6, 96.72, 97.2},
         {99.92, 99.88, 99.8, 99.94, 99.98, 99.84, 99.88, 99.9, 99.86},
         {95.18, 95.46, 96.1, 95.08, 95.52, 95.6, 95.58, 95.44, 95.74},
         {99.94, 99.86, 99.78, 99.88, 99.96, 99.7, 99.9, 99.86, 99.8},
     }}},
    {"cos", "student6",
     {{
         {96.98, 97.54, 97.64, 97.02, 97.28, 97.52, 97.6, 97.1, 96.98},
         {99.9, 99.84, 99.62, 99.74, 99.86, 99.88, 99.98, 99.9, 99.86},
         {95.6, 95.96, 95.94, 95.4, 95.84, 96.06, 96.26, 95.62, 95.24},
         {99.88, 99.78, 99.82, 99.74, 99.72, 99.8, 99.98, 99.82, 99.68},
     }}},
    {"bimodal_exp", "student6",
     {{
         {95.3, 94.88, 95.08, 95.5, 95.06, 95.02, 95.28, 95.48, 95.56},
         {99.8, 99.68, 99.46, 99.16, 99.26, 99.18, 99.4, 99.24, 99.18},
         {94.88, 94.5, 94.8, 95.28, 94.8, 94.64, 95.06, 95.3, 95.3},
         {99.84, 99.82, 99.58, 99.64, 99.66, 99.58, 99.8, 99.7, 99.7},
     }}},
    {"linear", "student6",
     {{
         {96.62, 97.04, 97, 97.2, 97.08, 97.02, 96.36, 97.14, 97.22},
         {99.84, 99.9, 99.92, 99.94, 99.88, 99.82, 99.86, 99.84, 99.86},
         {95.04, 95.62, 95.54, 95.96, 95.58, 95.88, 94.94, 96.14, 95.86},
         {99.82, 99.9, 99.82, 99.84, 99.78, 99.66, 99.86, 99.84, 99.76},
     }}},
}};

}  // namespace reference
