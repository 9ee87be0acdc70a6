#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "betashift/real.hpp"

namespace betashift {

// One grid cell of a parameter-plane sweep.  Decimal fields hold
// 20-significant-digit strings; the target and error fields are filled only
// for finite_type rows.
struct ScanRecord {
  std::string beta;
  std::string alpha;
  std::string status;  // finite_type | sofic | undetermined
  std::size_t n_used = 0;
  std::size_t period_lower = 0;
  std::size_t period_upper = 0;
  std::string b;
  std::string a;
  std::string entropy;
  std::string err_beta;
  std::string err_alpha;

  bool operator==(const ScanRecord&) const = default;
};

// Evenly spaced slopes in [beta_min, beta_max] crossed with interior offset
// fractions (j+1)/(nalpha+1) of the fiber height 2 - beta; every cell is
// strictly inside the parameter triangle.
struct ScanGrid {
  std::size_t nbeta = 10;
  std::size_t nalpha = 10;
  double beta_min = 1.05;
  double beta_max = 1.95;
};

// Approximates every cell by a finite-type point (falling back to
// classification when approximation fails) on a small thread pool; records
// come back in grid order regardless of scheduling, and per-cell failures
// become undetermined rows instead of exceptions.  threads == 0 picks the
// hardware concurrency.
std::vector<ScanRecord> scan_grid(const ScanGrid& grid, double eps, Bits bits,
                                  std::size_t threads = 0);

// Fixed-column CSV with a header row; parse_scan_csv inverts scan_csv
// bit-exactly.
std::string scan_csv(const std::vector<ScanRecord>& records);
std::vector<ScanRecord> parse_scan_csv(std::string_view text);

// Static scatter of the recovered parameters over the triangle outline.
std::string scan_svg(const std::vector<ScanRecord>& records);

}  // namespace betashift
