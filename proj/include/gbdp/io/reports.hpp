// Copyright 2026 The GBDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// CSV outputs. Numbers carry 17 significant digits.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "gbdp/io/format.hpp"
#include "gbdp/solver.hpp"

namespace gbdp::io {

inline constexpr const char* kTraceHeader = "iter,lower_sample,upper_bound,cum_avg_lower,case1,case2,wall_ms";

/// One trace row; with `zero_wall` the wall time is written as 0 so that
/// repeated runs produce identical files.
inline void write_trace_row(std::ostream& out, const IterationRecord& r, bool zero_wall = false) {
  out << r.iter << ',' << format_double(r.lower_sample) << ',' << format_double(r.upper_bound) << ','
      << format_double(r.cum_avg_lower) << ',' << r.case1_count << ',' << r.case2_count << ','
      << format_double(zero_wall ? 0.0 : r.wall_ms) << '\n';
}

/// One profit per line, no header.
inline void write_profits(std::ostream& out, std::span<const double> profits) {
  for (double p : profits) out << format_double(p) << '\n';
}

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  std::size_t count = 0;
};

/// `bins` equal-width bins spanning [min, max]; the maximum falls in the
/// last bin. Empty input gives no bins; constant input puts every sample in
/// the first of `bins` zero-width bins.
inline std::vector<HistogramBin> histogram(std::span<const double> samples, std::size_t bins = 30) {
  std::vector<HistogramBin> out;
  if (samples.empty() || bins == 0) return out;
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it;
  const double width = (*hi_it - lo) / static_cast<double>(bins);
  out.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    out[k].left = lo + width * static_cast<double>(k);
    out[k].right = k + 1 == bins ? *hi_it : lo + width * static_cast<double>(k + 1);
  }
  for (double v : samples) {
    std::size_t k = width > 0.0 ? static_cast<std::size_t>((v - lo) / width) : 0;
    out[std::min(k, bins - 1)].count++;
  }
  return out;
}

inline void write_histogram(std::ostream& out, std::span<const HistogramBin> bins) {
  out << "bin_left,bin_right,count\n";
  for (const auto& b : bins) out << format_double(b.left) << ',' << format_double(b.right) << ',' << b.count << '\n';
}

struct SampleStats {
  double mean = 0.0;
  /// Sample standard deviation (n - 1 denominator); 0 below two samples.
  double sd = 0.0;
  std::size_t count = 0;
};

inline SampleStats sample_stats(std::span<const double> samples) {
  SampleStats s;
  s.count = samples.size();
  if (samples.empty()) return s;
  double sum = 0.0;
  for (double v : samples) sum += v;
  s.mean = sum / static_cast<double>(samples.size());
  if (samples.size() > 1) {
    double sq = 0.0;
    for (double v : samples) sq += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(sq / static_cast<double>(samples.size() - 1));
  }
  return s;
}

}  // namespace gbdp::io
