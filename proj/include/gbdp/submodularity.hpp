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

// Lattice submodularity tests:
//   f(max(y, z)) + f(min(y, z)) <= f(y) + f(z)
// on a finite point set, and a fast local variant for min-of-cuts functions
// on the neighbourhood Z(x) used by the backward sweep.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "gbdp/pwa_value.hpp"
#include "gbdp/state.hpp"

namespace gbdp {

struct SubmodularityReport {
  bool holds = true;
  /// Largest f(max) + f(min) - f(y) - f(z) over the checked pairs, clamped at 0.
  double worst_violation = 0.0;
  double tolerance = 0.0;
  /// Indices of the worst pair in the input point list (valid if violated).
  std::size_t first = 0;
  std::size_t second = 0;
};

/// Default numerical margin: 1e-9 * (1 + max |f| over the point set).
inline double default_submodularity_tolerance(std::span<const double> values) {
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  return 1e-9 * (1.0 + scale);
}

/// Checks the submodular inequality for every unordered pair of distinct
/// points. `f` must be evaluable at the elementwise max/min of any pair.
/// A negative `sub_tol` selects the default tolerance.
template <class F>
SubmodularityReport is_submodular_on(F&& f, std::span<const StateVec> points, double sub_tol = -1.0) {
  std::vector<double> values(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) values[i] = f(points[i]);

  SubmodularityReport report;
  report.tolerance = sub_tol >= 0.0 ? sub_tol : default_submodularity_tolerance(values);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[i] == points[j]) continue;
      // Comparable pairs satisfy the inequality with equality.
      if (dominated_by(points[i], points[j]) || dominated_by(points[j], points[i])) continue;
      const double lhs = f(elementwise_max(points[i], points[j])) + f(elementwise_min(points[i], points[j]));
      const double violation = lhs - (values[i] + values[j]);
      if (violation > report.worst_violation) {
        report.worst_violation = violation;
        report.first = i;
        report.second = j;
      }
    }
  }
  report.holds = report.worst_violation <= report.tolerance;
  return report;
}

template <class F>
SubmodularityReport is_submodular_on(F&& f, const std::vector<StateVec>& points, double sub_tol = -1.0) {
  return is_submodular_on(std::forward<F>(f), std::span<const StateVec>(points), sub_tol);
}

/// Values of a min-of-cuts function on Z(anchor), stored relative to the
/// anchor so that any point anchor + v with sparse v costs O(#cuts * |supp v|).
///
/// Point order matches local_check_set(anchor).
class LocalPatch {
 public:
  LocalPatch(PwaView q, const StateVec& anchor) : anchor_(anchor), n_(anchor.size()), cuts_(q.size()) {
    if (q.empty()) throw std::logic_error("LocalPatch: piecewise-affine function has no cuts");
    if (q.dim() != n_) throw std::invalid_argument("LocalPatch: dimension mismatch");
    base_.resize(cuts_);
    slopes_.resize(n_ * cuts_);
    for (std::size_t j = 0; j < cuts_; ++j) {
      const Hyperplane& h = q.cuts()[j];
      base_[j] = h(anchor);
      for (std::size_t s = 0; s < n_; ++s) slopes_[s * cuts_ + j] = h.slope[s];
    }
    scratch_.resize(cuts_);

    offsets_.reserve(1 + n_ + n_ * (n_ + 1) / 2);
    offsets_.push_back(Offset{});
    for (std::size_t s = 0; s < n_; ++s) offsets_.push_back(Offset::single(s, 1));
    for (std::size_t s = 0; s < n_; ++s) offsets_.push_back(Offset::single(s, 2));
    for (std::size_t s = 0; s < n_; ++s) {
      for (std::size_t r = s + 1; r < n_; ++r) offsets_.push_back(Offset::pair(s, r));
    }
    values_.resize(offsets_.size());
    for (std::size_t k = 0; k < offsets_.size(); ++k) values_[k] = evaluate(offsets_[k]);
  }

  const StateVec& anchor() const { return anchor_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

  /// Q(anchor + 1_s + 1_r) for s, r in {0, ..., n} (0 = no step).
  double value(std::size_t s, std::size_t r) const { return values_[index_of(s, r)]; }

  /// Q at successors(anchor + 1_s), in successor order.
  void successor_values(std::size_t s, std::span<double> out) const {
    for (std::size_t r = 0; r <= n_; ++r) out[r] = value(s, r);
  }

  /// Same result as is_submodular_on(Q, local_check_set(anchor)); with
  /// `stop_at_first` the scan ends at the first violation beyond tolerance.
  SubmodularityReport check(bool stop_at_first = false, double sub_tol = -1.0) const {
    SubmodularityReport report;
    report.tolerance = sub_tol >= 0.0 ? sub_tol : default_submodularity_tolerance(values_);
    for (std::size_t i = 0; i < offsets_.size(); ++i) {
      for (std::size_t j = i + 1; j < offsets_.size(); ++j) {
        const Offset& a = offsets_[i];
        const Offset& b = offsets_[j];
        if (a.dominated_by(b) || b.dominated_by(a)) continue;
        const double lhs = evaluate(Offset::join(a, b)) + values_[index_of(Offset::meet(a, b))];
        const double violation = lhs - (values_[i] + values_[j]);
        if (violation > report.worst_violation) {
          report.worst_violation = violation;
          report.first = i;
          report.second = j;
          if (stop_at_first && violation > report.tolerance) {
            report.holds = false;
            return report;
          }
        }
      }
    }
    report.holds = report.worst_violation <= report.tolerance;
    return report;
  }

 private:
  // Sparse nonnegative offset with at most four nonzero dimensions, sorted.
  struct Offset {
    std::array<std::size_t, 4> dim{};
    std::array<int, 4> count{};
    std::size_t size = 0;

    static Offset single(std::size_t s, int c) {
      Offset o;
      o.dim[0] = s;
      o.count[0] = c;
      o.size = 1;
      return o;
    }
    static Offset pair(std::size_t s, std::size_t r) {
      Offset o;
      o.dim[0] = s;
      o.dim[1] = r;
      o.count[0] = o.count[1] = 1;
      o.size = 2;
      return o;
    }
    int at(std::size_t d) const {
      for (std::size_t k = 0; k < size; ++k) {
        if (dim[k] == d) return count[k];
      }
      return 0;
    }
    bool dominated_by(const Offset& other) const {
      for (std::size_t k = 0; k < size; ++k) {
        if (count[k] > other.at(dim[k])) return false;
      }
      return true;
    }
    static Offset join(const Offset& a, const Offset& b) {
      Offset o;
      std::size_t i = 0, j = 0;
      while (i < a.size || j < b.size) {
        if (j == b.size || (i < a.size && a.dim[i] < b.dim[j])) {
          o.dim[o.size] = a.dim[i];
          o.count[o.size++] = a.count[i++];
        } else if (i == a.size || b.dim[j] < a.dim[i]) {
          o.dim[o.size] = b.dim[j];
          o.count[o.size++] = b.count[j++];
        } else {
          o.dim[o.size] = a.dim[i];
          o.count[o.size++] = std::max(a.count[i++], b.count[j++]);
        }
      }
      return o;
    }
    static Offset meet(const Offset& a, const Offset& b) {
      Offset o;
      for (std::size_t k = 0; k < a.size; ++k) {
        const int c = std::min(a.count[k], b.at(a.dim[k]));
        if (c > 0) {
          o.dim[o.size] = a.dim[k];
          o.count[o.size++] = c;
        }
      }
      return o;
    }
  };

  std::size_t index_of(std::size_t s, std::size_t r) const {
    if (s > r) std::swap(s, r);
    if (r == 0) return 0;
    if (s == 0) return r;
    if (s == r) return n_ + s;
    const std::size_t a = s - 1, b = r - 1;
    return 1 + 2 * n_ + a * n_ - a * (a + 1) / 2 + (b - a - 1);
  }

  // Offsets reachable as a meet of two points of Z stay inside Z.
  std::size_t index_of(const Offset& o) const {
    if (o.size == 0) return 0;
    if (o.size == 1) return o.count[0] == 1 ? index_of(o.dim[0] + 1, 0) : index_of(o.dim[0] + 1, o.dim[0] + 1);
    return index_of(o.dim[0] + 1, o.dim[1] + 1);
  }

  double evaluate(const Offset& o) const {
    double* acc = scratch_.data();
    std::copy(base_.begin(), base_.end(), acc);
    for (std::size_t k = 0; k < o.size; ++k) {
      const double* slope = slopes_.data() + o.dim[k] * cuts_;
      const double c = o.count[k];
      for (std::size_t j = 0; j < cuts_; ++j) acc[j] += c * slope[j];
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cuts_; ++j) best = acc[j] < best ? acc[j] : best;
    return best;
  }

  StateVec anchor_;
  std::size_t n_;
  std::size_t cuts_;
  std::vector<double> base_;
  std::vector<double> slopes_;  // dimension-major: slopes_[s * cuts_ + j]
  mutable std::vector<double> scratch_;
  std::vector<Offset> offsets_;
  std::vector<double> values_;
};

}  // namespace gbdp
