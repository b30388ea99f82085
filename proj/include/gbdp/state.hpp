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

// Integer lattice states, the box state space {x : 0 <= x <= x_bar} and the
// finite horizon.

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace gbdp {

/// A point on the nonnegative integer lattice (order counts per dimension).
class StateVec {
 public:
  StateVec() = default;
  explicit StateVec(std::size_t n) : entries_(n, 0) {}
  StateVec(std::initializer_list<int> entries) : entries_(entries) { validate(); }
  explicit StateVec(std::vector<int> entries) : entries_(std::move(entries)) { validate(); }

  std::size_t size() const { return entries_.size(); }
  int operator[](std::size_t s) const { return entries_[s]; }
  const std::vector<int>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// x + 1_s for s in {0, 1, ..., n}; s = 0 leaves the state unchanged.
  StateVec step(std::size_t s) const {
    StateVec out = *this;
    if (s > 0) ++out.entries_.at(s - 1);
    return out;
  }

  /// Adds `count` units along dimension `dim` (0-based).
  StateVec& add(std::size_t dim, int count) {
    entries_.at(dim) += count;
    if (entries_[dim] < 0) throw std::invalid_argument("StateVec: negative entry");
    return *this;
  }

  long long total() const {
    long long sum = 0;
    for (int v : entries_) sum += v;
    return sum;
  }

  std::string to_string() const {
    std::string out = "(";
    for (std::size_t s = 0; s < entries_.size(); ++s) {
      if (s > 0) out += ",";
      out += std::to_string(entries_[s]);
    }
    return out + ")";
  }

  friend bool operator==(const StateVec&, const StateVec&) = default;
  friend auto operator<=>(const StateVec&, const StateVec&) = default;

 private:
  void validate() const {
    for (int v : entries_) {
      if (v < 0) throw std::invalid_argument("StateVec: entries must be nonnegative");
    }
  }

  std::vector<int> entries_;
};

inline void require_same_dimension(const StateVec& a, const StateVec& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dimension mismatch: " + a.to_string() + " vs " + b.to_string());
  }
}

inline StateVec elementwise_max(const StateVec& a, const StateVec& b) {
  require_same_dimension(a, b);
  std::vector<int> out(a.size());
  for (std::size_t s = 0; s < a.size(); ++s) out[s] = std::max(a[s], b[s]);
  return StateVec(std::move(out));
}

inline StateVec elementwise_min(const StateVec& a, const StateVec& b) {
  require_same_dimension(a, b);
  std::vector<int> out(a.size());
  for (std::size_t s = 0; s < a.size(); ++s) out[s] = std::min(a[s], b[s]);
  return StateVec(std::move(out));
}

/// a <= b elementwise.
inline bool dominated_by(const StateVec& a, const StateVec& b) {
  require_same_dimension(a, b);
  for (std::size_t s = 0; s < a.size(); ++s) {
    if (a[s] > b[s]) return false;
  }
  return true;
}

/// The box X = {x in Z^n : 0 <= x <= x_bar}. States are indexed
/// lexicographically with the first dimension most significant.
class StateSpace {
 public:
  StateSpace() = default;
  explicit StateSpace(StateVec upper) : upper_(std::move(upper)) {
    if (upper_.size() == 0) throw std::invalid_argument("StateSpace: dimension must be >= 1");
    strides_.assign(upper_.size(), 0);
    std::uint64_t stride = 1;
    bool overflow = false;
    for (std::size_t s = upper_.size(); s-- > 0;) {
      strides_[s] = stride;
      const auto extent = static_cast<std::uint64_t>(upper_[s]) + 1;
      if (stride > std::numeric_limits<std::uint64_t>::max() / extent) overflow = true;
      stride = overflow ? std::numeric_limits<std::uint64_t>::max() : stride * extent;
    }
    cardinality_ = stride;
    cardinality_overflow_ = overflow;
  }

  std::size_t dim() const { return upper_.size(); }
  const StateVec& upper() const { return upper_; }

  /// |X| = prod_s (x_bar_s + 1); saturates at UINT64_MAX.
  std::uint64_t cardinality() const { return cardinality_; }
  bool cardinality_overflows() const { return cardinality_overflow_; }

  /// |X| as a floating-point number; exact up to 2^53, never overflows.
  double cardinality_estimate() const {
    double c = 1.0;
    for (int v : upper_) c *= static_cast<double>(v) + 1.0;
    return c;
  }

  bool contains(const StateVec& x) const {
    require_same_dimension(x, upper_);
    return dominated_by(x, upper_);
  }

  std::uint64_t index(const StateVec& x) const {
    if (!contains(x)) throw std::out_of_range("state " + x.to_string() + " outside X");
    std::uint64_t idx = 0;
    for (std::size_t s = 0; s < dim(); ++s) idx += strides_[s] * static_cast<std::uint64_t>(x[s]);
    return idx;
  }

  StateVec state_at(std::uint64_t idx) const {
    if (cardinality_overflow_ || idx >= cardinality_) throw std::out_of_range("state index out of range");
    std::vector<int> out(dim());
    for (std::size_t s = 0; s < dim(); ++s) {
      out[s] = static_cast<int>(idx / strides_[s]);
      idx %= strides_[s];
    }
    return StateVec(std::move(out));
  }

  /// All states in index order. Desk scale only.
  std::vector<StateVec> states() const {
    if (cardinality_overflow_ || cardinality_ > (std::uint64_t{1} << 32)) {
      throw std::length_error("StateSpace::states: box too large to enumerate");
    }
    std::vector<StateVec> out;
    out.reserve(cardinality_);
    for (std::uint64_t i = 0; i < cardinality_; ++i) out.push_back(state_at(i));
    return out;
  }

  friend bool operator==(const StateSpace& a, const StateSpace& b) { return a.upper_ == b.upper_; }

 private:
  StateVec upper_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t cardinality_ = 0;
  bool cardinality_overflow_ = false;
};

/// T = {1, ..., t_bar}; the terminal condition lives at t_bar + 1.
struct HorizonSpec {
  int t_bar = 1;

  explicit HorizonSpec(int t) : t_bar(t) {
    if (t_bar < 1) throw std::invalid_argument("HorizonSpec: t_bar must be >= 1");
  }
  int terminal() const { return t_bar + 1; }
};

/// Y_+(x) = [x, x + 1_1, ..., x + 1_n], stay first. Points beyond x_bar are
/// kept; the problem assigns them probability zero.
inline std::vector<StateVec> successors(const StateVec& x) {
  std::vector<StateVec> out;
  out.reserve(x.size() + 1);
  for (std::size_t s = 0; s <= x.size(); ++s) out.push_back(x.step(s));
  return out;
}

inline std::vector<StateVec> successors(const StateVec& x, const StateSpace& space) {
  require_same_dimension(x, space.upper());
  return successors(x);
}

/// Z(x) = {x + 1_s + 1_s' : s, s' in {0..n}} without duplicates, ordered as
/// x, x + 1_s, x + 2*1_s, then x + 1_s + 1_s' for s < s'.
inline std::vector<StateVec> local_check_set(const StateVec& x) {
  const std::size_t n = x.size();
  std::vector<StateVec> out;
  out.reserve(1 + n + n * (n + 1) / 2);
  out.push_back(x);
  for (std::size_t s = 0; s < n; ++s) out.push_back(StateVec(x).add(s, 1));
  for (std::size_t s = 0; s < n; ++s) out.push_back(StateVec(x).add(s, 2));
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t r = s + 1; r < n; ++r) out.push_back(StateVec(x).add(s, 1).add(r, 1));
  }
  return out;
}

}  // namespace gbdp
