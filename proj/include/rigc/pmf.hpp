#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "rigc/error.hpp"
#include "rigc/random.hpp"

namespace rigc {

/// Finite-support probability mass function on the nonnegative integers,
/// stored densely by value.
class Pmf {
 public:
  Pmf() = default;

  /// Builds a pmf from (value, weight) entries. Weights are renormalized;
  /// the missing mass (1 - sum) is kept as truncation_mass() for reporting.
  static Pmf from_weights(const std::map<int, double>& weights) {
    Pmf out;
    double total = 0.0;
    int max_value = -1;
    for (const auto& [k, w] : weights) {
      if (k < 0) throw Error(ErrorCode::InvalidMeasure, "pmf value " + std::to_string(k) + " < 0");
      if (!(w >= 0.0) || !std::isfinite(w))
        throw Error(ErrorCode::InvalidMeasure, "pmf weight at " + std::to_string(k) + " invalid");
      total += w;
      if (w > 0.0) max_value = std::max(max_value, k);
    }
    if (!(total > 0.0)) throw Error(ErrorCode::InvalidMeasure, "pmf has zero total mass");
    out.prob_.assign(static_cast<std::size_t>(max_value) + 1, 0.0);
    for (const auto& [k, w] : weights)
      if (k <= max_value) out.prob_[static_cast<std::size_t>(k)] += w / total;
    out.truncation_mass_ = total < 1.0 ? 1.0 - total : 0.0;
    out.finalize();
    return out;
  }

  static Pmf point_mass(int k) { return from_weights({{k, 1.0}}); }

  double operator[](int k) const {
    return k >= 0 && static_cast<std::size_t>(k) < prob_.size() ? prob_[static_cast<std::size_t>(k)]
                                                                : 0.0;
  }
  int max_value() const { return static_cast<int>(prob_.size()) - 1; }
  int min_value() const {
    for (std::size_t k = 0; k < prob_.size(); ++k)
      if (prob_[k] > 0.0) return static_cast<int>(k);
    return 0;
  }
  const std::vector<double>& probabilities() const { return prob_; }
  double truncation_mass() const { return truncation_mass_; }

  double mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < prob_.size(); ++k) m += static_cast<double>(k) * prob_[k];
    return m;
  }
  double second_moment() const {
    double m = 0.0;
    for (std::size_t k = 0; k < prob_.size(); ++k) m += static_cast<double>(k * k) * prob_[k];
    return m;
  }
  /// E[X(X-1)].
  double factorial_moment2() const { return second_moment() - mean(); }

  /// P(X* = k) = k P(X = k) / E[X].
  Pmf size_biased() const {
    const double m = mean();
    if (!(m > 0.0)) throw Error(ErrorCode::InvalidMeasure, "size-biasing a pmf with zero mean");
    Pmf out;
    out.prob_.resize(prob_.size());
    for (std::size_t k = 0; k < prob_.size(); ++k) out.prob_[k] = static_cast<double>(k) * prob_[k] / m;
    out.finalize();
    return out;
  }

  /// P(X~ = k) = P(X* - 1 = k).
  Pmf tilted() const {
    Pmf sb = size_biased();
    Pmf out;
    out.prob_.assign(sb.prob_.begin() + 1, sb.prob_.end());
    if (out.prob_.empty()) out.prob_.push_back(1.0);
    out.finalize();
    return out;
  }

  double sup_distance(const Pmf& other) const {
    double d = 0.0;
    const int top = std::max(max_value(), other.max_value());
    for (int k = 0; k <= top; ++k) d = std::max(d, std::abs((*this)[k] - other[k]));
    return d;
  }

  int sample(Rng& rng) const { return static_cast<int>(sampler_(rng)); }

  /// Empirical pmf of a sample of values.
  template <typename Range>
  static Pmf empirical(const Range& values) {
    std::map<int, double> counts;
    for (auto v : values) counts[static_cast<int>(v)] += 1.0;
    return from_weights(counts);
  }

 private:
  std::vector<double> prob_;
  double truncation_mass_ = 0.0;
  WeightedIndex sampler_;

  void finalize() { sampler_ = WeightedIndex(prob_); }
};

}  // namespace rigc
