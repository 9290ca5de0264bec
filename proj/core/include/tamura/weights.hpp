#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "tamura/exact_field.hpp"

namespace tamura {

/// A pair of weights j != k whose ratio a_j / a_k is rational (1-based indices).
struct RationalRatio {
  std::size_t j;
  std::size_t k;
  QuadIrrational ratio;
};

/// Pairwise-irrational ratios are required but some a_j / a_k is rational.
class HypothesisViolation : public std::runtime_error {
 public:
  explicit HypothesisViolation(RationalRatio witness);
  const RationalRatio& witness() const noexcept { return witness_; }

 private:
  RationalRatio witness_;
};

/*
 * Positive weights a_1, ..., a_m in one field Q(sqrt(d)), with the ratio table
 * a_j / a_k precomputed and the pairwise-irrationality hypothesis decided once
 * at construction. Family indices are 1-based throughout.
 */
class WeightTuple {
 public:
  /// Throws std::invalid_argument for an empty tuple or a non-positive weight,
  /// RadicandMismatch if the weights come from different fields.
  explicit WeightTuple(std::vector<QuadIrrational> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  long radicand() const noexcept { return weights_.front().radicand(); }
  std::span<const QuadIrrational> weights() const noexcept { return weights_; }
  const QuadIrrational& weight(std::size_t j) const { return weights_.at(j - 1); }
  const QuadIrrational& ratio(std::size_t j, std::size_t k) const;

  bool hypothesis_holds() const noexcept { return !rational_ratio_.has_value(); }
  /// First pair (j < k, lexicographic) with a rational ratio, if any.
  const std::optional<RationalRatio>& rational_ratio() const noexcept { return rational_ratio_; }
  void require_hypothesis() const;

  /// sum_k floor(n * a_j / a_k). The k = j term is n itself.
  mpz_class ratio_floor_sum(std::size_t j, const mpz_class& n) const;

  /// Same tuple multiplied by c > 0; all ratios are unchanged.
  WeightTuple scaled(const mpq_class& c) const;

 private:
  std::vector<QuadIrrational> weights_;
  std::vector<QuadIrrational> ratios_;  // row-major m x m, a_j / a_k
  std::optional<RationalRatio> rational_ratio_;
};

}  // namespace tamura
