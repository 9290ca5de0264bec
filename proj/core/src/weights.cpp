#include "tamura/weights.hpp"

#include <string>

namespace tamura {

HypothesisViolation::HypothesisViolation(RationalRatio witness)
    : std::runtime_error("hypothesis violated: a_" + std::to_string(witness.j) + "/a_" +
                         std::to_string(witness.k) + " = " + witness.ratio.to_string() +
                         " is rational"),
      witness_(std::move(witness)) {}

WeightTuple::WeightTuple(std::vector<QuadIrrational> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("weight tuple must not be empty");
  const long d = weights_.front().radicand();
  for (const auto& w : weights_) {
    if (w.radicand() != d) throw RadicandMismatch(d, w.radicand());
    if (w.sign() <= 0) throw std::invalid_argument("weight " + w.to_string() + " is not positive");
  }
  const std::size_t m = weights_.size();
  ratios_.reserve(m * m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) ratios_.push_back(weights_[j] / weights_[k]);
  }
  for (std::size_t j = 0; j < m && !rational_ratio_; ++j) {
    for (std::size_t k = j + 1; k < m; ++k) {
      if (ratios_[j * m + k].is_rational()) {
        rational_ratio_ = RationalRatio{j + 1, k + 1, ratios_[j * m + k]};
        break;
      }
    }
  }
}

const QuadIrrational& WeightTuple::ratio(std::size_t j, std::size_t k) const {
  const std::size_t m = size();
  if (j < 1 || j > m || k < 1 || k > m) throw std::out_of_range("weight index out of range");
  return ratios_[(j - 1) * m + (k - 1)];
}

void WeightTuple::require_hypothesis() const {
  if (rational_ratio_) throw HypothesisViolation(*rational_ratio_);
}

mpz_class WeightTuple::ratio_floor_sum(std::size_t j, const mpz_class& n) const {
  const std::size_t m = size();
  if (j < 1 || j > m) throw std::out_of_range("family index out of range");
  mpz_class sum = n;
  for (std::size_t k = 1; k <= m; ++k) {
    if (k != j) sum += floor_product(n, ratios_[(j - 1) * m + (k - 1)]);
  }
  return sum;
}

WeightTuple WeightTuple::scaled(const mpq_class& c) const {
  if (sgn(c) <= 0) throw std::invalid_argument("scale factor must be positive");
  std::vector<QuadIrrational> out;
  out.reserve(weights_.size());
  for (const auto& w : weights_) out.push_back(w * c);
  return WeightTuple(std::move(out));
}

}  // namespace tamura
