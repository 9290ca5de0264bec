#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tamura/cz_engine.hpp"
#include "tamura/exact_field.hpp"
#include "tamura/weights.hpp"

namespace tamura {

/*
 * Boundary of E(a_1, ..., a_m) in C^m with the standard Liouville form. When
 * all ratios a_j / a_k (j != k) are irrational its Reeb flow has exactly m
 * simple closed orbits, gamma_j of period pi a_j, one per coordinate axis.
 */
class Ellipsoid {
 public:
  explicit Ellipsoid(WeightTuple weights) : weights_(std::move(weights)) {}
  explicit Ellipsoid(std::vector<QuadIrrational> weights) : weights_(std::move(weights)) {}

  std::size_t dimension() const noexcept { return weights_.size(); }
  const WeightTuple& weights() const noexcept { return weights_; }
  bool hypothesis_holds() const noexcept { return weights_.hypothesis_holds(); }

 private:
  WeightTuple weights_;
};

/// The n-th iterate of gamma_j. Its period is pi * period_coefficient, period_coefficient = n a_j.
struct ReebOrbit {
  std::size_t family = 0;
  std::int64_t iterate = 0;
  std::int64_t cz = 0;
  QuadIrrational period_coefficient;

  friend bool operator==(const ReebOrbit&, const ReebOrbit&) = default;
};

/// m - 1 + 2 sum_k floor(n a_j / a_k). Throws HypothesisViolation if some ratio is rational.
std::int64_t orbit_index(const Ellipsoid& e, std::size_t j, std::int64_t n);

/// The same index assembled from the exact rotation numbers n a_j / a_l of the linearized flow.
std::int64_t orbit_index_from_rotations(const Ellipsoid& e, std::size_t j, std::int64_t n);

ReebOrbit reeb_orbit(const Ellipsoid& e, std::size_t j, std::int64_t n);

/// All orbits with cz <= max_degree, sorted by (cz, family, iterate).
std::vector<ReebOrbit> spectrum(const Ellipsoid& e, std::int64_t max_degree);

struct GoodnessReport {
  std::int64_t max_degree = 0;
  std::size_t orbit_count = 0;
  bool all_good = true;
  bool lacunary = true;
  std::optional<ReebOrbit> bad_orbit;
  std::optional<std::pair<std::int64_t, std::int64_t>> consecutive_pair;

  bool passed() const noexcept { return all_good && lacunary; }
};

/// Every iterate has the parity of its simple orbit, and the index set up to max_degree is lacunary.
GoodnessReport check_goodness_and_lacunarity(const Ellipsoid& e, std::int64_t max_degree);

/// Smallest pair (k, k+1) contained in the values, if any.
std::optional<std::pair<std::int64_t, std::int64_t>> find_consecutive(std::vector<std::int64_t> values);

/// Linearized Reeb flow along gamma_j^n: rotation frequencies 2 / a_l for duration n pi a_j, in doubles.
RotationPath linearized_flow(const Ellipsoid& e, std::size_t j, std::int64_t n);

enum class CrossCheckStatus { agree, disagree, inconclusive };

std::string to_string(CrossCheckStatus status);

struct IndexCrossCheck {
  std::size_t family = 0;
  std::int64_t iterate = 0;
  std::int64_t formula = 0;
  std::optional<HalfInteger> numeric;
  CrossCheckStatus status = CrossCheckStatus::inconclusive;
  std::string detail;  // numeric engine error when inconclusive
};

/// Runs the crossing-form engine on the linearized flow and compares with orbit_index.
IndexCrossCheck cross_check_index(const Ellipsoid& e, std::size_t j, std::int64_t n,
                                  const Tolerances& tol = {}, int sample_count = 4096);

}  // namespace tamura
