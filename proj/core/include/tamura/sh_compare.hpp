#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tamura/ellipsoid_spectrum.hpp"

namespace tamura {

/// Multiplicity per degree on the closed window [k_min, k_max]. Undefined outside it.
class DegreeVector {
 public:
  DegreeVector(std::int64_t k_min, std::int64_t k_max);

  std::int64_t k_min() const noexcept { return k_min_; }
  std::int64_t k_max() const noexcept { return k_max_; }
  bool contains(std::int64_t k) const noexcept { return k >= k_min_ && k <= k_max_; }

  /// Throws std::out_of_range outside the window.
  std::int64_t at(std::int64_t k) const;
  void add(std::int64_t k, std::int64_t count = 1);

  std::span<const std::int64_t> multiplicities() const noexcept { return counts_; }
  /// Degrees with non-zero multiplicity, increasing.
  std::vector<std::int64_t> support() const;

  friend bool operator==(const DegreeVector&, const DegreeVector&) = default;

 private:
  std::int64_t k_min_;
  std::int64_t k_max_;
  std::vector<std::int64_t> counts_;
};

/// dim SH_k of a star-shaped domain in C^m: 1 at k = m + 2j - 1 (j >= 1), 0 elsewhere, on [0, k_max].
DegreeVector sh_dims_formula(std::int64_t m, std::int64_t k_max);

/// Counts each orbit once in degree cz, over [0, k_max]. No goodness filtering.
DegreeVector degree_vector_from_orbits(std::span<const ReebOrbit> orbits, std::int64_t k_max);

/*
 * dim SH_k from the orbit-counting rule: the number of good orbits with
 * cz = k. Runs the goodness and lacunarity guard first and throws
 * std::logic_error if it fails.
 */
DegreeVector sh_dims_gutt(const Ellipsoid& e, std::int64_t k_max);

struct DegreeDifference {
  std::int64_t degree = 0;
  std::int64_t gutt = 0;
  std::int64_t formula = 0;
};

struct ShComparison {
  DegreeVector gutt;
  DegreeVector formula;
  std::optional<DegreeDifference> first_difference;

  bool equal() const noexcept { return !first_difference.has_value(); }
};

/// Both vectors must share a window (std::invalid_argument otherwise).
ShComparison compare_degree_vectors(DegreeVector gutt, DegreeVector formula);

/// Orbit count against the closed formula on [0, k_max].
ShComparison compare_sh(const Ellipsoid& e, std::int64_t k_max);

}  // namespace tamura
