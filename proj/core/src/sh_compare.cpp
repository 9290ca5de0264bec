#include "tamura/sh_compare.hpp"

#include <stdexcept>
#include <string>

namespace tamura {

namespace {

void check_window(std::int64_t k_max) {
  if (k_max < 0) throw std::invalid_argument("degree window needs k_max >= 0");
}

}  // namespace

DegreeVector::DegreeVector(std::int64_t k_min, std::int64_t k_max) : k_min_(k_min), k_max_(k_max) {
  if (k_max < k_min) throw std::invalid_argument("empty degree window");
  counts_.assign(static_cast<std::size_t>(k_max - k_min + 1), 0);
}

std::int64_t DegreeVector::at(std::int64_t k) const {
  if (!contains(k)) throw std::out_of_range("degree " + std::to_string(k) + " outside window");
  return counts_[static_cast<std::size_t>(k - k_min_)];
}

void DegreeVector::add(std::int64_t k, std::int64_t count) {
  if (!contains(k)) throw std::out_of_range("degree " + std::to_string(k) + " outside window");
  counts_[static_cast<std::size_t>(k - k_min_)] += count;
}

std::vector<std::int64_t> DegreeVector::support() const {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] != 0) out.push_back(k_min_ + static_cast<std::int64_t>(i));
  }
  return out;
}

DegreeVector sh_dims_formula(std::int64_t m, std::int64_t k_max) {
  if (m < 1) throw std::invalid_argument("dimension m must be >= 1");
  check_window(k_max);
  DegreeVector out(0, k_max);
  for (std::int64_t k = m + 1; k <= k_max; k += 2) out.add(k);
  return out;
}

DegreeVector degree_vector_from_orbits(std::span<const ReebOrbit> orbits, std::int64_t k_max) {
  check_window(k_max);
  DegreeVector out(0, k_max);
  for (const ReebOrbit& orbit : orbits) {
    if (out.contains(orbit.cz)) out.add(orbit.cz);
  }
  return out;
}

DegreeVector sh_dims_gutt(const Ellipsoid& e, std::int64_t k_max) {
  check_window(k_max);
  const GoodnessReport guard = check_goodness_and_lacunarity(e, k_max);
  if (!guard.passed()) {
    throw std::logic_error("goodness/lacunarity guard failed below degree " + std::to_string(k_max));
  }
  // Every enumerated orbit is good once the guard passes.
  const std::vector<ReebOrbit> orbits = spectrum(e, k_max);
  return degree_vector_from_orbits(orbits, k_max);
}

ShComparison compare_degree_vectors(DegreeVector gutt, DegreeVector formula) {
  if (gutt.k_min() != formula.k_min() || gutt.k_max() != formula.k_max()) {
    throw std::invalid_argument("degree vectors must share a window");
  }
  ShComparison out{std::move(gutt), std::move(formula), std::nullopt};
  for (std::int64_t k = out.gutt.k_min(); k <= out.gutt.k_max(); ++k) {
    if (out.gutt.at(k) != out.formula.at(k)) {
      out.first_difference = DegreeDifference{k, out.gutt.at(k), out.formula.at(k)};
      break;
    }
  }
  return out;
}

ShComparison compare_sh(const Ellipsoid& e, std::int64_t k_max) {
  return compare_degree_vectors(sh_dims_gutt(e, k_max),
                                sh_dims_formula(static_cast<std::int64_t>(e.dimension()), k_max));
}

}  // namespace tamura
