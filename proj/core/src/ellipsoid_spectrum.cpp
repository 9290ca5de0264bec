#include "tamura/ellipsoid_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace tamura {

namespace {

constexpr unsigned kWideBits = 192;
constexpr const char* kPi50 = "3.14159265358979323846264338327950288419716939937510";

std::int64_t to_int64(const mpz_class& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("orbit index does not fit in 64 bits");
  return z.get_si();
}

void check_orbit_label(const Ellipsoid& e, std::size_t j, std::int64_t n) {
  if (j < 1 || j > e.dimension()) throw std::out_of_range("orbit family index out of range");
  if (n < 1) throw std::out_of_range("orbit iterate must be >= 1");
}

mpf_class wide_value(const QuadIrrational& x) {
  mpf_class root(x.radicand(), kWideBits);
  root = sqrt(root);
  mpf_class out(x.rational_part(), kWideBits);
  out += mpf_class(x.surd_part(), kWideBits) * root;
  return out;
}

// mpf_get_d truncates; pick whichever neighbouring double is nearer.
double nearest_double(const mpf_class& x) {
  const double lo = x.get_d();
  const double hi = std::nextafter(lo, x >= 0 ? std::numeric_limits<double>::infinity()
                                              : -std::numeric_limits<double>::infinity());
  const mpf_class dlo = abs(x - mpf_class(lo, kWideBits));
  const mpf_class dhi = abs(x - mpf_class(hi, kWideBits));
  return dhi < dlo ? hi : lo;
}

}  // namespace

std::int64_t orbit_index(const Ellipsoid& e, std::size_t j, std::int64_t n) {
  check_orbit_label(e, j, n);
  e.weights().require_hypothesis();
  const auto m = static_cast<std::int64_t>(e.dimension());
  return m - 1 + 2 * to_int64(e.weights().ratio_floor_sum(j, n));
}

std::int64_t orbit_index_from_rotations(const Ellipsoid& e, std::size_t j, std::int64_t n) {
  check_orbit_label(e, j, n);
  e.weights().require_hypothesis();
  std::vector<QuadIrrational> rotation_numbers;
  rotation_numbers.reserve(e.dimension());
  // Block l turns at frequency 2 / a_l for time n pi a_j: n a_j / a_l full turns.
  for (std::size_t l = 1; l <= e.dimension(); ++l) {
    rotation_numbers.push_back(e.weights().ratio(j, l) * mpq_class(n));
  }
  // Block j has the integer rotation number n and contributes 2n; each other
  // block contributes 1 + 2 floor(n a_j / a_l).
  return cz_rotation_exact(rotation_numbers).to_integer();
}

ReebOrbit reeb_orbit(const Ellipsoid& e, std::size_t j, std::int64_t n) {
  const std::int64_t cz = orbit_index(e, j, n);
  return ReebOrbit{j, n, cz, e.weights().weight(j) * mpq_class(n)};
}

std::vector<ReebOrbit> spectrum(const Ellipsoid& e, std::int64_t max_degree) {
  e.weights().require_hypothesis();
  std::vector<ReebOrbit> out;
  for (std::size_t j = 1; j <= e.dimension(); ++j) {
    // cz grows by at least 2 per iterate, so the first overshoot ends the family.
    for (std::int64_t n = 1;; ++n) {
      ReebOrbit orbit = reeb_orbit(e, j, n);
      if (orbit.cz > max_degree) break;
      out.push_back(std::move(orbit));
    }
  }
  std::sort(out.begin(), out.end(), [](const ReebOrbit& x, const ReebOrbit& y) {
    return std::tie(x.cz, x.family, x.iterate) < std::tie(y.cz, y.family, y.iterate);
  });
  return out;
}

std::optional<std::pair<std::int64_t, std::int64_t>> find_consecutive(std::vector<std::int64_t> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (values[i + 1] == values[i] + 1) return std::pair{values[i], values[i + 1]};
  }
  return std::nullopt;
}

GoodnessReport check_goodness_and_lacunarity(const Ellipsoid& e, std::int64_t max_degree) {
  GoodnessReport report;
  report.max_degree = max_degree;
  const std::vector<ReebOrbit> orbits = spectrum(e, max_degree);
  report.orbit_count = orbits.size();

  std::vector<std::int64_t> simple(e.dimension() + 1);
  for (std::size_t j = 1; j <= e.dimension(); ++j) simple[j] = orbit_index(e, j, 1);

  std::vector<std::int64_t> good_indices;
  for (const ReebOrbit& orbit : orbits) {
    if ((orbit.cz - simple[orbit.family]) % 2 != 0) {
      if (report.all_good) report.bad_orbit = orbit;
      report.all_good = false;
      continue;
    }
    good_indices.push_back(orbit.cz);
  }
  report.consecutive_pair = find_consecutive(std::move(good_indices));
  report.lacunary = !report.consecutive_pair.has_value();
  return report;
}

RotationPath linearized_flow(const Ellipsoid& e, std::size_t j, std::int64_t n) {
  check_orbit_label(e, j, n);
  const mpf_class pi(kPi50, kWideBits);
  std::vector<double> freqs;
  freqs.reserve(e.dimension());
  for (const QuadIrrational& a : e.weights().weights()) {
    freqs.push_back(nearest_double(mpf_class(2, kWideBits) / wide_value(a)));
  }
  const double duration = nearest_double(mpf_class(n, kWideBits) * pi * wide_value(e.weights().weight(j)));
  return RotationPath(std::move(freqs), duration);
}

std::string to_string(CrossCheckStatus status) {
  switch (status) {
    case CrossCheckStatus::agree:
      return "agree";
    case CrossCheckStatus::disagree:
      return "disagree";
    case CrossCheckStatus::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

IndexCrossCheck cross_check_index(const Ellipsoid& e, std::size_t j, std::int64_t n, const Tolerances& tol,
                                  int sample_count) {
  IndexCrossCheck check;
  check.family = j;
  check.iterate = n;
  check.formula = orbit_index(e, j, n);
  try {
    const HalfInteger numeric = cz_index(linearized_flow(e, j, n).path(sample_count), tol);
    check.numeric = numeric;
    check.status = numeric.twice() == 2 * check.formula ? CrossCheckStatus::agree : CrossCheckStatus::disagree;
  } catch (const CzError& err) {
    check.status = CrossCheckStatus::inconclusive;
    check.detail = err.what();
  }
  return check;
}

}  // namespace tamura
