#include "tamura/cz_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace tamura {

namespace {

std::string fmt_time(const char* prefix, double t) {
  std::ostringstream os;
  os.precision(17);
  os << prefix << t;
  return os.str();
}

Eigen::VectorXd singular_values(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues();
}

Matrix minus_identity(const Matrix& psi) { return psi - Matrix::Identity(psi.rows(), psi.cols()); }

struct Minimum {
  double t;
  double sigma;
};

// Golden-section search for a local minimum of f on [lo, hi], keeping the best
// point seen (including the bracket ends).
template <typename F>
Minimum golden_section(F&& f, double lo, double hi, double width) {
  constexpr double inv_phi = 0.6180339887498949;
  Minimum best{lo, f(lo)};
  if (const double fh = f(hi); fh < best.sigma) best = {hi, fh};
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > width) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
    if (f1 < best.sigma) best = {x1, f1};
    if (f2 < best.sigma) best = {x2, f2};
    if (x2 <= x1) break;  // bracket exhausted at double resolution
  }
  return best;
}

Crossing make_crossing(const SymplecticPath& path, double t, const Tolerances& tol) {
  CrossingForm form = crossing_form(path, t, tol);
  Crossing c;
  c.t = t;
  c.kernel_basis = std::move(form.kernel_basis);
  c.eigenvalues = Eigen::SelfAdjointEigenSolver<Matrix>(form.form, Eigen::EigenvaluesOnly).eigenvalues();
  c.signature = signature(c.eigenvalues, tol.eigen);
  c.degenerate = (c.eigenvalues.array().abs() < tol.eigen).any();
  return c;
}

}  // namespace

NonSymplecticError::NonSymplecticError(double t, double defect)
    : CzError(fmt_time("matrix is not symplectic at t=", t) + " (defect " + std::to_string(defect) + ")") {}

FlatCrossingError::FlatCrossingError(double t, double sigma)
    : CzError(fmt_time("crossing too flat at t=", t) + " (sigma_min " + std::to_string(sigma) + ")"), t_(t) {}

NonIsolatedCrossingsError::NonIsolatedCrossingsError(double t)
    : CzError(fmt_time("non-isolated crossings near t=", t)) {}

DegenerateCrossingError::DegenerateCrossingError(double t, double eigenvalue)
    : CzError(fmt_time("degenerate crossing at t=", t) + " (eigenvalue " + std::to_string(eigenvalue) + ")"),
      t_(t) {}

NotACrossingError::NotACrossingError(double t, double sigma)
    : CzError(fmt_time("not a crossing at t=", t) + " (sigma_min " + std::to_string(sigma) + ")") {}

std::int64_t HalfInteger::to_integer() const {
  if (!is_integer()) throw std::domain_error(to_string() + " is not an integer");
  return twice_ / 2;
}

std::string HalfInteger::to_string() const {
  if (is_integer()) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

Matrix standard_symplectic_form(int half_dim) {
  Matrix j = Matrix::Zero(2 * half_dim, 2 * half_dim);
  j.topRightCorner(half_dim, half_dim) = Matrix::Identity(half_dim, half_dim);
  j.bottomLeftCorner(half_dim, half_dim) = -Matrix::Identity(half_dim, half_dim);
  return j;
}

double symplectic_defect(const Matrix& psi) {
  const Matrix j = standard_symplectic_form(static_cast<int>(psi.rows() / 2));
  return (psi.transpose() * j * psi - j).cwiseAbs().maxCoeff();
}

double sigma_min_minus_identity(const Matrix& psi) { return singular_values(minus_identity(psi)).minCoeff(); }

Matrix symplectic_block_sum(const Matrix& phi, const Matrix& psi) {
  const Eigen::Index n1 = phi.rows() / 2;
  const Eigen::Index n2 = psi.rows() / 2;
  const Eigen::Index n = n1 + n2;
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  for (int bi = 0; bi < 2; ++bi) {
    for (int bj = 0; bj < 2; ++bj) {
      out.block(bi * n, bj * n, n1, n1) = phi.block(bi * n1, bj * n1, n1, n1);
      out.block(bi * n + n1, bj * n + n1, n2, n2) = psi.block(bi * n2, bj * n2, n2, n2);
    }
  }
  return out;
}

SymplecticMatrix SymplecticMatrix::checked(Matrix psi, double tol) {
  if (psi.rows() != psi.cols() || psi.rows() % 2 != 0 || psi.rows() == 0) {
    throw std::invalid_argument("symplectic matrix must be 2n x 2n");
  }
  if (const double defect = symplectic_defect(psi); !(defect <= tol)) throw NonSymplecticError(0.0, defect);
  return SymplecticMatrix(std::move(psi));
}

Matrix SymplecticMatrix::inverse() const {
  const Matrix j = standard_symplectic_form(half_dimension());
  return -j * psi_.transpose() * j;
}

SymplecticPath::SymplecticPath(int half_dim, double a, double b, Evaluator evaluator, Evaluator derivative,
                               int sample_count)
    : half_dim_(half_dim),
      a_(a),
      b_(b),
      evaluator_(std::move(evaluator)),
      derivative_(std::move(derivative)),
      sample_count_(sample_count) {
  if (half_dim < 1) throw std::invalid_argument("path half-dimension must be >= 1");
  if (!(a < b)) throw std::invalid_argument("path domain must satisfy a < b");
  if (!evaluator_) throw std::invalid_argument("path evaluator is empty");
  if (sample_count < 3) throw std::invalid_argument("path needs at least 3 samples");
}

Matrix SymplecticPath::derivative_at(double t) const {
  if (derivative_) return derivative_(t);
  const double h = 1e-6 * (b_ - a_);
  if (t - h < a_) return (-3.0 * at(t) + 4.0 * at(t + h) - at(t + 2.0 * h)) / (2.0 * h);
  if (t + h > b_) return (3.0 * at(t) - 4.0 * at(t - h) + at(t - 2.0 * h)) / (2.0 * h);
  return (at(t + h) - at(t - h)) / (2.0 * h);
}

SymplecticPath SymplecticPath::with_sample_count(int sample_count) const {
  return SymplecticPath(half_dim_, a_, b_, evaluator_, derivative_, sample_count);
}

RotationPath::RotationPath(std::vector<double> freqs, double duration)
    : freqs_(std::move(freqs)), duration_(duration) {
  if (freqs_.empty()) throw std::invalid_argument("rotation path needs at least one frequency");
  for (double f : freqs_) {
    if (!(f > 0.0) || !std::isfinite(f)) throw std::invalid_argument("rotation frequencies must be positive");
  }
  if (!(duration > 0.0) || !std::isfinite(duration)) throw std::invalid_argument("duration must be positive");
}

Matrix RotationPath::at(double t) const {
  const auto n = static_cast<Eigen::Index>(freqs_.size());
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index l = 0; l < n; ++l) {
    const double c = std::cos(freqs_[l] * t);
    const double s = std::sin(freqs_[l] * t);
    m(l, l) = c;
    m(l, n + l) = -s;
    m(n + l, l) = s;
    m(n + l, n + l) = c;
  }
  return m;
}

Matrix RotationPath::derivative_at(double t) const {
  const auto n = static_cast<Eigen::Index>(freqs_.size());
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index l = 0; l < n; ++l) {
    const double a = freqs_[l];
    const double c = a * std::cos(a * t);
    const double s = a * std::sin(a * t);
    m(l, l) = -s;
    m(l, n + l) = -c;
    m(n + l, l) = c;
    m(n + l, n + l) = -s;
  }
  return m;
}

SymplecticPath RotationPath::path(int sample_count) const {
  RotationPath self = *this;
  return SymplecticPath(
      static_cast<int>(freqs_.size()), 0.0, duration_, [self](double t) { return self.at(t); },
      [self](double t) { return self.derivative_at(t); }, sample_count);
}

int signature(const Eigen::VectorXd& eigenvalues, double tol) {
  int sig = 0;
  for (double lambda : eigenvalues) {
    if (lambda > tol) ++sig;
    if (lambda < -tol) --sig;
  }
  return sig;
}

CrossingForm crossing_form(const SymplecticPath& path, double t, const Tolerances& tol) {
  const Matrix psi = path.at(t);
  Eigen::JacobiSVD<Matrix> svd(minus_identity(psi), Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (const double smin = sv.minCoeff(); smin > tol.kernel) throw NotACrossingError(t, smin);

  std::vector<Eigen::Index> kernel_cols;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= tol.kernel) kernel_cols.push_back(i);
  }
  CrossingForm out;
  out.kernel_basis.resize(psi.rows(), static_cast<Eigen::Index>(kernel_cols.size()));
  for (std::size_t c = 0; c < kernel_cols.size(); ++c) {
    out.kernel_basis.col(static_cast<Eigen::Index>(c)) = svd.matrixV().col(kernel_cols[c]);
  }

  const Matrix j = standard_symplectic_form(path.half_dimension());
  const Matrix inverse = -j * psi.transpose() * j;
  const Matrix s = j * path.derivative_at(t) * inverse;
  const Matrix symmetric = 0.5 * (s + s.transpose());
  out.form = out.kernel_basis.transpose() * symmetric * out.kernel_basis;
  return out;
}

std::vector<Crossing> find_crossings(const SymplecticPath& path, const Tolerances& tol) {
  const double a = path.start();
  const double b = path.end();
  const double length = b - a;
  const double gap = tol.isolation * length;
  const double width = tol.refine * length;
  const int count = path.sample_count();

  auto sigma_at = [&](double t) { return sigma_min_minus_identity(path.at(t)); };
  auto checked_sigma = [&](double t) {
    const Matrix psi = path.at(t);
    if (const double defect = symplectic_defect(psi); !(defect <= tol.symplectic)) {
      throw NonSymplecticError(t, defect);
    }
    return sigma_min_minus_identity(psi);
  };

  std::vector<double> ts(static_cast<std::size_t>(count));
  std::vector<double> sig(ts.size());
  double lipschitz = 0.0;
  Matrix previous;
  for (int i = 0; i < count; ++i) {
    const double t = (i == count - 1) ? b : a + length * static_cast<double>(i) / (count - 1);
    const Matrix psi = path.at(t);
    if (const double defect = symplectic_defect(psi); !(defect <= tol.symplectic)) {
      throw NonSymplecticError(t, defect);
    }
    ts[static_cast<std::size_t>(i)] = t;
    sig[static_cast<std::size_t>(i)] = sigma_min_minus_identity(psi);
    if (i > 0) lipschitz = std::max(lipschitz, (psi - previous).norm() / (t - ts[static_cast<std::size_t>(i) - 1]));
    previous = psi;
  }

  for (std::size_t i = 0; i + 1 < sig.size(); ++i) {
    if (sig[i] <= tol.kernel && sig[i + 1] <= tol.kernel) throw NonIsolatedCrossingsError(ts[i]);
  }

  auto classify_endpoint = [&](double t, double sigma) {
    if (sigma <= tol.kernel) return true;
    if (sigma < tol.accept) throw FlatCrossingError(t, sigma);
    return false;
  };
  const bool cross_a = classify_endpoint(a, sig.front());
  const bool cross_b = classify_endpoint(b, sig.back());

  // sigma_min(Psi_t - id) is Lipschitz with constant sup |Psi'|_2, estimated
  // from the samples with a safety factor of 2. An interval whose end values
  // cannot rule out a zero is bisected down to a quarter of the isolation gap,
  // so that two nearby crossings get separate local minima.
  lipschitz *= 2.0;
  std::vector<std::pair<double, double>> samples;
  samples.reserve(ts.size());
  const double min_step = 0.25 * gap;
  auto subdivide = [&](auto&& self, double t0, double s0, double t1, double s1) -> void {
    if (t1 - t0 <= min_step || s0 + s1 > lipschitz * (t1 - t0)) return;
    const double tm = 0.5 * (t0 + t1);
    const double sm = checked_sigma(tm);
    self(self, t0, s0, tm, sm);
    samples.emplace_back(tm, sm);
    self(self, tm, sm, t1, s1);
  };
  for (std::size_t i = 0; i < ts.size(); ++i) {
    samples.emplace_back(ts[i], sig[i]);
    if (i + 1 < ts.size()) subdivide(subdivide, ts[i], sig[i], ts[i + 1], sig[i + 1]);
  }

  std::vector<Minimum> interior;
  const std::size_t last = samples.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    const double s = samples[i].second;
    const bool left_ok = i == 0 || samples[i - 1].second > s;
    const bool right_ok = i == last || s <= samples[i + 1].second;
    if (!left_ok || !right_ok) continue;

    const double lo = samples[i == 0 ? 0 : i - 1].first;
    const double hi = samples[i == last ? last : i + 1].first;
    Minimum m = golden_section(sigma_at, lo, hi, width);

    const bool near_a = m.t - a <= gap;
    const bool near_b = b - m.t <= gap;
    if (near_a || near_b) {
      // A zero inside the isolation gap of an end point that is not itself a crossing.
      if (m.sigma <= tol.kernel && !(near_a ? cross_a : cross_b)) throw NonIsolatedCrossingsError(m.t);
      continue;
    }
    if (m.sigma > tol.kernel && m.sigma < tol.accept) {
      // Push to double resolution before calling it ambiguous.
      m = golden_section(sigma_at, std::max(a, m.t - width), std::min(b, m.t + width), 0.0);
      if (m.sigma > tol.kernel && m.sigma < tol.accept) throw FlatCrossingError(m.t, m.sigma);
    }
    if (m.sigma <= tol.kernel) interior.push_back(m);
  }

  std::sort(interior.begin(), interior.end(), [](const Minimum& x, const Minimum& y) { return x.t < y.t; });
  // Brackets closer than the gap either converged onto one zero (sigma stays in
  // the kernel between them) or found two zeros that are too close to separate.
  std::vector<Minimum> merged;
  for (const Minimum& m : interior) {
    if (!merged.empty() && m.t - merged.back().t < gap) {
      if (sigma_at(0.5 * (m.t + merged.back().t)) > tol.kernel) throw NonIsolatedCrossingsError(merged.back().t);
      if (m.sigma < merged.back().sigma) merged.back() = m;
      continue;
    }
    merged.push_back(m);
  }

  std::vector<double> times;
  if (cross_a) times.push_back(a);
  for (const Minimum& m : merged) times.push_back(m.t);
  if (cross_b) times.push_back(b);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    if (times[i + 1] - times[i] < gap) throw NonIsolatedCrossingsError(times[i]);
  }

  std::vector<Crossing> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(make_crossing(path, t, tol));
  return out;
}

HalfInteger cz_index(const SymplecticPath& path, const Tolerances& tol) {
  std::int64_t twice = 0;
  for (const Crossing& c : find_crossings(path, tol)) {
    if (c.degenerate) {
      Eigen::Index idx = 0;
      c.eigenvalues.cwiseAbs().minCoeff(&idx);
      throw DegenerateCrossingError(c.t, c.eigenvalues(idx));
    }
    const bool endpoint = c.t == path.start() || c.t == path.end();
    twice += endpoint ? c.signature : 2 * c.signature;
  }
  return HalfInteger::from_twice(twice);
}

HalfInteger cz_rotation_analytic(std::span<const double> freqs, double duration, double integer_tol) {
  if (freqs.empty()) throw std::invalid_argument("rotation path needs at least one frequency");
  if (!(duration > 0.0)) throw std::invalid_argument("duration must be positive");
  std::int64_t twice = 0;
  for (double alpha : freqs) {
    if (!(alpha > 0.0)) throw std::invalid_argument("rotation frequencies must be positive");
    const double r = duration * alpha / (2.0 * std::numbers::pi);
    const double k = std::round(r);
    if (std::fabs(r - k) <= integer_tol) {
      twice += 4 * static_cast<std::int64_t>(k);
    } else {
      twice += 2 + 4 * static_cast<std::int64_t>(std::floor(r));
    }
  }
  return HalfInteger::from_twice(twice);
}

HalfInteger cz_rotation_exact(std::span<const QuadIrrational> rotation_numbers) {
  if (rotation_numbers.empty()) throw std::invalid_argument("rotation path needs at least one block");
  mpz_class twice = 0;
  for (const QuadIrrational& r : rotation_numbers) {
    if (r.sign() <= 0) throw std::invalid_argument("rotation numbers must be positive");
    const mpz_class f = floor_of(r);
    const bool integral = r.is_rational() && r.rational_part() == f;
    twice += integral ? mpz_class(4 * f) : mpz_class(2 + 4 * f);
  }
  if (!twice.fits_slong_p()) throw std::overflow_error("index does not fit in 64 bits");
  return HalfInteger::from_twice(twice.get_si());
}

SymplecticPath direct_sum(const SymplecticPath& first, const SymplecticPath& second) {
  if (first.start() != second.start() || first.end() != second.end()) {
    throw std::invalid_argument("direct sum needs paths on the same domain");
  }
  auto eval = [first, second](double t) { return symplectic_block_sum(first.at(t), second.at(t)); };
  auto deriv = [first, second](double t) {
    return symplectic_block_sum(first.derivative_at(t), second.derivative_at(t));
  };
  return SymplecticPath(first.half_dimension() + second.half_dimension(), first.start(), first.end(),
                        std::move(eval), std::move(deriv),
                        std::max(first.sample_count(), second.sample_count()));
}

SymplecticPath reparametrize(const SymplecticPath& path, double s0, double s1,
                             std::function<double(double)> phi, std::function<double(double)> dphi) {
  if (!phi || !dphi) throw std::invalid_argument("reparametrization needs phi and its derivative");
  const double scale = path.end() - path.start();
  if (std::fabs(phi(s0) - path.start()) > 1e-12 * scale || std::fabs(phi(s1) - path.end()) > 1e-12 * scale) {
    throw std::invalid_argument("reparametrization must map [s0, s1] onto the path domain");
  }
  const double a = path.start();
  const double b = path.end();
  // Clamp so rounding in phi never leaves [a, b].
  auto clamped = [phi, a, b](double s) { return std::clamp(phi(s), a, b); };
  auto eval = [path, clamped](double s) { return path.at(clamped(s)); };
  auto deriv = [path, clamped, dphi](double s) { return Matrix(path.derivative_at(clamped(s)) * dphi(s)); };
  return SymplecticPath(path.half_dimension(), s0, s1, std::move(eval), std::move(deriv), path.sample_count());
}

SymplecticPath constant_path(const Matrix& value, double a, double b) {
  const auto n = static_cast<int>(value.rows() / 2);
  Matrix zero = Matrix::Zero(value.rows(), value.cols());
  return SymplecticPath(
      n, a, b, [value](double) { return value; }, [zero](double) { return zero; });
}

}  // namespace tamura
