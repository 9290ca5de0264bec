#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tamura/exact_field.hpp"

namespace tamura {

using Matrix = Eigen::MatrixXd;

/// Base class for failures of the numeric crossing-form engine.
class CzError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonSymplecticError : public CzError {
 public:
  NonSymplecticError(double t, double defect);
};

/// A local minimum of sigma_min(Psi_t - id) that is neither clearly zero nor clearly positive.
class FlatCrossingError : public CzError {
 public:
  FlatCrossingError(double t, double sigma);
  double time() const noexcept { return t_; }

 private:
  double t_;
};

class NonIsolatedCrossingsError : public CzError {
 public:
  explicit NonIsolatedCrossingsError(double t);
};

class DegenerateCrossingError : public CzError {
 public:
  DegenerateCrossingError(double t, double eigenvalue);
  double time() const noexcept { return t_; }

 private:
  double t_;
};

class NotACrossingError : public CzError {
 public:
  NotACrossingError(double t, double sigma);
};

/// Thresholds of the numeric engine. Refinement and isolation are relative to b - a.
struct Tolerances {
  double symplectic = 1e-9;
  double kernel = 1e-7;
  double accept = 1e-4;
  double eigen = 1e-6;
  double refine = 1e-10;
  double isolation = 1e-6;
};

/// Value k/2 stored as the integer k.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;
  static constexpr HalfInteger from_twice(std::int64_t twice) { return HalfInteger(twice); }
  static constexpr HalfInteger from_integer(std::int64_t value) { return HalfInteger(2 * value); }

  constexpr std::int64_t twice() const noexcept { return twice_; }
  constexpr bool is_integer() const noexcept { return twice_ % 2 == 0; }
  /// Throws std::domain_error unless is_integer().
  std::int64_t to_integer() const;
  double to_double() const noexcept { return static_cast<double>(twice_) / 2.0; }
  /// "3", "-1", "5/2".
  std::string to_string() const;

  constexpr HalfInteger& operator+=(HalfInteger rhs) noexcept {
    twice_ += rhs.twice_;
    return *this;
  }
  friend constexpr HalfInteger operator+(HalfInteger lhs, HalfInteger rhs) noexcept { return lhs += rhs; }
  friend constexpr auto operator<=>(HalfInteger, HalfInteger) = default;

 private:
  constexpr explicit HalfInteger(std::int64_t twice) : twice_(twice) {}
  std::int64_t twice_ = 0;
};

/// J = [[0, id], [-id, 0]] on R^{2n}, coordinates ordered (x_1..x_n, y_1..y_n).
Matrix standard_symplectic_form(int half_dim);

/// max |(Psi^T J Psi - J)_{ij}|.
double symplectic_defect(const Matrix& psi);

/// Smallest singular value of Psi - id.
double sigma_min_minus_identity(const Matrix& psi);

/*
 * Block sum of two symplectic matrices that respects the (x, y) coordinate
 * ordering: with Phi = [[A, B], [C, D]] and Psi = [[A', B'], [C', D']] the result
 * is [[A+A', B+B'], [C+C', D+D']] where + is the diagonal block sum.
 */
Matrix symplectic_block_sum(const Matrix& phi, const Matrix& psi);

/// A 2n x 2n matrix that passed the symplecticity check.
class SymplecticMatrix {
 public:
  /// Throws NonSymplecticError if the defect exceeds tol.
  static SymplecticMatrix checked(Matrix psi, double tol = Tolerances{}.symplectic);

  int half_dimension() const noexcept { return static_cast<int>(psi_.rows() / 2); }
  const Matrix& matrix() const noexcept { return psi_; }
  /// Psi^{-1} = -J Psi^T J.
  Matrix inverse() const;

 private:
  explicit SymplecticMatrix(Matrix psi) : psi_(std::move(psi)) {}
  Matrix psi_;
};

/*
 * A smooth path t -> Psi_t in Sp(2n) on [a, b].
 *
 * The evaluator must be re-entrant. Without an analytic derivative the engine
 * uses central differences with step 1e-6 (b - a), switching to a one-sided
 * second-order stencil within a step of either end.
 */
class SymplecticPath {
 public:
  using Evaluator = std::function<Matrix(double)>;

  SymplecticPath(int half_dim, double a, double b, Evaluator evaluator, Evaluator derivative = {},
                 int sample_count = 4096);

  int half_dimension() const noexcept { return half_dim_; }
  double start() const noexcept { return a_; }
  double end() const noexcept { return b_; }
  int sample_count() const noexcept { return sample_count_; }
  bool has_analytic_derivative() const noexcept { return static_cast<bool>(derivative_); }

  Matrix at(double t) const { return evaluator_(t); }
  Matrix derivative_at(double t) const;

  SymplecticPath with_sample_count(int sample_count) const;

 private:
  int half_dim_;
  double a_;
  double b_;
  Evaluator evaluator_;
  Evaluator derivative_;
  int sample_count_;
};

/// t -> R(alpha_1 t) + ... + R(alpha_n t) on [0, duration].
class RotationPath {
 public:
  /// Throws std::invalid_argument for empty or non-positive frequencies or duration <= 0.
  RotationPath(std::vector<double> freqs, double duration);

  std::span<const double> freqs() const noexcept { return freqs_; }
  double duration() const noexcept { return duration_; }

  Matrix at(double t) const;
  Matrix derivative_at(double t) const;
  SymplecticPath path(int sample_count = 4096) const;

 private:
  std::vector<double> freqs_;
  double duration_;
};

struct Crossing {
  double t = 0.0;
  Matrix kernel_basis;          // orthonormal columns spanning ker(Psi_t - id)
  Eigen::VectorXd eigenvalues;  // of the crossing form in kernel coordinates
  int signature = 0;
  bool degenerate = false;
};

/// The crossing form zeta^T S_t eta restricted to an orthonormal kernel basis.
struct CrossingForm {
  Matrix kernel_basis;
  Matrix form;
};

/*
 * Locates all crossings of the path: samples sigma_min(Psi_t - id), brackets
 * local minima over sample triples, refines each by golden-section search and
 * checks both endpoints explicitly. Sorted by time. Crossings within the
 * isolation gap of an endpoint are reported at the endpoint itself.
 *
 * Throws FlatCrossingError for a minimum in [kernel, accept),
 * NonIsolatedCrossingsError for crossings closer than the isolation gap and
 * NonSymplecticError for a sample that fails the symplecticity check.
 */
std::vector<Crossing> find_crossings(const SymplecticPath& path, const Tolerances& tol = {});

/// Throws NotACrossingError when sigma_min(Psi_t - id) > tol.kernel.
CrossingForm crossing_form(const SymplecticPath& path, double t, const Tolerances& tol = {});

/// Number of eigenvalues above tol minus number below -tol.
int signature(const Eigen::VectorXd& eigenvalues, double tol);

/*
 * Conley-Zehnder index from crossing signatures: half weight at the end
 * points, full weight inside. Requires isolated, non-degenerate crossings;
 * throws DegenerateCrossingError otherwise.
 */
HalfInteger cz_index(const SymplecticPath& path, const Tolerances& tol = {});

/*
 * Closed form for rotation paths. With r = duration * alpha / (2 pi) each
 * block contributes 1 + 2 floor(r) when r is not an integer and 2r when it is
 * (integrality decided within integer_tol).
 */
HalfInteger cz_rotation_analytic(std::span<const double> freqs, double duration,
                                 double integer_tol = 1e-9);

/// Same closed form on exact rotation numbers r_l = duration * alpha_l / (2 pi).
HalfInteger cz_rotation_exact(std::span<const QuadIrrational> rotation_numbers);

/// t -> Phi_t (+) Psi_t. Throws std::invalid_argument on a domain mismatch.
SymplecticPath direct_sum(const SymplecticPath& first, const SymplecticPath& second);

/// s -> Psi_{phi(s)} on [s0, s1]; phi must map [s0, s1] increasingly onto [a, b].
SymplecticPath reparametrize(const SymplecticPath& path, double s0, double s1,
                             std::function<double(double)> phi, std::function<double(double)> dphi);

/// t -> value on [a, b].
SymplecticPath constant_path(const Matrix& value, double a, double b);

}  // namespace tamura
