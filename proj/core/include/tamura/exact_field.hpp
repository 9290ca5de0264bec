#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace tamura {

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two values from different quadratic fields were combined.
class RadicandMismatch : public FieldError {
 public:
  RadicandMismatch(long lhs, long rhs);
};

class DivisionByZero : public FieldError {
 public:
  DivisionByZero() : FieldError("division by zero in quadratic field") {}
};

/// Expression text did not match the grammar, or named an unusable radicand.
class ParseError : public FieldError {
 public:
  ParseError(std::string message, std::size_t position);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class FieldContext;

/*
 * Exact element p + q*sqrt(d) of the real quadratic field Q(sqrt(d)).
 *
 * Both coefficients are GMP rationals kept in lowest terms with a positive
 * denominator. Since sqrt(d) is irrational, (p, q) is a unique representation,
 * so equality is coefficient equality and rationality is q == 0.
 *
 * Values are only created through a FieldContext, which validates d. Binary
 * operations require both operands to carry the same d and throw
 * RadicandMismatch otherwise.
 */
class QuadIrrational {
 public:
  const mpq_class& rational_part() const noexcept { return p_; }
  const mpq_class& surd_part() const noexcept { return q_; }
  long radicand() const noexcept { return d_; }

  bool is_zero() const { return sgn(p_) == 0 && sgn(q_) == 0; }
  bool is_rational() const { return sgn(q_) == 0; }

  /// Exact sign of p + q*sqrt(d): -1, 0 or +1.
  int sign() const;

  QuadIrrational conjugate() const { return {p_, -q_, d_}; }
  /// Field norm p^2 - q^2 d.
  mpq_class norm() const { return p_ * p_ - q_ * q_ * d_; }

  /// Nearest-double estimate. Not exact; only used for seeding and display.
  double to_double() const;

  /// Canonical text "p + r*sqrt(d)" with zero terms suppressed.
  std::string to_string() const;

  QuadIrrational operator-() const { return {-p_, -q_, d_}; }
  QuadIrrational& operator+=(const QuadIrrational& rhs);
  QuadIrrational& operator-=(const QuadIrrational& rhs);
  QuadIrrational& operator*=(const QuadIrrational& rhs);
  QuadIrrational& operator/=(const QuadIrrational& rhs);
  QuadIrrational& operator*=(const mpq_class& scalar);

  friend QuadIrrational operator+(QuadIrrational lhs, const QuadIrrational& rhs) { return lhs += rhs; }
  friend QuadIrrational operator-(QuadIrrational lhs, const QuadIrrational& rhs) { return lhs -= rhs; }
  friend QuadIrrational operator*(QuadIrrational lhs, const QuadIrrational& rhs) { return lhs *= rhs; }
  friend QuadIrrational operator/(QuadIrrational lhs, const QuadIrrational& rhs) { return lhs /= rhs; }
  friend QuadIrrational operator*(QuadIrrational lhs, const mpq_class& rhs) { return lhs *= rhs; }
  friend QuadIrrational operator*(const mpq_class& lhs, QuadIrrational rhs) { return rhs *= lhs; }

  friend bool operator==(const QuadIrrational& lhs, const QuadIrrational& rhs);
  friend std::strong_ordering operator<=>(const QuadIrrational& lhs, const QuadIrrational& rhs);

 private:
  friend class FieldContext;
  QuadIrrational(mpq_class p, mpq_class q, long d);

  void require_same_field(const QuadIrrational& other) const;

  mpq_class p_;
  mpq_class q_;
  long d_;
};

std::ostream& operator<<(std::ostream& os, const QuadIrrational& x);

/// Exact three-way comparison; throws RadicandMismatch across fields.
std::strong_ordering compare(const QuadIrrational& x, const QuadIrrational& y);

/// Exact floor of x.
mpz_class floor_of(const QuadIrrational& x);

/*
 * Certified floor of n*x for n >= 1 and x > 0.
 *
 * A double estimate only seeds the candidate f; the answer is accepted once
 * f <= n*x < f + 1 holds under exact comparison.
 */
mpz_class floor_product(const mpz_class& n, const QuadIrrational& x);

/// The field Q(sqrt(d)) for one non-square radicand d >= 2.
class FieldContext {
 public:
  explicit FieldContext(long radicand);

  long radicand() const noexcept { return d_; }

  QuadIrrational make(mpq_class rational, mpq_class surd = 0) const;
  QuadIrrational zero() const { return make(0); }
  QuadIrrational one() const { return make(1); }
  QuadIrrational sqrt_d() const { return make(0, 1); }

  /*
   * Parses
   *   EXPR := TERM (('+'|'-') TERM)*
   *   TERM := RAT | RAT '*' 'sqrt(' INT ')' | 'sqrt(' INT ')'
   *   RAT  := INT | INT '/' INT
   * with an optional leading sign and whitespace allowed between tokens.
   * Every sqrt radicand must equal this context's d.
   */
  QuadIrrational parse(std::string_view text) const;

  friend bool operator==(const FieldContext&, const FieldContext&) = default;

 private:
  long d_;
};

/// True iff d >= 2 and d is not a perfect square.
bool is_valid_radicand(long d);

}  // namespace tamura
