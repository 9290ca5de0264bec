#include "tamura/exact_field.hpp"

#include <cmath>
#include <ostream>
#include <utility>

namespace tamura {

namespace {

// Sign of p + q*sqrt(d) for non-square d.
int sign_of(const mpq_class& p, const mpq_class& q, long d) {
  const int sp = sgn(p);
  const int sq = sgn(q);
  if (sq == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  // Opposite signs: the larger of p^2 and q^2 d wins. Equality would make
  // d a rational square, which the context rules out.
  const int c = cmp(mpq_class(p * p), mpq_class(q * q * d));
  return c > 0 ? sp : sq;
}

// Sign of (p - f) + q*sqrt(d) for an integer f.
int sign_minus_integer(const mpq_class& p, const mpq_class& q, long d, const mpz_class& f) {
  return sign_of(mpq_class(p - f), q, d);
}

mpz_class floor_seed(const QuadIrrational& x) {
  const double approx = x.to_double();
  if (std::isfinite(approx) && std::fabs(approx) < 0x1p52) {
    return mpz_class(std::floor(approx));
  }
  // Too large for a double to land within a few units: use a wide float.
  const auto bits = 64 + 2 * (mpz_sizeinbase(x.rational_part().get_num_mpz_t(), 2) +
                              mpz_sizeinbase(x.rational_part().get_den_mpz_t(), 2) +
                              mpz_sizeinbase(x.surd_part().get_num_mpz_t(), 2) +
                              mpz_sizeinbase(x.surd_part().get_den_mpz_t(), 2));
  mpf_class root(x.radicand(), bits);
  root = sqrt(root);
  mpf_class value(x.rational_part(), bits);
  value += mpf_class(x.surd_part(), bits) * root;
  mpf_class down(0, bits);
  mpf_floor(down.get_mpf_t(), value.get_mpf_t());
  return mpz_class(down);
}

}  // namespace

RadicandMismatch::RadicandMismatch(long lhs, long rhs)
    : FieldError("radicand mismatch: sqrt(" + std::to_string(lhs) + ") vs sqrt(" +
                 std::to_string(rhs) + ")") {}

ParseError::ParseError(std::string message, std::size_t position)
    : FieldError("parse error at position " + std::to_string(position) + ": " + message),
      position_(position) {}

QuadIrrational::QuadIrrational(mpq_class p, mpq_class q, long d)
    : p_(std::move(p)), q_(std::move(q)), d_(d) {
  p_.canonicalize();
  q_.canonicalize();
}

void QuadIrrational::require_same_field(const QuadIrrational& other) const {
  if (d_ != other.d_) throw RadicandMismatch(d_, other.d_);
}

int QuadIrrational::sign() const { return sign_of(p_, q_, d_); }

double QuadIrrational::to_double() const {
  const double root = std::sqrt(static_cast<double>(d_));
  const double p = p_.get_d();
  const double q = q_.get_d();
  if (sgn(p_) * sgn(q_) >= 0) return p + q * root;
  // p and q of opposite sign cancel; go through the norm instead.
  return norm().get_d() / (p - q * root);
}

std::string QuadIrrational::to_string() const {
  if (is_zero()) return "0";
  std::string surd;
  if (sgn(q_) != 0) {
    const mpq_class magnitude = abs(q_);
    surd = (magnitude == 1 ? std::string() : magnitude.get_str() + "*") + "sqrt(" +
           std::to_string(d_) + ")";
  }
  if (sgn(q_) == 0) return p_.get_str();
  if (sgn(p_) == 0) return (sgn(q_) < 0 ? "-" : "") + surd;
  return p_.get_str() + (sgn(q_) < 0 ? " - " : " + ") + surd;
}

QuadIrrational& QuadIrrational::operator+=(const QuadIrrational& rhs) {
  require_same_field(rhs);
  p_ += rhs.p_;
  q_ += rhs.q_;
  return *this;
}

QuadIrrational& QuadIrrational::operator-=(const QuadIrrational& rhs) {
  require_same_field(rhs);
  p_ -= rhs.p_;
  q_ -= rhs.q_;
  return *this;
}

QuadIrrational& QuadIrrational::operator*=(const QuadIrrational& rhs) {
  require_same_field(rhs);
  mpq_class p = p_ * rhs.p_ + q_ * rhs.q_ * d_;
  mpq_class q = p_ * rhs.q_ + rhs.p_ * q_;
  p_ = std::move(p);
  q_ = std::move(q);
  return *this;
}

QuadIrrational& QuadIrrational::operator/=(const QuadIrrational& rhs) {
  require_same_field(rhs);
  if (rhs.is_zero()) throw DivisionByZero();
  const mpq_class n = rhs.norm();
  *this *= rhs.conjugate();
  p_ /= n;
  q_ /= n;
  return *this;
}

QuadIrrational& QuadIrrational::operator*=(const mpq_class& scalar) {
  p_ *= scalar;
  q_ *= scalar;
  return *this;
}

bool operator==(const QuadIrrational& lhs, const QuadIrrational& rhs) {
  lhs.require_same_field(rhs);
  return lhs.p_ == rhs.p_ && lhs.q_ == rhs.q_;
}

std::strong_ordering operator<=>(const QuadIrrational& lhs, const QuadIrrational& rhs) {
  lhs.require_same_field(rhs);
  const int s = sign_of(mpq_class(lhs.p_ - rhs.p_), mpq_class(lhs.q_ - rhs.q_), lhs.d_);
  return s <=> 0;
}

std::strong_ordering compare(const QuadIrrational& x, const QuadIrrational& y) { return x <=> y; }

std::ostream& operator<<(std::ostream& os, const QuadIrrational& x) { return os << x.to_string(); }

mpz_class floor_of(const QuadIrrational& x) {
  const auto& p = x.rational_part();
  const auto& q = x.surd_part();
  const long d = x.radicand();
  mpz_class f = floor_seed(x);
  while (sign_minus_integer(p, q, d, f) < 0) --f;
  while (sign_minus_integer(p, q, d, f + 1) >= 0) ++f;
  return f;
}

mpz_class floor_product(const mpz_class& n, const QuadIrrational& x) {
  if (n < 1) throw std::invalid_argument("floor_product: n must be >= 1");
  if (x.sign() <= 0) throw std::invalid_argument("floor_product: x must be > 0");
  return floor_of(x * mpq_class(n));
}

bool is_valid_radicand(long d) {
  if (d < 2) return false;
  return mpz_perfect_square_p(mpz_class(d).get_mpz_t()) == 0;
}

FieldContext::FieldContext(long radicand) : d_(radicand) {
  if (!is_valid_radicand(radicand)) {
    throw FieldError("radicand must be a non-square integer >= 2, got " + std::to_string(radicand));
  }
}

QuadIrrational FieldContext::make(mpq_class rational, mpq_class surd) const {
  return QuadIrrational(std::move(rational), std::move(surd), d_);
}

}  // namespace tamura
