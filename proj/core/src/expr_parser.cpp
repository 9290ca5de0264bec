#include <cctype>
#include <string>

#include "tamura/exact_field.hpp"

namespace tamura {

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view text, const FieldContext& field) : text_(text), field_(field) {}

  QuadIrrational parse() {
    skip_space();
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = peek() == '-';
      ++pos_;
    }
    QuadIrrational value = term();
    if (negate) value = -value;
    for (;;) {
      skip_space();
      const char op = peek();
      if (op != '+' && op != '-') break;
      ++pos_;
      if (op == '+') {
        value += term();
      } else {
        value -= term();
      }
    }
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return value;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  void expect(char c) {
    skip_space();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  mpz_class integer() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  mpq_class rational() {
    mpz_class num = integer();
    skip_space();
    if (peek() != '/') return mpq_class(num);
    ++pos_;
    skip_space();
    const std::size_t at = pos_;
    mpz_class den = integer();
    if (den == 0) throw ParseError("zero denominator", at);
    mpq_class r(num, den);
    r.canonicalize();
    return r;
  }

  bool at_sqrt() {
    skip_space();
    return text_.substr(pos_, 4) == "sqrt";
  }

  // Parses "sqrt(INT)" and checks the radicand against the context.
  void radical() {
    pos_ += 4;
    expect('(');
    skip_space();
    const std::size_t at = pos_;
    const mpz_class r = integer();
    if (mpz_perfect_square_p(r.get_mpz_t()) != 0) {
      throw ParseError("perfect-square radicand sqrt(" + r.get_str() + ")", at);
    }
    if (r != field_.radicand()) {
      throw ParseError("radicand mismatch: sqrt(" + r.get_str() + ") in field Q(sqrt(" +
                           std::to_string(field_.radicand()) + "))",
                       at);
    }
    expect(')');
  }

  QuadIrrational term() {
    if (at_sqrt()) {
      radical();
      return field_.sqrt_d();
    }
    mpq_class coeff = rational();
    skip_space();
    if (peek() != '*') return field_.make(coeff);
    ++pos_;
    if (!at_sqrt()) fail("expected 'sqrt('");
    radical();
    return field_.make(0, coeff);
  }

  std::string_view text_;
  const FieldContext& field_;
  std::size_t pos_ = 0;
};

}  // namespace

QuadIrrational FieldContext::parse(std::string_view text) const { return ExprParser(text, *this).parse(); }

}  // namespace tamura
