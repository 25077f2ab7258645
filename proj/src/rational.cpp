#include "csgap/rational.hpp"

#include <numeric>

#include "csgap/errors.hpp"

namespace csgap {
namespace {

__extension__ typedef __int128 i128;

Rational from_wide(i128 num, i128 den) {
  if (den == 0) throw UsageError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr i128 kMax = INT64_MAX;
  if (num > kMax || num < -kMax || den > kMax) throw NumericalFailure("rational overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw UsageError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    const auto a = parse(text.substr(0, slash));
    const auto b = parse(text.substr(slash + 1));
    if (a.den() != 1 || b.den() != 1) throw UsageError("bad fraction: " + std::string(text));
    return Rational(a.num(), b.num());
  }
  if (text.empty()) throw UsageError("empty number");
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
  i128 num = 0;
  i128 den = 1;
  bool digits = false;
  bool fraction = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c >= '0' && c <= '9') {
      if (num > INT64_MAX || den > INT64_MAX) throw UsageError("number too long: " + std::string(text));
      num = num * 10 + (c - '0');
      if (fraction) den *= 10;
      digits = true;
    } else if (c == '.' && !fraction) {
      fraction = true;
    } else {
      break;
    }
  }
  if (!digits) throw UsageError("not a number: " + std::string(text));
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw UsageError("not a number: " + std::string(text));
    const auto exp = parse(text.substr(pos + 1));
    if (exp.den() != 1 || exp.num() > 18 || exp.num() < -18) throw UsageError("bad exponent: " + std::string(text));
    for (std::int64_t k = 0; k < exp.num(); ++k) num *= 10;
    for (std::int64_t k = 0; k > exp.num(); --k) den *= 10;
  }
  return from_wide(negative ? -num : num, den);
}

std::string Rational::str() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const i128 lhs = static_cast<i128>(a.num_) * b.den_;
  const i128 rhs = static_cast<i128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational operator+(const Rational& a, const Rational& b) {
  return from_wide(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                   static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return from_wide(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
                   static_cast<i128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return from_wide(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

}  // namespace csgap
