#include "colprob/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace colprob {

namespace {

BigInt parse_int(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size())
    throw std::invalid_argument("expected an integer, got '" + std::string(text) + "'");
  BigInt v = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      throw std::invalid_argument("expected an integer, got '" + std::string(text) + "'");
    v = v * 10 + (text[i] - '0');
  }
  return negative ? BigInt(-v) : v;
}

BigInt pow10(int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= 10;
  return r;
}

}  // namespace

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  value_ = den < 0 ? boost::multiprecision::cpp_rational(-num, -den) : boost::multiprecision::cpp_rational(num, den);
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text), 1);
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

BigInt Rational::numerator() const { return boost::multiprecision::numerator(value_); }
BigInt Rational::denominator() const { return boost::multiprecision::denominator(value_); }

Rational& Rational::operator/=(const Rational& o) {
  if (o.value_ == 0) throw std::domain_error("rational division by zero");
  value_ /= o.value_;
  return *this;
}

std::string Rational::to_string() const {
  BigInt den = denominator();
  if (den == 1) return numerator().str();
  return numerator().str() + "/" + den.str();
}

std::string Rational::to_decimal(int significant) const {
  if (significant < 1) significant = 1;
  BigInt num = numerator();
  const BigInt den = denominator();
  if (num == 0) return "0";
  std::string sign;
  if (num < 0) {
    sign = "-";
    num = -num;
  }

  // Find e with 10^e <= num/den < 10^(e+1).
  int e = static_cast<int>(num.str().size()) - static_cast<int>(den.str().size());
  auto below = [&](int exp) {  // num/den < 10^exp
    return exp >= 0 ? num < den * pow10(exp) : num * pow10(-exp) < den;
  };
  while (below(e)) --e;
  while (!below(e + 1)) ++e;

  auto scaled_digits = [&](int exp) {
    const int shift = significant - 1 - exp;
    BigInt n = num, d = den;
    if (shift >= 0) n *= pow10(shift); else d *= pow10(-shift);
    return BigInt((2 * n + d) / (2 * d));
  };
  BigInt scaled = scaled_digits(e);
  if (scaled >= pow10(significant)) {
    ++e;
    scaled = scaled_digits(e);
  }
  const std::string digits = scaled.str();

  std::string out;
  if (e >= significant - 1) {
    out = digits + std::string(static_cast<std::size_t>(e - (significant - 1)), '0');
  } else if (e >= 0) {
    out = digits.substr(0, static_cast<std::size_t>(e + 1));
    out += '.';
    out += digits.substr(static_cast<std::size_t>(e + 1));
  } else {
    out = "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + digits;
  }
  return sign + out;
}

double Rational::to_double() const { return value_.convert_to<double>(); }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace colprob
