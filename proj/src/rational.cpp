#include "mobility/rational.hpp"

#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mobility {
namespace {

using Wide = __int128;

std::int64_t narrow(Wide v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("rational overflow");
  }
  return static_cast<std::int64_t>(v);
}

Rational make(Wide num, Wide den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide a = num < 0 ? -num : num;
  Wide b = den;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

std::int64_t Rational::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

std::int64_t Rational::ceil() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ > 0) ++q;
  return q;
}

std::string Rational::to_string(int scale_digits) const {
  Wide num = num_;
  Wide den = den_;
  for (int i = 0; i < scale_digits; ++i) den *= 10;
  // Count the decimal digits needed: den must be 2^a 5^b.
  Wide rest = den;
  int twos = 0;
  int fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) {
    return std::to_string(num_) + "/" + std::to_string(den_) +
           (scale_digits ? "e-" + std::to_string(scale_digits) : "");
  }
  const int digits = twos > fives ? twos : fives;
  Wide pow10 = 1;
  for (int i = 0; i < digits; ++i) pow10 *= 10;
  Wide scaled = num * (pow10 / den);
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  const auto whole = static_cast<unsigned long long>(scaled / pow10);
  auto frac = static_cast<unsigned long long>(scaled % pow10);
  std::string out = negative ? "-" : "";
  out += std::to_string(whole);
  if (digits > 0) {
    std::string f = std::to_string(frac);
    f.insert(0, static_cast<std::size_t>(digits) - f.size(), '0');
    while (!f.empty() && f.back() == '0') f.pop_back();
    if (!f.empty()) out += "." + f;
  }
  return out;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const Wide lhs = static_cast<Wide>(a.num_) * b.den_;
  const Wide rhs = static_cast<Wide>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(static_cast<Wide>(a.num_) * b.den_ +
                  static_cast<Wide>(b.num_) * a.den_,
              static_cast<Wide>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make(static_cast<Wide>(a.num_) * b.den_ -
                  static_cast<Wide>(b.num_) * a.den_,
              static_cast<Wide>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make(static_cast<Wide>(a.num_) * b.num_,
              static_cast<Wide>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return make(static_cast<Wide>(a.num_) * b.den_,
              static_cast<Wide>(a.den_) * b.num_);
}

}  // namespace mobility
