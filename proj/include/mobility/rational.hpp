#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace mobility {

// Exact fraction with a positive denominator, kept in lowest terms. Window
// boundaries live here so that event membership never depends on rounding.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  // Largest integer <= value.
  std::int64_t floor() const;
  // Smallest integer >= value.
  std::int64_t ceil() const;

  // Exact decimal rendering when the denominator has only factors 2 and 5,
  // "num/den" otherwise. `scale_digits` divides the value by 10^digits first
  // (used to print fixed-point timestamps in their original unit).
  std::string to_string(int scale_digits = 0) const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace mobility
