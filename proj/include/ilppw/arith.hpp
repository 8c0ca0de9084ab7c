#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ilppw {

// All coefficients, residues and counters are 64-bit and every operation on
// them goes through the checked helpers below.
using Int = std::int64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& what) : Error("integer overflow in " + what) {}
};

inline Int checked_add(Int a, Int b) {
  Int out;
  if (__builtin_add_overflow(a, b, &out)) throw OverflowError("addition");
  return out;
}

inline Int checked_sub(Int a, Int b) {
  Int out;
  if (__builtin_sub_overflow(a, b, &out)) throw OverflowError("subtraction");
  return out;
}

inline Int checked_mul(Int a, Int b) {
  Int out;
  if (__builtin_mul_overflow(a, b, &out)) throw OverflowError("multiplication");
  return out;
}

inline Int checked_neg(Int a) { return checked_sub(0, a); }

inline Int checked_abs(Int a) { return a < 0 ? checked_neg(a) : a; }

// Floor and ceiling division for a positive divisor.
inline Int floor_div(Int num, Int den) {
  Int q = num / den;
  if ((num % den != 0) && (num < 0)) --q;
  return q;
}

inline Int ceil_div(Int num, Int den) {
  Int q = num / den;
  if ((num % den != 0) && (num > 0)) ++q;
  return q;
}

// Exact rational with positive denominator, kept in lowest terms.
struct Fraction {
  Int num = 0;
  Int den = 1;

  Fraction() = default;
  Fraction(Int n, Int d = 1) : num(n), den(d) {
    if (den == 0) throw Error("fraction with zero denominator");
    if (den < 0) {
      num = checked_neg(num);
      den = checked_neg(den);
    }
    Int g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  Int floor() const { return floor_div(num, den); }
  Int ceil() const { return ceil_div(num, den); }
  bool is_integer() const { return den == 1; }

  friend Fraction operator+(const Fraction& a, const Fraction& b) {
    return Fraction(checked_add(checked_mul(a.num, b.den), checked_mul(b.num, a.den)), checked_mul(a.den, b.den));
  }
  friend Fraction operator-(const Fraction& a) { return Fraction(checked_neg(a.num), a.den); }
  friend Fraction operator-(const Fraction& a, const Fraction& b) { return a + (-b); }

  friend bool operator==(const Fraction&, const Fraction&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Fraction& f) {
    os << f.num;
    if (f.den != 1) os << '/' << f.den;
    return os;
  }
};

}  // namespace ilppw
