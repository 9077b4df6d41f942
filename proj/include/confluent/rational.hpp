// Exact rational numbers for capacities, supplies and flow values.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace confluent {

using Int = boost::multiprecision::cpp_int;

class RatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Always kept in lowest terms with a positive denominator.
class Rat {
 public:
  Rat() = default;
  Rat(long long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rat(const Int& v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rat(const Int& num, const Int& den);

  // Accepts "a", "a/b" and a leading '-'. Throws RatError on a zero
  // denominator or malformed text.
  static Rat parse(std::string_view text);

  Int num() const { return boost::multiprecision::numerator(v_); }
  Int den() const { return boost::multiprecision::denominator(v_); }
  std::string str() const;

  int sign() const { return v_.sign(); }
  bool is_zero() const { return v_.is_zero(); }
  bool is_integer() const { return den() == 1; }
  Int floor() const;
  Int ceil() const;
  double to_double() const { return v_.convert_to<double>(); }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { Rat r; r.v_ = -a.v_; return r; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ > b.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  boost::multiprecision::cpp_rational v_{0};
};

// ceil(a / b) for b > 0.
Int ceil_div(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);

Rat min(const Rat& a, const Rat& b);
Rat max(const Rat& a, const Rat& b);

// 2^e, e may be negative.
Rat pow2(int e);
// Smallest e with 2^e >= x, for x > 0.
int ceil_log2(const Rat& x);
// Largest e with 2^e <= x, for x > 0.
int floor_log2(const Rat& x);
// Smallest i >= 0 with base^i >= x, for x >= 1.
int ceil_log(const Rat& x, const Int& base);
Rat pow(const Rat& base, int e);

std::int64_t to_int64(const Int& v);

}  // namespace confluent
