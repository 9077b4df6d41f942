#include "confluent/rational.hpp"

#include <cctype>
#include <limits>

namespace confluent {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rat::Rat(const Int& num, const Int& den) {
  if (den == 0) throw RatError("zero denominator");
  v_ = boost::multiprecision::cpp_rational(num, den);
}

Rat Rat::parse(std::string_view text) {
  bool neg = false;
  if (!text.empty() && text.front() == '-') {
    neg = true;
    text.remove_prefix(1);
  }
  const auto slash = text.find('/');
  const std::string_view a = text.substr(0, slash);
  const std::string_view b =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!all_digits(a) || !all_digits(b)) {
    throw RatError("malformed rational '" + std::string(text) + "'");
  }
  Int num{std::string(a)};
  Int den{std::string(b)};
  if (den == 0) throw RatError("zero denominator in '" + std::string(text) + "'");
  if (neg) num = -num;
  return Rat(num, den);
}

std::string Rat::str() const {
  if (is_integer()) return num().str();
  return num().str() + "/" + den().str();
}

Int Rat::floor() const {
  Int q = num() / den();
  if (sign() < 0 && q * den() != num()) q -= 1;
  return q;
}

Int Rat::ceil() const {
  Int q = num() / den();
  if (sign() > 0 && q * den() != num()) q += 1;
  return q;
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw RatError("division by zero");
  v_ /= o.v_;
  return *this;
}

Int ceil_div(const Int& a, const Int& b) {
  if (b <= 0) throw RatError("ceil_div needs a positive divisor");
  return Rat(a, b).ceil();
}

Int lcm(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::lcm(a, b);
}

Rat min(const Rat& a, const Rat& b) { return b < a ? b : a; }
Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

Rat pow2(int e) {
  Int one = 1;
  if (e >= 0) return Rat(one << e);
  return Rat(one, one << (-e));
}

int ceil_log2(const Rat& x) {
  if (x.sign() <= 0) throw RatError("ceil_log2 of non-positive value");
  int e = floor_log2(x);
  return pow2(e) == x ? e : e + 1;
}

int floor_log2(const Rat& x) {
  if (x.sign() <= 0) throw RatError("floor_log2 of non-positive value");
  // msb(num) - msb(den) is within one of the answer.
  const int guess = static_cast<int>(boost::multiprecision::msb(x.num())) -
                    static_cast<int>(boost::multiprecision::msb(x.den()));
  int e = guess;
  while (pow2(e) > x) --e;
  while (pow2(e + 1) <= x) ++e;
  return e;
}

int ceil_log(const Rat& x, const Int& base) {
  if (base < 2) throw RatError("logarithm base must be at least 2");
  int i = 0;
  Rat p = 1;
  while (p < x) {
    p *= Rat(base);
    ++i;
  }
  return i;
}

Rat pow(const Rat& base, int e) {
  Rat r = 1;
  const Rat b = e >= 0 ? base : Rat(1) / base;
  for (int i = 0; i < (e >= 0 ? e : -e); ++i) r *= b;
  return r;
}

std::int64_t to_int64(const Int& v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw RatError("integer out of 64-bit range");
  }
  return v.convert_to<std::int64_t>();
}

}  // namespace confluent
