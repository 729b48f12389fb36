#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chanalloc {

// Exact rational arithmetic on 64-bit numerator/denominator with 128-bit
// intermediates.  Used for bid values so that allocation values compare and
// decompose exactly; weights and LP arithmetic stay in double.
class Rational {
 public:
  Rational() = default;
  Rational(long long value) : num_(value), den_(1) {}  // NOLINT: implicit on purpose
  Rational(long long num, long long den) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
    normalize();
  }

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  // Accepts "12", "-3", "4.25", "0.3", "7/2".  No exponents.
  static Rational from_string(std::string_view s) {
    std::size_t pos = 0;
    auto fail = [&s]() -> Rational {
      throw std::invalid_argument("Rational: cannot parse '" + std::string(s) + "'");
    };
    if (s.empty()) return fail();
    bool neg = false;
    if (s[pos] == '+' || s[pos] == '-') {
      neg = (s[pos] == '-');
      ++pos;
    }
    if (pos >= s.size() || !is_digit(s[pos])) return fail();
    __int128 num = 0;
    while (pos < s.size() && is_digit(s[pos])) {
      num = num * 10 + (s[pos] - '0');
      if (num > kLimit) return fail();
      ++pos;
    }
    __int128 den = 1;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      if (pos >= s.size() || !is_digit(s[pos])) return fail();
      while (pos < s.size() && is_digit(s[pos])) {
        num = num * 10 + (s[pos] - '0');
        den *= 10;
        if (num > kLimit || den > kLimit) return fail();
        ++pos;
      }
    } else if (pos < s.size() && s[pos] == '/') {
      ++pos;
      if (pos >= s.size() || !is_digit(s[pos])) return fail();
      den = 0;
      while (pos < s.size() && is_digit(s[pos])) {
        den = den * 10 + (s[pos] - '0');
        if (den > kLimit) return fail();
        ++pos;
      }
      if (den == 0) return fail();
    }
    if (pos != s.size()) return fail();
    if (neg) num = -num;
    return Rational(static_cast<long long>(num), static_cast<long long>(den));
  }

  // Integer if possible, otherwise a finite decimal, otherwise "num/den".
  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    long long scale = 1;
    int digits = 0;
    while (digits < 18) {
      if (scale % den_ == 0) break;
      scale *= 10;
      ++digits;
      if (scale > std::numeric_limits<long long>::max() / 10) break;
    }
    if (scale % den_ == 0) {
      long long factor = scale / den_;
      __int128 scaled = static_cast<__int128>(num_) * factor;
      bool neg = scaled < 0;
      if (neg) scaled = -scaled;
      std::string frac = int128_to_string(scaled);
      if (static_cast<int>(frac.size()) <= digits)
        frac.insert(0, digits + 1 - frac.size(), '0');
      frac.insert(frac.size() - digits, ".");
      while (frac.back() == '0') frac.pop_back();
      if (frac.back() == '.') frac.pop_back();
      return (neg ? "-" : "") + frac;
    }
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num_) * b.den_ +
                 static_cast<__int128>(b.num_) * a.den_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return make_reduced(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num_) * b.num_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return make_reduced(n, d);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::invalid_argument("Rational: division by zero");
    __int128 n = static_cast<__int128>(a.num_) * b.den_;
    __int128 d = static_cast<__int128>(a.den_) * b.num_;
    return make_reduced(n, d);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <
           static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  static constexpr __int128 kLimit = std::numeric_limits<long long>::max();

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  static std::string int128_to_string(__int128 v) {
    if (v == 0) return "0";
    std::string out;
    while (v > 0) {
      out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
      v /= 10;
    }
    return out;
  }

  static Rational make_reduced(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 an = n < 0 ? -n : n;
    __int128 g = gcd128(an, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > kLimit || n < -kLimit || d > kLimit)
      throw std::overflow_error("Rational: value out of 64-bit range");
    Rational r;
    r.num_ = static_cast<long long>(n);
    r.den_ = static_cast<long long>(d);
    return r;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (den_ == 0) den_ = 1;
  }

  long long num_ = 0;
  long long den_ = 1;
};

}  // namespace chanalloc
