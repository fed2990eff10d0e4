#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eigloc {

static_assert(sizeof(long) == 8, "requires an LP64 platform (long must hold int64)");

namespace detail {

inline thread_local std::uint64_t rational_op_count = 0;

inline unsigned __int128 gcd_u128(unsigned __int128 a, unsigned __int128 b) {
  while (b != 0) {
    unsigned __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline mpz_class mpz_from_i128(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  mpz_class out{static_cast<unsigned long>(u >> 64)};
  out <<= 64;
  out += static_cast<unsigned long>(u & ~0ULL);
  if (neg) out = -out;
  return out;
}

}  // namespace detail

// Count of rational +,-,*,/ performed by this thread. Comparisons, copies
// and sign tests are free.
inline std::uint64_t rational_ops() { return detail::rational_op_count; }
inline void reset_rational_ops() { detail::rational_op_count = 0; }

// Exact rational scalar, always in canonical form (den > 0, gcd(num,den) = 1).
// Values whose numerator and denominator fit in int64 are stored inline;
// larger values are promoted to a heap-allocated GMP rational. Intermediate
// products are computed in 128 bits, so the inline path never overflows
// silently.
class Rational {
public:
  Rational() = default;
  Rational(long long n) : num_(n) {}
  Rational(long n) : num_(n) {}
  Rational(int n) : num_(n) {}
  Rational(long long n, long long d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    *this = from_i128(n, d);
  }
  explicit Rational(const mpq_class& q) { *this = from_mpq(q); }

  Rational(const Rational& o) : num_(o.num_), den_(o.den_), big_(o.big_ ? new mpq_class(*o.big_) : nullptr) {}
  Rational(Rational&& o) noexcept : num_(o.num_), den_(o.den_), big_(o.big_) {
    o.big_ = nullptr;
    o.num_ = 0;
    o.den_ = 1;
  }
  Rational& operator=(const Rational& o) {
    if (this != &o) {
      delete big_;
      num_ = o.num_;
      den_ = o.den_;
      big_ = o.big_ ? new mpq_class(*o.big_) : nullptr;
    }
    return *this;
  }
  Rational& operator=(Rational&& o) noexcept {
    if (this != &o) {
      delete big_;
      num_ = o.num_;
      den_ = o.den_;
      big_ = o.big_;
      o.big_ = nullptr;
      o.num_ = 0;
      o.den_ = 1;
    }
    return *this;
  }
  ~Rational() { delete big_; }

  // Accepts "p" or "p/q" with an optional leading minus, arbitrary precision.
  static Rational parse(std::string_view s) {
    const std::string text(s);
    std::size_t slash = text.find('/');
    const std::string num = slash == std::string::npos ? text : text.substr(0, slash);
    const std::string den = slash == std::string::npos ? std::string("1") : text.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false))
      throw std::invalid_argument("malformed rational: '" + text + "'");
    mpq_class q(num + "/" + den);
    if (q.get_den() == 0) throw std::domain_error("malformed rational (zero denominator): '" + text + "'");
    q.canonicalize();
    return from_mpq(q);
  }

  bool is_zero() const { return big_ ? big_->get_num() == 0 : num_ == 0; }
  bool is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }
  int sign() const {
    if (big_) return sgn(*big_);
    return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
  }

  mpq_class to_mpq() const {
    if (big_) return *big_;
    return mpq_class(static_cast<long>(num_), static_cast<unsigned long>(den_));
  }

  std::string str() const {
    if (big_) return big_->get_str();
    std::string s = std::to_string(num_);
    if (den_ != 1) s += "/" + std::to_string(den_);
    return s;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    ++detail::rational_op_count;
    if (!a.big_ && !b.big_)
      return from_i128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    return from_mpq(a.to_mpq() + b.to_mpq());
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    ++detail::rational_op_count;
    if (!a.big_ && !b.big_)
      return from_i128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    return from_mpq(a.to_mpq() - b.to_mpq());
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    ++detail::rational_op_count;
    if (!a.big_ && !b.big_) return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    return from_mpq(a.to_mpq() * b.to_mpq());
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    ++detail::rational_op_count;
    if (!a.big_ && !b.big_) return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    return from_mpq(a.to_mpq() / b.to_mpq());
  }
  Rational operator-() const {
    if (!big_ && num_ != INT64_MIN) {
      Rational r(*this);
      r.num_ = -r.num_;
      return r;
    }
    return from_mpq(mpq_class(-to_mpq()));
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    return ::cmp(a.to_mpq(), b.to_mpq()) == 0;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp3(a, b) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp3(a, b) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp3(a, b) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp3(a, b) >= 0; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
  using i128 = __int128;

  static int cmp3(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      const i128 lhs = i128(a.num_) * b.den_;
      const i128 rhs = i128(b.num_) * a.den_;
      return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
    }
    return ::cmp(a.to_mpq(), b.to_mpq());
  }

  static bool digits_ok(const std::string& s, bool sign_allowed) {
    std::size_t i = 0;
    if (sign_allowed && i < s.size() && s[i] == '-') ++i;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  }

  static Rational from_i128(i128 n, i128 d) {
    Rational r;
    if (n == 0) return r;
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const unsigned __int128 g =
        detail::gcd_u128(n < 0 ? -static_cast<unsigned __int128>(n) : static_cast<unsigned __int128>(n),
                         static_cast<unsigned __int128>(d));
    n /= static_cast<i128>(g);
    d /= static_cast<i128>(g);
    // exclude INT64_MIN so that negation always stays in range
    if (n >= -INT64_MAX && n <= INT64_MAX && d <= INT64_MAX) {
      r.num_ = static_cast<long long>(n);
      r.den_ = static_cast<long long>(d);
      return r;
    }
    r.big_ = new mpq_class(detail::mpz_from_i128(n), detail::mpz_from_i128(d));
    return r;
  }

  static Rational from_mpq(const mpq_class& q) {
    Rational r;
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p()) {
      const long n = q.get_num().get_si();
      if (n != INT64_MIN) {
        r.num_ = n;
        r.den_ = q.get_den().get_si();
        return r;
      }
    }
    r.big_ = new mpq_class(q);
    return r;
  }

  long long num_ = 0;
  long long den_ = 1;
  mpq_class* big_ = nullptr;
};

}  // namespace eigloc
