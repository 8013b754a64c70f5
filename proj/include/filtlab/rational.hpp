#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "filtlab/errors.hpp"

namespace filtlab {

// Exact rational number backed by GMP. A thin value wrapper so the rest of
// the code never sees gmp expression templates (those interact badly with
// auto, ternaries and std::min).
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}  // NOLINT: implicit by design, mirrors double
  Rat(long num, long den) : v_(num, den) {
    if (den == 0) throw Error(ErrorCode::ParseError, "rational with zero denominator");
    v_.canonicalize();
  }

  // Doubles are dyadic rationals; the conversion is exact.
  static Rat from_double(double x) {
    Rat r;
    r.v_ = mpq_class(x);
    return r;
  }

  // Accepts "a/b", integers, and plain decimals like "0.25".
  static Rat parse(const std::string& s);

  double to_double() const { return v_.get_d(); }

  std::string str() const { return v_.get_str(); }

  Rat operator-() const { return wrap(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.v_ == 0) throw Error(ErrorCode::NonFinite, "rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
  friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
  friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
  friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }

  friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) != 0; }
  friend bool operator<(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) >= 0; }

  friend Rat abs(const Rat& a) { return wrap(mpq_class(::abs(a.v_))); }

 private:
  static Rat wrap(mpq_class q) {
    Rat r;
    r.v_ = std::move(q);
    return r;
  }
  mpq_class v_;
};

inline Rat Rat::parse(const std::string& s) {
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty number literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    mpq_class q;
    if (q.set_str(num + "/" + den, 10) != 0)
      throw Error(ErrorCode::ParseError, "bad rational literal '" + s + "'");
    if (q.get_den() == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + s + "'");
    q.canonicalize();
    return wrap(std::move(q));
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0)
      throw Error(ErrorCode::ParseError, "bad integer literal '" + s + "'");
    return wrap(std::move(q));
  }
  // decimal: sign? digits '.' digits
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  const std::size_t frac_len = s.size() - dot - 1;
  if (digits.empty() || digits == "-" || digits == "+")
    throw Error(ErrorCode::ParseError, "bad decimal literal '" + s + "'");
  mpz_class num;
  if (num.set_str(digits, 10) != 0)
    throw Error(ErrorCode::ParseError, "bad decimal literal '" + s + "'");
  mpz_class den(1);
  for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
  mpq_class q(num, den);
  q.canonicalize();
  return wrap(std::move(q));
}

}  // namespace filtlab
