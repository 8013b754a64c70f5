#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "filtlab/rational.hpp"

namespace filtlab {

// The library runs in one of two arithmetic modes: exact rationals (Rat) or
// double precision with a fixed comparison tolerance. Everything numeric is
// templated on the scalar type and consults these traits.
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
  static constexpr bool exact = true;
  static Rat tolerance() { return Rat(0); }
  static const char* mode_name() { return "exact"; }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static double tolerance() { return 1e-9; }
  static const char* mode_name() { return "float"; }
};

inline double to_double(const Rat& x) { return x.to_double(); }
inline double to_double(double x) { return x; }

template <class T>
T scalar_from_double(double x);
template <>
inline Rat scalar_from_double<Rat>(double x) { return Rat::from_double(x); }
template <>
inline double scalar_from_double<double>(double x) { return x; }

template <class T>
T scalar_parse(const std::string& s);
template <>
inline Rat scalar_parse<Rat>(const std::string& s) { return Rat::parse(s); }
template <>
inline double scalar_parse<double>(const std::string& s) {
  return Rat::parse(s).to_double();
}

inline std::string scalar_str(const Rat& x) { return x.str(); }
inline std::string scalar_str(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

inline double abs_val(double x) { return std::fabs(x); }
inline Rat abs_val(const Rat& x) { return abs(x); }

template <class T>
bool approx_eq(const T& a, const T& b) {
  T d = a - b;
  if (d < T(0)) d = -d;
  return d <= scalar_traits<T>::tolerance();
}

template <class T>
bool approx_le(const T& a, const T& b) {
  return a <= b + scalar_traits<T>::tolerance();
}

template <class T>
T vec_sum(const std::vector<T>& v) {
  T s(0);
  for (const T& x : v) s += x;
  return s;
}

}  // namespace filtlab
