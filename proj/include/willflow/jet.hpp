#pragma once
#include <array>
#include <cmath>

namespace willflow {

//! Forward-mode dual number with K partial derivatives. Nesting
//! Jet<Jet<double, K>, K> yields second derivatives.
template <class T, int K> struct Jet {
  T v{};
  std::array<T, K> d{};

  Jet() { d.fill(T(0.0)); }
  Jet(double c) : v(c) { d.fill(T(0.0)); }
  Jet(const T &val, const std::array<T, K> &der) : v(val), d(der) {}

  static Jet variable(const T &val, int k) {
    Jet j(val, {});
    j.d.fill(T(0.0));
    j.d[k] = T(1.0);
    return j;
  }
};

template <class T, int K> Jet<T, K> operator+(const Jet<T, K> &a, const Jet<T, K> &b) {
  Jet<T, K> r(a.v + b.v, {});
  for (int k = 0; k < K; ++k)
    r.d[k] = a.d[k] + b.d[k];
  return r;
}
template <class T, int K> Jet<T, K> operator-(const Jet<T, K> &a, const Jet<T, K> &b) {
  Jet<T, K> r(a.v - b.v, {});
  for (int k = 0; k < K; ++k)
    r.d[k] = a.d[k] - b.d[k];
  return r;
}
template <class T, int K> Jet<T, K> operator-(const Jet<T, K> &a) {
  Jet<T, K> r(-a.v, {});
  for (int k = 0; k < K; ++k)
    r.d[k] = -a.d[k];
  return r;
}
template <class T, int K> Jet<T, K> operator*(const Jet<T, K> &a, const Jet<T, K> &b) {
  Jet<T, K> r(a.v * b.v, {});
  for (int k = 0; k < K; ++k)
    r.d[k] = a.d[k] * b.v + a.v * b.d[k];
  return r;
}
template <class T, int K> Jet<T, K> operator/(const Jet<T, K> &a, const Jet<T, K> &b) {
  const T inv = T(1.0) / b.v;
  const T q = a.v * inv;
  Jet<T, K> r(q, {});
  for (int k = 0; k < K; ++k)
    r.d[k] = (a.d[k] - q * b.d[k]) * inv;
  return r;
}
template <class T, int K> Jet<T, K> operator*(double s, const Jet<T, K> &a) {
  Jet<T, K> r(a.v * s, {});
  for (int k = 0; k < K; ++k)
    r.d[k] = a.d[k] * s;
  return r;
}
template <class T, int K> Jet<T, K> operator*(const Jet<T, K> &a, double s) { return s * a; }
template <class T, int K> Jet<T, K> operator+(const Jet<T, K> &a, double s) {
  Jet<T, K> r = a;
  r.v = r.v + s;
  return r;
}
template <class T, int K> Jet<T, K> operator-(const Jet<T, K> &a, double s) { return a + (-s); }
template <class T, int K> Jet<T, K> operator/(const Jet<T, K> &a, double s) { return a * (1.0 / s); }

template <class T, int K> Jet<T, K> sqrt(const Jet<T, K> &a) {
  using std::sqrt;
  const T s = sqrt(a.v);
  const T h = T(0.5) / s;
  Jet<T, K> r(s, {});
  for (int k = 0; k < K; ++k)
    r.d[k] = a.d[k] * h;
  return r;
}

//! Value part of a possibly nested jet.
inline double value_of(double x) { return x; }
template <class T, int K> double value_of(const Jet<T, K> &j) { return value_of(j.v); }

} // namespace willflow
