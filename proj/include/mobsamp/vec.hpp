#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

#include "mobsamp/error.hpp"

namespace mobsamp {

inline constexpr int kMaxDim = 4;

/// Small fixed-capacity Euclidean vector (dimension 0..kMaxDim), stored inline.
class Vec {
 public:
  Vec() = default;

  explicit Vec(int dim) : dim_(dim) {
    if (dim < 0 || dim > kMaxDim) {
      throw DimensionError("dimension " + std::to_string(dim) + " out of supported range [0, 4]");
    }
  }

  Vec(std::initializer_list<double> xs) : Vec(static_cast<int>(xs.size())) {
    int i = 0;
    for (double x : xs) c_[i++] = x;
  }

  static Vec from_span(std::span<const double> xs) {
    Vec v(static_cast<int>(xs.size()));
    for (int i = 0; i < v.dim_; ++i) v.c_[i] = xs[i];
    return v;
  }

  static Vec unit(int dim, int axis) {
    Vec v(dim);
    v.c_.at(axis) = 1.0;
    return v;
  }

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) c_[i] *= s;
    return *this;
  }

  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

inline Vec operator+(Vec a, const Vec& b) { return a += b; }
inline Vec operator-(Vec a, const Vec& b) { return a -= b; }
inline Vec operator*(Vec a, double s) { return a *= s; }
inline Vec operator*(double s, Vec a) { return a *= s; }
inline Vec operator/(Vec a, double s) { return a *= 1.0 / s; }
inline Vec operator-(Vec a) { return a *= -1.0; }

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline Vec normalized(const Vec& a) {
  const double n = norm(a);
  if (n == 0.0) throw InvalidInput("cannot normalize the zero vector");
  return a / n;
}

inline void require_same_dim(const Vec& a, int d, const char* what) {
  if (a.dim() != d) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(d) + ", got " +
                         std::to_string(a.dim()));
  }
}

/// Axis-aligned box [lo, hi] used as a sampling or evaluation window.
struct Window {
  Vec lo;
  Vec hi;

  int dim() const { return lo.dim(); }
  double side(int i) const { return hi[i] - lo[i]; }
  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= side(i);
    return v;
  }
  Vec center() const { return 0.5 * (lo + hi); }
  bool contains(const Vec& x) const {
    for (int i = 0; i < dim(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }

  static Window cube(int d, double lo_all, double hi_all) {
    Window w{Vec(d), Vec(d)};
    for (int i = 0; i < d; ++i) {
      w.lo[i] = lo_all;
      w.hi[i] = hi_all;
    }
    return w;
  }
};

}  // namespace mobsamp
