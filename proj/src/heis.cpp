#include "heislab/heis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace heislab {

namespace {

void require_same_dim(const HPoint& a, const HPoint& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

HPoint identity(std::size_t dim) { return HPoint{CVector(dim, Complex{0.0, 0.0}), 0.0}; }

HPoint h_point(Complex x, double t) { return HPoint{CVector{x}, t}; }

HPoint h_point(CVector x, double t) { return HPoint{std::move(x), t}; }

HPoint from_real(const std::vector<double>& x, const std::vector<double>& y, double z) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("from_real: x and y must have equal length");
  }
  CVector h(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) h[i] = Complex{x[i], y[i]};
  return HPoint{std::move(h), z};
}

double symplectic(const CVector& x, const CVector& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("symplectic: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += h1::cross(x[i], y[i]);
  return s;
}

HPoint product(const HPoint& a, const HPoint& b) {
  require_same_dim(a, b, "product");
  HPoint r;
  r.horizontal.resize(a.dim());
  double w = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    r.horizontal[i] = a.horizontal[i] + b.horizontal[i];
    w += h1::cross(a.horizontal[i], b.horizontal[i]);
  }
  r.center = a.center + b.center + 0.5 * w;
  return r;
}

HPoint inverse(const HPoint& a) {
  HPoint r = a;
  for (auto& z : r.horizontal) z = -z;
  r.center = -r.center;
  return r;
}

HPoint dilate(const HPoint& a, double r) {
  HPoint out = a;
  for (auto& z : out.horizontal) z *= r;
  out.center *= r * r;
  return out;
}

HPoint rotate(const HPoint& a, double phi) {
  const Complex u = std::polar(1.0, phi);
  HPoint r = a;
  for (auto& z : r.horizontal) z *= u;
  return r;
}

HPoint rotate(const HPoint& a, double phi, std::size_t plane) {
  if (plane >= a.dim()) {
    throw std::out_of_range("rotate: plane index " + std::to_string(plane) + " out of range");
  }
  HPoint r = a;
  r.horizontal[plane] *= std::polar(1.0, phi);
  return r;
}

HPoint midpoint(const HPoint& a, const HPoint& b) {
  require_same_dim(a, b, "midpoint");
  HPoint r;
  r.horizontal.resize(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    r.horizontal[i] = 0.5 * (a.horizontal[i] + b.horizontal[i]);
  }
  r.center = 0.5 * (a.center + b.center);
  return r;
}

double plane_norm(const CVector& x) {
  double n2 = 0.0;
  for (const auto& z : x) n2 += std::norm(z);
  return std::sqrt(n2);
}

double koranyi_norm(const HPoint& a) {
  double n2 = 0.0;
  for (const auto& z : a.horizontal) n2 += std::norm(z);
  // (n2^2 + t^2)^(1/4) computed as sqrt(hypot) for stability at extremes.
  return std::sqrt(std::hypot(n2, a.center));
}

double distance(const HPoint& a, const HPoint& b) {
  require_same_dim(a, b, "distance");
  // N(a^{-1} b) expanded: horizontal part y - x, center s - t - omega(x,y)/2.
  double n2 = 0.0;
  double w = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    n2 += std::norm(b.horizontal[i] - a.horizontal[i]);
    w += h1::cross(a.horizontal[i], b.horizontal[i]);
  }
  const double ct = b.center - a.center - 0.5 * w;
  return std::sqrt(std::hypot(n2, ct));
}

double nh(const HPoint& a) { return std::sqrt(std::abs(a.center)); }

CVector plane_project(const HPoint& a) { return a.horizontal; }

}  // namespace heislab
