#pragma once

// Heisenberg group H_d in the complex model, with the Koranyi gauge.
//
// A point is (x, t) with x in C^d (the horizontal part) and t in R (the
// center). The group law is
//     (x, t) * (y, s) = (x + y, t + s + omega(x, y) / 2)
// where omega(x, y) = sum_i Im(conj(x_i) y_i) is the standard symplectic
// form. The Koranyi gauge N(x, t) = (|x|^4 + t^2)^(1/4) induces the
// left-invariant metric d(a, b) = N(a^{-1} b). Dilations
// delta_r(x, t) = (r x, r^2 t) scale d by r.

#include <complex>
#include <cstddef>
#include <vector>

namespace heislab {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

struct HPoint {
  CVector horizontal;
  double center = 0.0;

  std::size_t dim() const { return horizontal.size(); }
  bool operator==(const HPoint& o) const = default;
};

// Identity element of H_d.
HPoint identity(std::size_t dim);

// Convenience constructors.
HPoint h_point(Complex x, double t);                 // H_1
HPoint h_point(CVector x, double t);                 // H_d
// Real model (x, y, z) in R^d x R^d x R, law z + z' + (x.y' - x'.y)/2.
// Maps to the complex model via x + i y; the map is a group isomorphism.
HPoint from_real(const std::vector<double>& x, const std::vector<double>& y, double z);

// === group operations =====================================================

// Symplectic form omega(x, y) = sum Im(conj(x_i) y_i). Bilinear over R,
// antisymmetric, invariant under the diagonal unitary rotations below.
double symplectic(const CVector& x, const CVector& y);

HPoint product(const HPoint& a, const HPoint& b);
HPoint inverse(const HPoint& a);

// delta_r: scales the metric by |r| exactly.
HPoint dilate(const HPoint& a, double r);

// Multiplies every horizontal coordinate by exp(i phi). A group automorphism
// and a Koranyi isometry.
HPoint rotate(const HPoint& a, double phi);
// Same, but only coordinate `plane` turns.
HPoint rotate(const HPoint& a, double phi, std::size_t plane);

// Coordinate midpoint ((x + y)/2, (t + s)/2). Not the metric midpoint; it is
// the comparison point the fourth-power convexity inequalities are stated at.
HPoint midpoint(const HPoint& a, const HPoint& b);

// === gauge and metric =====================================================

double koranyi_norm(const HPoint& a);
double distance(const HPoint& a, const HPoint& b);

// Non-horizontality gauge NH(x, t) = |t|^(1/2). Vanishes exactly on the
// horizontal plane through the identity; NH <= N always.
double nh(const HPoint& a);

// Horizontal projection (x, t) -> x. 1-Lipschitz from (H_d, d) to (C^d, |.|).
CVector plane_project(const HPoint& a);
double plane_norm(const CVector& x);

// === fast scalar path for H_1 =============================================
//
// The embedding and walk pipelines live in H_1 and run over millions of
// points; these avoid vector allocation entirely.

namespace h1 {

inline double cross(Complex a, Complex b) {
  // Im(conj(a) b) without forming the product's real part twice.
  return a.real() * b.imag() - a.imag() * b.real();
}

inline double koranyi(Complex x, double t) {
  const double n2 = x.real() * x.real() + x.imag() * x.imag();
  return std::sqrt(std::hypot(n2, t));
}

// d((x,t),(y,s)) in H_1.
inline double distance(Complex x, double t, Complex y, double s) {
  const Complex dxy = y - x;
  const double ct = s - t - 0.5 * cross(x, y);
  return koranyi(dxy, ct);
}

// Center of a^{-1} b, the signed area defect of the pair.
inline double central(Complex x, double t, Complex y, double s) {
  return s - t - 0.5 * cross(x, y);
}

inline double nh_sq(Complex x, double t, Complex y, double s) {
  return std::abs(central(x, t, y, s));
}

}  // namespace h1

}  // namespace heislab
