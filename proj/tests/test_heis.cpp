#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "heislab/heis.hpp"
#include "heislab/rng.hpp"

using namespace heislab;

namespace {

// Random point with horizontal coordinates ~ N(0,1) and center ~ N(0,1)
// scaled to the squared horizontal size, matching the anisotropy of the
// dilations.
HPoint random_point(CounterRng& rng, std::size_t dim) {
  CVector x(dim);
  double n2 = 0.0;
  for (auto& z : x) {
    z = Complex{rng.next_normal(), rng.next_normal()};
    n2 += std::norm(z);
  }
  return HPoint{std::move(x), rng.next_normal() * (1.0 + n2)};
}

double point_scale(const HPoint& p) { return 1.0 + plane_norm(p.horizontal) + std::abs(p.center); }

}  // namespace

TEST_CASE("group axioms hold to roundoff") {
  CounterRng rng(2024, 0);
  for (std::size_t dim : {std::size_t{1}, std::size_t{2}, std::size_t{8}}) {
    const HPoint e = identity(dim);
    for (int it = 0; it < 20000; ++it) {
      const HPoint a = random_point(rng, dim);
      const HPoint b = random_point(rng, dim);
      const HPoint c = random_point(rng, dim);

      const HPoint ab_c = product(product(a, b), c);
      const HPoint a_bc = product(a, product(b, c));
      const double scale = point_scale(ab_c) + point_scale(a_bc);
      for (std::size_t i = 0; i < dim; ++i) {
        REQUIRE(std::abs(ab_c.horizontal[i] - a_bc.horizontal[i]) <= 1e-12 * scale);
      }
      REQUIRE(std::abs(ab_c.center - a_bc.center) <= 1e-12 * scale * scale);

      REQUIRE(product(e, a) == a);
      REQUIRE(product(a, e) == a);

      const HPoint unit = product(a, inverse(a));
      REQUIRE(plane_norm(unit.horizontal) <= 1e-12 * point_scale(a));
      REQUIRE(std::abs(unit.center) <= 1e-12 * point_scale(a) * point_scale(a));
    }
  }
}

TEST_CASE("distance is left-invariant and dilations scale it") {
  CounterRng rng(2025, 0);
  for (int it = 0; it < 20000; ++it) {
    const HPoint g = random_point(rng, 2);
    const HPoint a = random_point(rng, 2);
    const HPoint b = random_point(rng, 2);
    const double d0 = distance(a, b);
    const double d1 = distance(product(g, a), product(g, b));
    REQUIRE(std::abs(d0 - d1) <= 1e-11 * (1.0 + d0 + point_scale(g) * point_scale(g)));

    const double r = 0.1 + 3.0 * rng.next_u01();
    const double dr = distance(dilate(a, r), dilate(b, r));
    REQUIRE(std::abs(dr - r * d0) <= 1e-12 * (1.0 + dr));
  }
}

TEST_CASE("koranyi gauge satisfies the metric axioms on random samples") {
  CounterRng rng(2026, 0);
  for (int it = 0; it < 20000; ++it) {
    const HPoint a = random_point(rng, 1);
    const HPoint b = random_point(rng, 1);
    const HPoint c = random_point(rng, 1);
    const double dab = distance(a, b);
    const double dba = distance(b, a);
    REQUIRE(std::abs(dab - dba) <= 1e-12 * (1.0 + dab));
    REQUIRE(dab >= 0.0);
    // Triangle inequality for the gauge metric, checked statistically here
    // and relied on throughout.
    REQUIRE(distance(a, c) <= dab + distance(b, c) + 1e-12 * (1.0 + dab));
  }
  CHECK(distance(h_point(Complex{0, 0}, 0), h_point(Complex{0, 0}, 0)) == 0.0);
}

TEST_CASE("gauge values on axis points") {
  CHECK(koranyi_norm(h_point(Complex{1.0, 0.0}, 0.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(koranyi_norm(h_point(Complex{0.0, 0.0}, 4.0)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(koranyi_norm(h_point(Complex{0.0, 0.0}, -4.0)) == doctest::Approx(2.0).epsilon(1e-15));
  // Pure horizontal pair on the real axis: Euclidean distance.
  CHECK(distance(h_point(Complex{1.0, 0.0}, 0.0), h_point(Complex{-1.0, 0.0}, 0.0)) ==
        doctest::Approx(2.0).epsilon(1e-15));
  // A central step costs the square root of its height.
  CHECK(distance(h_point(Complex{0, 0}, 0.0), h_point(Complex{0, 0}, 9.0)) ==
        doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("nh lower bounds the gauge and vanishes exactly on horizontal points") {
  CounterRng rng(2027, 0);
  for (int it = 0; it < 20000; ++it) {
    const HPoint a = random_point(rng, 3);
    REQUIRE(nh(a) <= koranyi_norm(a) * (1.0 + 1e-14));
  }
  CHECK(nh(h_point(Complex{3.0, -2.0}, 0.0)) == 0.0);
  CHECK(nh(h_point(Complex{0.0, 0.0}, 0.25)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("plane projection is 1-Lipschitz") {
  CounterRng rng(2028, 0);
  for (int it = 0; it < 20000; ++it) {
    const HPoint a = random_point(rng, 2);
    const HPoint b = random_point(rng, 2);
    CVector diff = plane_project(b);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= a.horizontal[i];
    REQUIRE(plane_norm(diff) <= distance(a, b) * (1.0 + 1e-12));
  }
}

TEST_CASE("rotations are isometric automorphisms") {
  CounterRng rng(2029, 0);
  for (int it = 0; it < 10000; ++it) {
    const HPoint a = random_point(rng, 2);
    const HPoint b = random_point(rng, 2);
    const double phi = (rng.next_u01() - 0.5) * 20.0;

    const double d0 = distance(a, b);
    const double d1 = distance(rotate(a, phi), rotate(b, phi));
    REQUIRE(std::abs(d0 - d1) <= 1e-12 * (1.0 + d0));

    // Homomorphism: rotate(a b) = rotate(a) rotate(b).
    const HPoint lhs = rotate(product(a, b), phi);
    const HPoint rhs = product(rotate(a, phi), rotate(b, phi));
    const double scale = point_scale(lhs);
    for (std::size_t i = 0; i < 2; ++i) {
      REQUIRE(std::abs(lhs.horizontal[i] - rhs.horizontal[i]) <= 1e-12 * scale);
    }
    REQUIRE(std::abs(lhs.center - rhs.center) <= 1e-12 * scale * scale);

    // Single-plane rotation also preserves the symplectic form.
    const double w0 = symplectic(a.horizontal, b.horizontal);
    const double w1 = symplectic(rotate(a, phi, 1).horizontal, rotate(b, phi, 1).horizontal);
    REQUIRE(std::abs(w0 - w1) <= 1e-12 * (1.0 + std::abs(w0) + point_scale(a) * point_scale(b)));
  }
}

TEST_CASE("symplectic form is bilinear and antisymmetric") {
  CounterRng rng(2030, 0);
  for (int it = 0; it < 10000; ++it) {
    const CVector x = random_point(rng, 4).horizontal;
    const CVector y = random_point(rng, 4).horizontal;
    const CVector z = random_point(rng, 4).horizontal;
    const double s = 2.0 * rng.next_u01() - 1.0;

    REQUIRE(std::abs(symplectic(x, y) + symplectic(y, x)) <=
            1e-12 * (1.0 + std::abs(symplectic(x, y))));

    CVector xs = x;
    for (auto& v : xs) v *= s;
    REQUIRE(std::abs(symplectic(xs, y) - s * symplectic(x, y)) <=
            1e-12 * (1.0 + std::abs(symplectic(x, y))));

    CVector xz = x;
    for (std::size_t i = 0; i < 4; ++i) xz[i] += z[i];
    REQUIRE(std::abs(symplectic(xz, y) - symplectic(x, y) - symplectic(z, y)) <=
            1e-11 * (1.0 + std::abs(symplectic(x, y)) + std::abs(symplectic(z, y))));
  }
  // omega((1,0),(i,0)) = 1 in H_1.
  CHECK(symplectic(CVector{Complex{1, 0}}, CVector{Complex{0, 1}}) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("real and complex models agree") {
  CounterRng rng(2031, 0);
  for (int it = 0; it < 5000; ++it) {
    std::vector<double> x1(3), y1(3), x2(3), y2(3);
    for (int i = 0; i < 3; ++i) {
      x1[i] = rng.next_normal();
      y1[i] = rng.next_normal();
      x2[i] = rng.next_normal();
      y2[i] = rng.next_normal();
    }
    const double z1 = rng.next_normal();
    const double z2 = rng.next_normal();

    // Real-model law: z1 + z2 + (x1 . y2 - x2 . y1) / 2.
    double dot = 0.0;
    for (int i = 0; i < 3; ++i) dot += x1[i] * y2[i] - x2[i] * y1[i];
    const double z_expected = z1 + z2 + 0.5 * dot;

    const HPoint p = product(from_real(x1, y1, z1), from_real(x2, y2, z2));
    REQUIRE(std::abs(p.center - z_expected) <= 1e-12 * (1.0 + std::abs(z_expected)));
    for (int i = 0; i < 3; ++i) {
      REQUIRE(p.horizontal[static_cast<std::size_t>(i)] ==
              Complex{x1[i] + x2[i], y1[i] + y2[i]});
    }
  }
}

TEST_CASE("scalar h1 path matches the general implementation") {
  CounterRng rng(2032, 0);
  for (int it = 0; it < 20000; ++it) {
    const HPoint a = random_point(rng, 1);
    const HPoint b = random_point(rng, 1);
    const double d_gen = distance(a, b);
    const double d_h1 = h1::distance(a.horizontal[0], a.center, b.horizontal[0], b.center);
    REQUIRE(d_gen == d_h1);
    REQUIRE(h1::koranyi(a.horizontal[0], a.center) == koranyi_norm(a));
    const HPoint ainv_b = product(inverse(a), b);
    REQUIRE(std::abs(h1::central(a.horizontal[0], a.center, b.horizontal[0], b.center) -
                     ainv_b.center) <= 1e-12 * (1.0 + std::abs(ainv_b.center)));
  }
}

TEST_CASE("dimension mismatches are rejected") {
  const HPoint a = h_point(Complex{1, 0}, 0);
  const HPoint b = identity(2);
  CHECK_THROWS_AS(product(a, b), std::invalid_argument);
  CHECK_THROWS_AS(distance(a, b), std::invalid_argument);
  CHECK_THROWS_AS(midpoint(a, b), std::invalid_argument);
  CHECK_THROWS_AS(symplectic(a.horizontal, b.horizontal), std::invalid_argument);
  CHECK_THROWS_AS(from_real({1.0, 2.0}, {1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rotate(a, 0.5, 3), std::out_of_range);
}
