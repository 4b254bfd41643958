#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nonlocal/degree.hpp"
#include "nonlocal/errors.hpp"
#include "oracles.hpp"

using namespace nonlocal;

namespace {

BoundaryMap map1(const std::string& e) { return BoundaryMap(1, {expr::parse(e)}); }

BoundaryMap map2(const std::string& a, const std::string& b) {
  return BoundaryMap(2, {expr::parse(a), expr::parse(b)});
}

}  // namespace

TEST_SUITE("degree") {
  TEST_CASE("k=1 sign formula") {
    const DegreeResult id = degree(map1("u1"), 1.0);
    CHECK(id.value == 1);
    CHECK(id.certified);
    CHECK(id.method == DegreeMethod::Sign1D);

    const DegreeResult square = degree(map1("u1^2"), 1.0);
    CHECK(square.value == 0);
    CHECK(square.certified);

    CHECK(degree(map1("-u1"), 1.0).value == -1);
    CHECK(degree(map1("u1^3"), 1.0).value == 1);
    CHECK(degree(map1("u1-0.5"), 1.0).value == 1);
  }

  TEST_CASE("k=1 boundary vanishing is rejected") {
    CHECK_THROWS_AS(degree(map1("u1-1"), 1.0), DegreeError);
    CHECK_THROWS_AS(degree(map1("0"), 1.0), DegreeError);
  }

  TEST_CASE("k=2 winding: complex z^2 has degree 2") {
    const BoundaryMap z2 = map2("u1^2-u2^2", "2*u1*u2");
    const DegreeResult res = degree(z2, 1.0);
    CHECK(res.value == 2);
    CHECK(res.certified);
    CHECK(res.method == DegreeMethod::Winding2D);

    const int brute = oracle::winding_number(
        [&](double theta, double& hx, double& hy) {
          const double u[2] = {std::cos(theta), std::sin(theta)};
          const auto v = z2(u);
          hx = v[0];
          hy = v[1];
        },
        10000);
    CHECK(brute == 2);
  }

  TEST_CASE("k=2 winding on named maps") {
    CHECK(degree(map2("u1", "u2"), 2.5).value == 1);
    CHECK(degree(map2("-u1", "-u2"), 1.0).value == 1);   // -I has det > 0 in 2D
    CHECK(degree(map2("u1", "-u2"), 1.0).value == -1);   // reflection
    // z^3: degree 3.
    CHECK(degree(map2("u1^3-3*u1*u2^2", "3*u1^2*u2-u2^3"), 1.0).value == 3);
    // conjugate of z^2: degree -2.
    CHECK(degree(map2("u1^2-u2^2", "-2*u1*u2"), 1.0).value == -2);
  }

  TEST_CASE("homotopy invariance probe: identity blended with a rotation") {
    const double theta = 0.9;
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double a = 1.0 - s + s * std::cos(theta);
      const double b = -s * std::sin(theta);
      char e1[128], e2[128];
      std::snprintf(e1, sizeof(e1), "%.17g*u1+%.17g*u2", a, b);
      std::snprintf(e2, sizeof(e2), "%.17g*u1+%.17g*u2", -b, a);
      CHECK(degree(map2(e1, e2), 1.0).value == 1);
    }
  }

  TEST_CASE("scaling invariance: degree(h, r) = degree(h(a.), r/a)") {
    const double a = 2.5;
    const BoundaryMap h = map2("u1^2-u2^2+0.1", "2*u1*u2");
    char e1[128], e2[128];
    std::snprintf(e1, sizeof(e1), "(%.17g*u1)^2-(%.17g*u2)^2+0.1", a, a);
    std::snprintf(e2, sizeof(e2), "2*(%.17g*u1)*(%.17g*u2)", a, a);
    const BoundaryMap scaled = map2(e1, e2);
    CHECK(degree(h, 2.0).value == degree(scaled, 2.0 / a).value);
  }

  TEST_CASE("winding agrees with the brute-force oracle on random polynomial maps") {
    oracle::Rng rng(0x7777);
    int tested = 0;
    while (tested < 20) {
      // Random polynomial map of modest degree in (u1, u2).
      double c1[6], c2[6];
      for (int i = 0; i < 6; ++i) {
        c1[i] = rng.uniform(-1.0, 1.0);
        c2[i] = rng.uniform(-1.0, 1.0);
      }
      char e1[512], e2[512];
      std::snprintf(e1, sizeof(e1), "%.17g+%.17g*u1+%.17g*u2+%.17g*u1*u2+%.17g*u1^2+%.17g*u2^2",
                    c1[0], c1[1], c1[2], c1[3], c1[4], c1[5]);
      std::snprintf(e2, sizeof(e2), "%.17g+%.17g*u1+%.17g*u2+%.17g*u1*u2+%.17g*u1^2+%.17g*u2^2",
                    c2[0], c2[1], c2[2], c2[3], c2[4], c2[5]);
      const BoundaryMap h = map2(e1, e2);

      // Keep only maps clearly bounded away from zero on the circle.
      double min_norm = 1e9;
      const auto eval_on_circle = [&](double theta, double& hx, double& hy) {
        const double u[2] = {std::cos(theta), std::sin(theta)};
        const auto v = h(u);
        hx = v[0];
        hy = v[1];
      };
      for (int i = 0; i < 1000; ++i) {
        double hx, hy;
        eval_on_circle(2.0 * std::numbers::pi * i / 1000.0, hx, hy);
        min_norm = std::min(min_norm, std::hypot(hx, hy));
      }
      if (min_norm <= 0.1) continue;
      ++tested;

      const int brute = oracle::winding_number(eval_on_circle, 10000);
      CHECK(degree(h, 1.0).value == brute);
    }
  }

  TEST_CASE("product degree") {
    CHECK(product_degree(map1("u1"), map1("u1"), 1.0).value == 1);
    CHECK(product_degree(map1("u1"), map1("u1^3"), 1.0).value == 1);
    CHECK(product_degree(map1("u1^2"), map1("u1-0.5"), 1.0).value == 0);
    const DegreeResult prod = product_degree(map1("-u1"), map1("u1^3"), 1.0);
    CHECK(prod.value == -1);
    CHECK(prod.method == DegreeMethod::Product);
    CHECK(prod.certified);
  }

  TEST_CASE("product property on randomized 1-D pairs") {
    oracle::Rng rng(0x9999);
    int tested = 0;
    while (tested < 10) {
      const oracle::Poly p1 = oracle::random_poly(rng, 3);
      const oracle::Poly p2 = oracle::random_poly(rng, 3);
      if (std::fabs(p1(1.0)) < 0.05 || std::fabs(p1(-1.0)) < 0.05 ||
          std::fabs(p2(1.0)) < 0.05 || std::fabs(p2(-1.0)) < 0.05)
        continue;
      ++tested;
      char e1[256], e2[256];
      std::snprintf(e1, sizeof(e1), "%.17g+%.17g*u1+%.17g*u1^2+%.17g*u1^3", p1.coeffs[0],
                    p1.coeffs[1], p1.coeffs[2], p1.coeffs[3]);
      std::snprintf(e2, sizeof(e2), "%.17g+%.17g*u1+%.17g*u1^2+%.17g*u1^3", p2.coeffs[0],
                    p2.coeffs[1], p2.coeffs[2], p2.coeffs[3]);
      const BoundaryMap h1 = map1(e1);
      const BoundaryMap h2 = map1(e2);
      const int expected = degree(h1, 1.0).value * degree(h2, 1.0).value;
      CHECK(product_degree(h1, h2, 1.0).value == expected);
    }
  }

  TEST_CASE("k=3 heuristic root count") {
    const BoundaryMap id3(3, {expr::parse("u1"), expr::parse("u2"), expr::parse("u3")});
    const DegreeResult res = degree(id3, 1.0);
    CHECK(res.value == 1);
    CHECK_FALSE(res.certified);  // heuristic results are never certified
    CHECK(res.method == DegreeMethod::RootCountND);

    // Root off-center, orientation-reversing.
    const BoundaryMap flip(3, {expr::parse("-u1"), expr::parse("u2"), expr::parse("u3-0.5")});
    CHECK(degree(flip, 1.0).value == -1);

    // No zeros inside the ball.
    const BoundaryMap shifted(3,
                              {expr::parse("u1"), expr::parse("u2"), expr::parse("u3-2")});
    CHECK(degree(shifted, 1.0).value == 0);
  }

  TEST_CASE("radius must be positive") {
    CHECK_THROWS_AS(degree(map1("u1"), 0.0), InvalidArgument);
    CHECK_THROWS_AS(degree(map1("u1"), -1.0), InvalidArgument);
  }
}

TEST_SUITE("degree-refinement") {
  TEST_CASE("winding survives maps that defeat the initial ring") {
    // z^2 with the real part crushed: the image angle sweeps through the
    // vertical crossings almost instantly, forcing adaptive bisection.
    const BoundaryMap squashed(
        2, {expr::parse("0.01*(u1^2-u2^2)"), expr::parse("2*u1*u2")});
    const DegreeResult res = degree(squashed, 1.0);
    CHECK(res.value == 2);
    CHECK(res.certified);
  }

  TEST_CASE("boundary maps reject foreign variables") {
    CHECK_THROWS_AS(BoundaryMap(1, {expr::parse("x1")}), EvalError);
    CHECK_THROWS_AS(BoundaryMap(2, {expr::parse("u1"), expr::parse("u3")}), EvalError);
  }
}
