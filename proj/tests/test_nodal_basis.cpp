#include <cmath>
#include <functional>

#include "adjdg/nodal_basis.hpp"
#include "doctest.h"

using namespace adjdg;

namespace {

// Simpson's rule on [-1,1]: exact for cubics, independent of the library's
// quadrature machinery. Used as the cubature oracle for low-order weights.
double simpson(const std::function<double(double)>& f) {
  return (f(-1.0) + 4.0 * f(0.0) + f(1.0)) / 3.0;
}

double lagrange_eval(const Vec& nodes, int j, double x) {
  double v = 1.0;
  for (size_t k = 0; k < nodes.size(); ++k)
    if (static_cast<int>(k) != j) v *= (x - nodes[k]) / (nodes[j] - nodes[k]);
  return v;
}

}  // namespace

TEST_CASE("two-point GLL rule is the trapezoid rule") {
  const NodalBasis b = build_basis(1, QuadMode::collocation);
  CHECK(b.nodes[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(b.nodes[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("order-2 GLL weights match the cubature oracle") {
  const NodalBasis b = build_basis(2, QuadMode::collocation);
  CHECK(b.nodes[1] == doctest::Approx(0.0).epsilon(1e-15));
  for (int j = 0; j < 3; ++j) {
    const double wj = simpson([&](double x) { return lagrange_eval(b.nodes, j, x); });
    CHECK(b.weights[j] == doctest::Approx(wj).epsilon(1e-14));
  }
  CHECK(b.weights[0] == doctest::Approx(1.0 / 3.0));
  CHECK(b.weights[1] == doctest::Approx(4.0 / 3.0));
  CHECK(b.weights[2] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("GLL weights sum to the interval measure") {
  for (int n = 1; n <= 8; ++n) {
    const NodalBasis b = build_basis(n, QuadMode::collocation);
    double s = 0.0;
    for (double w : b.weights) s += w;
    CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
    for (int i = 0; i < n; ++i) CHECK(b.nodes[i] < b.nodes[i + 1]);
    CHECK(b.nodes.front() == -1.0);
    CHECK(b.nodes.back() == 1.0);
  }
}

TEST_CASE("GLL rule integrates degree <= 2N-1 exactly") {
  for (int n = 2; n <= 6; ++n) {
    const NodalBasis b = build_basis(n, QuadMode::collocation);
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0.0;
      for (int i = 0; i <= n; ++i) s += b.weights[i] * std::pow(b.nodes[i], deg);
      const double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("differentiation operator") {
  const NodalBasis b = build_basis(4, QuadMode::collocation);
  SUBCASE("constants map to zero") {
    Vec c(5, 3.7);
    for (double v : differentiate(b, c)) CHECK(std::abs(v) < 1e-13);
  }
  SUBCASE("the identity maps to one") {
    for (double v : differentiate(b, b.nodes))
      CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("x^2 at order-2 nodes maps to 2x") {
    const NodalBasis b2 = build_basis(2, QuadMode::collocation);
    Vec sq(3);
    for (int i = 0; i < 3; ++i) sq[i] = b2.nodes[i] * b2.nodes[i];
    const Vec d = differentiate(b2, sq);
    for (int i = 0; i < 3; ++i)
      CHECK(d[i] == doctest::Approx(2.0 * b2.nodes[i]).epsilon(1e-13));
  }
  SUBCASE("length mismatch is rejected") {
    Vec bad(3, 0.0);
    CHECK_THROWS_AS((void)differentiate(b, bad), std::invalid_argument);
  }
}

TEST_CASE("summation by parts: Q + Q^T equals the boundary matrix") {
  for (int n = 1; n <= 8; ++n) {
    const NodalBasis b = build_basis(n, QuadMode::collocation);
    double worst = 0.0;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const double q_ij = b.weights[i] * b.diff(i, j);
        const double q_ji = b.weights[j] * b.diff(j, i);
        double expect = 0.0;
        if (i == 0 && j == 0) expect = -1.0;
        if (i == n && j == n) expect = 1.0;
        worst = std::max(worst, std::abs(q_ij + q_ji - expect));
      }
    CHECK(worst < 1e-13);
  }
}

TEST_CASE("quadrature_inner_product") {
  SUBCASE("unit integrand gives the measure") {
    for (int n : {1, 3, 5}) {
      const NodalBasis b = build_basis(n, QuadMode::collocation);
      Vec one(b.n_quad(), 1.0);
      CHECK(quadrature_inner_product(b, one, one, one) ==
            doctest::Approx(2.0).epsilon(1e-14));
    }
  }
  SUBCASE("f=g=x underintegrates on the 2-point GLL rule") {
    const NodalBasis b = build_basis(1, QuadMode::collocation);
    Vec one(2, 1.0);
    CHECK(quadrature_inner_product(b, b.quad_nodes, b.quad_nodes, one) ==
          doctest::Approx(2.0));
  }
  SUBCASE("f=g=x is exact on a 3-point interior rule") {
    const NodalBasis b = build_basis(1, QuadMode::over_integration, 3);
    Vec one(3, 1.0);
    CHECK(quadrature_inner_product(b, b.quad_nodes, b.quad_nodes, one) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("length mismatch is rejected") {
    const NodalBasis b = build_basis(2, QuadMode::collocation);
    Vec one(3, 1.0), bad(2, 1.0);
    CHECK_THROWS_AS((void)quadrature_inner_product(b, bad, one, one),
                    std::invalid_argument);
  }
}

TEST_CASE("interpolate-then-quadrate reproduces exact integrals up to degree 2N") {
  for (int n = 1; n <= 5; ++n) {
    const NodalBasis b = build_basis(n, QuadMode::over_integration, n + 1);
    for (int deg = 0; deg <= n; ++deg) {
      // product of two degree <= N interpolants, total degree <= 2N
      Vec f(b.n_nodes()), g(b.n_nodes());
      for (int i = 0; i <= n; ++i) {
        f[i] = std::pow(b.nodes[i], deg);
        g[i] = std::pow(b.nodes[i], n - deg);
      }
      const Vec fq = to_quad(b, f), gq = to_quad(b, g);
      Vec one(b.n_quad(), 1.0);
      const double exact = (n % 2 == 1) ? 0.0 : 2.0 / (n + 1);
      CHECK(std::abs(quadrature_inner_product(b, fq, gq, one) - exact) < 1e-13);
    }
  }
}

TEST_CASE("construction guards") {
  CHECK_THROWS_AS((void)build_basis(0, QuadMode::collocation), std::invalid_argument);
  CHECK_THROWS_AS((void)build_basis(3, QuadMode::over_integration, 3),
                  std::invalid_argument);
  const NodalBasis b = build_basis(3, QuadMode::over_integration);
  CHECK(b.n_quad() >= 4);  // default interior rule
}
