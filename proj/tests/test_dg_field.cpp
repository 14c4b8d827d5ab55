#include <cmath>
#include <random>

#include "adjdg/dg_field.hpp"
#include "doctest.h"

using namespace adjdg;

namespace {

std::shared_ptr<const Mesh1D> unit_mesh(int k, BoundaryKind b = BoundaryKind::periodic) {
  return std::make_shared<const Mesh1D>(uniform_mesh(0.0, 1.0, k, b));
}

std::shared_ptr<const NodalBasis> gll(int n, QuadMode m = QuadMode::collocation) {
  return std::make_shared<const NodalBasis>(build_basis(n, m));
}

}  // namespace

TEST_CASE("jump, mean, diff on explicit traces") {
  CHECK(jump(3.0, 5.0, 1.0) == doctest::Approx(-2.0));
  CHECK(jump(2.0, 2.0, 1.0) == 0.0);
  CHECK(jump(1.0, 0.0, -1.0) == doctest::Approx(-1.0));
  CHECK(mean(3.0, 5.0) == doctest::Approx(4.0));
  CHECK(diff(3.0, 5.0) == doctest::Approx(-2.0));
  CHECK(mean(1.0, -1.0) == 0.0);
  CHECK(diff(1.0, -1.0) == doctest::Approx(2.0));
}

TEST_CASE("trace identities hold for random face states") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int it = 0; it < 200; ++it) {
    FaceState f;
    f.minus[0] = u(rng);
    f.plus[0] = u(rng);
    f.n_minus = it % 2 == 0 ? 1.0 : -1.0;
    CHECK(f.minus[0] ==
          doctest::Approx(mean(f, 0) + 0.5 * diff(f, 0)).epsilon(1e-14));
    CHECK(f.plus[0] == doctest::Approx(mean(f, 0) - 0.5 * diff(f, 0)).epsilon(1e-14));
    CHECK(jump(f, 0) == doctest::Approx(f.n_minus * diff(f, 0)).epsilon(1e-14));
  }
}

TEST_CASE("sample") {
  SUBCASE("constants sample to constants") {
    auto f = sample(unit_mesh(3), gll(2), {"u"}, {[](double) { return 1.0; }});
    for (double v : f.blocks[0]) CHECK(v == 1.0);
  }
  SUBCASE("identity map on a single linear element") {
    auto f = sample(unit_mesh(1), gll(1), {"u"}, {[](double x) { return x; }});
    CHECK(f.at(0, 0, 0) == doctest::Approx(0.0));
    CHECK(f.at(0, 0, 1) == doctest::Approx(1.0));
  }
  SUBCASE("interpolation error of sin(pi x) decays at order N+1") {
    const int order = 2;
    Vec errs;
    for (int k : {4, 8, 16}) {
      auto mesh = unit_mesh(k);
      auto basis = gll(order);
      auto f = sample(mesh, basis, {"u"},
                      {[](double x) { return std::sin(M_PI * x); }});
      // max-norm error on a fine per-element sampling of the interpolant
      Vec targets;
      for (int t = 0; t <= 10; ++t) targets.push_back(-1.0 + 0.2 * t);
      const Mat l = lagrange_interp_matrix(basis->nodes, targets);
      double err = 0.0;
      for (int e = 0; e < k; ++e) {
        const Vec vals = matvec(l, f.element(0, e));
        for (size_t t = 0; t < targets.size(); ++t) {
          const double x =
              mesh->breaks[e] + 0.5 * (targets[t] + 1.0) * mesh->width(e);
          err = std::max(err, std::abs(vals[t] - std::sin(M_PI * x)));
        }
      }
      errs.push_back(err);
    }
    const double rate1 = std::log2(errs[0] / errs[1]);
    const double rate2 = std::log2(errs[1] / errs[2]);
    CHECK(rate1 > order + 0.5);
    CHECK(rate2 > order + 0.5);
  }
}

TEST_CASE("broken_inner_product") {
  SUBCASE("unit fields integrate the domain") {
    auto a = sample(unit_mesh(4), gll(3), {"u"}, {[](double) { return 1.0; }});
    CHECK(broken_inner_product(a, a) == doctest::Approx(1.0).epsilon(1e-14));
    auto b = a;
    b.set_zero();
    CHECK(broken_inner_product(a, b) == 0.0);
  }
  SUBCASE("x against x with over-integration") {
    auto mesh = unit_mesh(1);
    auto basis = gll(1, QuadMode::over_integration);
    auto a = sample(mesh, basis, {"u"}, {[](double x) { return x; }});
    CHECK(broken_inner_product(a, a) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("symmetric and positive definite for positive weights") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto mesh = unit_mesh(3);
    auto basis = gll(2, QuadMode::over_integration);
    auto w = sample(mesh, basis, {"w"}, {[](double x) { return 1.5 + std::sin(x); }});
    for (int it = 0; it < 50; ++it) {
      auto a = make_field(mesh, basis, {"u"});
      auto b = make_field(mesh, basis, {"u"});
      for (auto& v : a.blocks[0]) v = u(rng);
      for (auto& v : b.blocks[0]) v = u(rng);
      CHECK(broken_inner_product(a, b, w) ==
            doctest::Approx(broken_inner_product(b, a, w)).epsilon(1e-13));
      CHECK(broken_inner_product(a, a, w) > 0.0);
    }
  }
  SUBCASE("shape mismatch is rejected") {
    auto a = sample(unit_mesh(2), gll(2), {"u"}, {[](double) { return 1.0; }});
    auto b = sample(unit_mesh(3), gll(2), {"u"}, {[](double) { return 1.0; }});
    CHECK_THROWS_AS((void)broken_inner_product(a, b), std::invalid_argument);
  }
}
