#include <cmath>

#include "adjdg/verification.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace adjdg;
using namespace adjdg::testing;

namespace {

// quadratic scalar functional for FD plumbing tests
double quadratic_cost(const Vec& v) {
  double s = 1.0;
  for (size_t i = 0; i < v.size(); ++i) s += (i + 1) * v[i] * v[i] + 0.5 * v[i];
  return s;
}

}  // namespace

TEST_CASE("fd_directional") {
  Vec base{1.0, 2.0};
  Vec dir{0.5, -1.0};
  // gradient of the quadratic at base: (2*1*1 + 0.5, 2*2*2 + 0.5)
  const double exact = (2.0 + 0.5) * 0.5 + (8.0 + 0.5) * -1.0;
  SUBCASE("central differences are exact on quadratics") {
    for (double eps : {1e-2, 1e-4, 1e-6})
      CHECK(fd_directional(quadratic_cost, base, dir, eps, true) ==
            doctest::Approx(exact).epsilon(1e-9));
  }
  SUBCASE("zero direction gives zero") {
    CHECK(fd_directional(quadratic_cost, base, {0.0, 0.0}, 1e-3, true) == 0.0);
    CHECK(fd_directional(quadratic_cost, base, {0.0, 0.0}, 1e-3, false) == 0.0);
  }
  SUBCASE("positivity violations are rejected") {
    CHECK_THROWS_AS((void)fd_directional(quadratic_cost, {0.1, 0.1}, {1.0, 1.0}, 0.5,
                                         true, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("matched_digits") {
  CHECK(matched_digits(1.0, 1.0) == 16);
  CHECK(matched_digits(1.001, 1.0) == 2);
  CHECK(matched_digits(1.1, 1.0) == 1);
  CHECK(matched_digits(2.0, 1.0) == 0);
}

TEST_CASE("fd_sweep on a smooth non-quadratic functional") {
  auto cost = [](const Vec& v) {
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) s += std::exp(0.3 * v[i]) + std::sin(v[i]);
    return s;
  };
  Vec base{0.4, -0.2, 1.1};
  Vec dir{1.0, 0.5, -0.25};
  double exact = 0.0;
  for (size_t i = 0; i < base.size(); ++i)
    exact += (0.3 * std::exp(0.3 * base[i]) + std::cos(base[i])) * dir[i];
  const FdSweepResult sweep = fd_sweep(cost, base, dir, exact);
  SUBCASE("one-sided errors shrink about tenfold per decade before roundoff") {
    for (int i = 0; i + 1 < 3; ++i) {
      const double e0 = std::abs(sweep.one_sided[i] - exact);
      const double e1 = std::abs(sweep.one_sided[i + 1] - exact);
      CHECK(e0 / e1 > 4.0);
      CHECK(e0 / e1 < 30.0);
    }
  }
  SUBCASE("matched digits increase monotonically down to the floor") {
    int best = 0;
    size_t best_at = 0;
    for (size_t i = 0; i < sweep.matched_one_sided.size(); ++i)
      if (sweep.matched_one_sided[i] > best) {
        best = sweep.matched_one_sided[i];
        best_at = i;
      }
    for (size_t i = 1; i <= best_at; ++i)
      CHECK(sweep.matched_one_sided[i] >= sweep.matched_one_sided[i - 1]);
    CHECK(best >= 6);
  }
  SUBCASE("the sweep is deterministic") {
    const FdSweepResult again = fd_sweep(cost, base, dir, exact);
    for (size_t i = 0; i < sweep.central.size(); ++i) {
      CHECK(again.central[i] == sweep.central[i]);
      CHECK(again.one_sided[i] == sweep.one_sided[i]);
    }
  }
}

TEST_CASE("adjoint identity check") {
  auto m = make_acoustic(4, 2, QuadMode::collocation, BoundaryKind::traction_like);
  SUBCASE("defect is at roundoff for the matched pair") {
    for (uint64_t seed : {1ull, 2ull, 3ull})
      CHECK(adjoint_identity_check(*m, seed) < 1e-12);
  }
  SUBCASE("q = p reduces to the symmetry defect") {
    CHECK(adjoint_identity_check(*m, 9) < 1e-12);
  }
  SUBCASE("mismatched alpha is detected") {
    auto state = make_advection(4, 2);
    auto wrong =
        make_advection(4, 2, QuadMode::collocation, BoundaryKind::inflow_dirichlet, 0.5);
    CHECK(adjoint_identity_check(*state, 3, [&](const DgField& p, DgField& out) {
            wrong->rhs_adjoint(p, out);
          }) > 1e-6);
  }
}

TEST_CASE("state and adjoint convergence orders") {
  ConvergenceCase c;
  const double a0 = 1.0;
  c.final_time = 0.5;
  c.make_model = [&](int order, int k) -> std::unique_ptr<Model> {
    auto mesh = unit_mesh(k, BoundaryKind::periodic);
    auto basis = make_basis(order, QuadMode::collocation);
    Vec a(static_cast<size_t>(k) * (order + 1), a0);
    return std::make_unique<AdvectionModel>(mesh, basis, a, 0.0, Form::strong);
  };
  c.exact = [&](int, double x, double t) {
    return std::sin(2.0 * M_PI * (x - a0 * t));
  };
  SUBCASE("upwind state solve converges at order N + 1/2 or better") {
    const auto rows = convergence_study(c, {2}, {8, 16, 32});
    CHECK(rows[1].rate > 2.5);
    CHECK(rows[2].rate > 2.5);
  }
  SUBCASE("the adjoint solve converges at the same order") {
    ConvergenceCase d = c;
    d.adjoint = true;
    // dual transport runs backward: profiles translate by +a per unit tau
    d.exact = [&](int, double x, double tau) {
      return std::sin(2.0 * M_PI * (x + a0 * tau));
    };
    const auto rows = convergence_study(d, {2}, {8, 16, 32});
    CHECK(rows[1].rate > 2.5);
    CHECK(rows[2].rate > 2.5);
  }
  SUBCASE("central flux at N = 1 remains at least first order") {
    ConvergenceCase e = c;
    e.make_model = [&](int order, int k) -> std::unique_ptr<Model> {
      auto mesh = unit_mesh(k, BoundaryKind::periodic);
      auto basis = make_basis(order, QuadMode::collocation);
      Vec a(static_cast<size_t>(k) * (order + 1), a0);
      return std::make_unique<AdvectionModel>(mesh, basis, a, 1.0, Form::strong);
    };
    const auto rows = convergence_study(e, {1}, {8, 16, 32});
    CHECK(rows[1].rate > 1.0);
    CHECK(rows[2].rate > 1.0);
  }
}

TEST_CASE("weak/strong consistency reports roundoff-level gaps") {
  // nodal coefficient products keep integration by parts exact under both
  // quadrature modes; the checks record the measured values
  const auto d = weak_strong_consistency(
      *make_advection(4, 3, QuadMode::collocation, BoundaryKind::inflow_dirichlet));
  CHECK(d.weak_vs_strong < 1e-11);
  CHECK(d.strong_adjoint_vs_weak_state_transpose < 1e-11);
  CHECK(d.weak_adjoint_vs_strong_state_transpose < 1e-11);
}
