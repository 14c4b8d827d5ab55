#include <cmath>
#include <random>

#include "adjdg/time_integration.hpp"
#include "adjdg/verification.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace adjdg;
using namespace adjdg::testing;

namespace {

// Wraps an arbitrary dense matrix (plain inner product) as a Model so the
// stepping machinery can be checked against matrix arithmetic.
class MatrixModel final : public Model {
 public:
  MatrixModel(Mat a, TimeSignal source = nullptr) : a_(std::move(a)), src_(std::move(source)) {
    const int dofs = a_.rows;
    // smallest mesh/basis pair with the right dof count: one component,
    // dofs = K * (N+1)
    int n = 1;
    while (dofs % (n + 1) != 0) ++n;
    mesh_ = unit_mesh(dofs / (n + 1), BoundaryKind::periodic);
    basis_ = make_basis(n, QuadMode::collocation);
  }
  std::vector<std::string> component_names() const override { return {"q"}; }
  void rhs_state_form(double t, const DgField& q, DgField& out, Form,
                      bool homogeneous) const override {
    const Vec y = matvec(a_, q.blocks[0]);
    out.blocks[0] = y;
    if (src_ && !homogeneous)
      for (double& v : out.blocks[0]) v += src_(t);
  }
  void rhs_adjoint_form(const DgField& p, DgField& out, Form) const override {
    out.blocks[0] = mat_tvec(a_, p.blocks[0]);
  }
  double w_inner(const DgField& x, const DgField& y) const override {
    double s = 0.0;
    for (size_t i = 0; i < x.blocks[0].size(); ++i) s += x.blocks[0][i] * y.blocks[0][i];
    return s;
  }
  void w_pairing(const DgField& x, DgField& out) const override { out = x; }
  void w_solve(DgField&) const override {}
  double max_wave_speed() const override { return 1.0; }
  void gradient_stage(const DgField&, const DgField&, const DgField&, double,
                      GradientSink&) const override {}

 private:
  Mat a_;
  TimeSignal src_;
};

Mat random_matrix(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat a(n, n);
  for (double& v : a.a) v = u(rng);
  return a;
}

}  // namespace

TEST_CASE("rk4 with a zero operator integrates the source exactly") {
  MatrixModel m(Mat(6, 6), [](double) { return 0.8; });
  DgField q = m.make_state();
  for (double& v : q.blocks[0]) v = 0.25;
  DgField next = m.make_state();
  rk4_step(m, 0.0, 0.05, q, next, nullptr);
  for (double v : next.blocks[0]) CHECK(v == doctest::Approx(0.25 + 0.05 * 0.8));
}

TEST_CASE("rk4 realizes the degree-4 stability polynomial") {
  const int dim = 6;
  const Mat a = random_matrix(dim, 21);
  MatrixModel m(a);
  const double dt = 0.37;
  // forward step matrix by columns
  Mat s(dim, dim);
  for (int j = 0; j < dim; ++j) {
    DgField q = m.make_state(), next = m.make_state();
    q.blocks[0][j] = 1.0;
    rk4_step(m, 0.0, dt, q, next, nullptr);
    for (int i = 0; i < dim; ++i) s(i, j) = next.blocks[0][i];
  }
  // 1 + z + z^2/2 + z^3/6 + z^4/24 evaluated on dt*A
  Mat poly = Mat::identity(dim);
  Mat power = Mat::identity(dim);
  const double fact[] = {1.0, 1.0, 2.0, 6.0, 24.0};
  for (int k = 1; k <= 4; ++k) {
    Mat next_power(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double acc = 0.0;
        for (int l = 0; l < dim; ++l) acc += power(i, l) * dt * a(l, j);
        next_power(i, j) = acc;
      }
    power = next_power;
    for (int i = 0; i < dim * dim; ++i) poly.a[i] += power.a[i] / fact[k];
  }
  for (int i = 0; i < dim * dim; ++i) CHECK(std::abs(s.a[i] - poly.a[i]) < 1e-15 * 50);
}

TEST_CASE("rk4 converges at fourth order in time") {
  auto model = make_advection(6, 5, QuadMode::collocation, BoundaryKind::periodic);
  // constant-speed variant so the translated profile is exact
  auto mesh = unit_mesh(6, BoundaryKind::periodic);
  auto basis = make_basis(5, QuadMode::collocation);
  Vec a(static_cast<size_t>(6) * 6, 1.0);
  AdvectionModel m(mesh, basis, a, 0.0, Form::strong);
  auto q0 = sample(mesh, basis, {"u"},
                   {[](double x) { return std::sin(2.0 * M_PI * x); }});
  const double horizon = 0.5;
  Vec errs;
  for (int steps : {20, 40, 80}) {
    Trajectory traj = run_forward(m, q0, horizon / steps, steps);
    const double err = l2_error(m, traj.final_state, [&](int, double x) {
      return std::sin(2.0 * M_PI * (x - horizon));
    });
    errs.push_back(err);
  }
  CHECK(std::log2(errs[0] / errs[1]) > 3.5);
  CHECK(std::log2(errs[1] / errs[2]) > 3.5);
}

TEST_CASE("adjoint step with a zero operator carries the rk4 weights") {
  MatrixModel m(Mat(4, 4));
  DgField p = m.make_state();
  for (double& v : p.blocks[0]) v = 1.0;
  DgField out = m.make_state();
  std::array<DgField, 4> gammas;
  const double dt = 0.2;
  adjoint_rk4_step(m, p, dt, out, gammas);
  for (double v : out.blocks[0]) CHECK(v == doctest::Approx(1.0));
  const double expected[] = {dt / 6, dt / 3, dt / 3, dt / 6};
  for (int i = 0; i < 4; ++i)
    for (double v : gammas[i].blocks[0]) CHECK(v == doctest::Approx(expected[i]));
}

TEST_CASE("adjoint step is the exact transpose of the forward step") {
  const int dim = 6;
  const Mat a = random_matrix(dim, 5);
  MatrixModel m(a);
  const double dt = 0.21;
  Mat s(dim, dim);
  for (int j = 0; j < dim; ++j) {
    DgField q = m.make_state(), next = m.make_state();
    q.blocks[0][j] = 1.0;
    rk4_step(m, 0.0, dt, q, next, nullptr);
    for (int i = 0; i < dim; ++i) s(i, j) = next.blocks[0][i];
  }
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DgField p = m.make_state(), out = m.make_state();
  for (double& v : p.blocks[0]) v = u(rng);
  std::array<DgField, 4> gammas;
  adjoint_rk4_step(m, p, dt, out, gammas);
  const Vec expect = mat_tvec(s, p.blocks[0]);
  for (int i = 0; i < dim; ++i)
    CHECK(out.blocks[0][i] == doctest::Approx(expect[i]).epsilon(1e-13));
}

TEST_CASE("full-trajectory duality pairs sources against the adjoint") {
  const int dim = 6;
  const Mat a = random_matrix(dim, 77);
  MatrixModel with_src(a, [](double t) { return std::sin(3.0 * t); });
  MatrixModel homog(a);
  const double dt = 0.1;
  const int n = 12;
  DgField q0 = with_src.make_state();
  std::mt19937_64 rng(78);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : q0.blocks[0]) v = u(rng);

  Trajectory traj = run_forward(with_src, q0, dt, n);
  // adjoint sweep with zero injections from a random terminal state
  DgField p = with_src.make_state();
  for (double& v : p.blocks[0]) v = u(rng);
  std::vector<DgField> duals(n + 1, with_src.make_state());
  duals[n] = p;
  double pairing_sum = 0.0;
  for (int s = n - 1; s >= 0; --s) {
    std::array<DgField, 4> gammas;
    adjoint_rk4_step(homog, duals[s + 1], dt, duals[s], gammas);
    // step defect d_s = Phi(q_s) - S q_s pairs with p_{s+1}
    DgField with_data = with_src.make_state(), without = with_src.make_state();
    rk4_step(with_src, s * dt, dt, traj.snapshots[s], with_data, nullptr);
    rk4_step(homog, s * dt, dt, traj.snapshots[s], without, nullptr);
    with_data.axpy(-1.0, without);
    pairing_sum += with_src.w_inner(with_data, duals[s + 1]);
  }
  const double lhs = with_src.w_inner(traj.final_state, duals[n]) -
                     with_src.w_inner(traj.snapshots[0], duals[0]);
  CHECK(lhs == doctest::Approx(pairing_sum).epsilon(1e-12));
}

TEST_CASE("forward runs") {
  auto mesh = unit_mesh(8, BoundaryKind::periodic);
  auto basis = make_basis(2, QuadMode::collocation);
  Vec a(static_cast<size_t>(8) * 3, 1.0);
  AdvectionModel m(mesh, basis, a, 0.0, Form::strong);
  SUBCASE("zero data stays zero") {
    DgField q0 = m.make_state();
    Trajectory traj = run_forward(m, q0, 0.01, 10);
    for (double v : traj.final_state.blocks[0]) CHECK(v == 0.0);
  }
  SUBCASE("a gaussian returns after one period") {
    auto q0 = sample(mesh, basis, {"u"}, {[](double x) {
                       return std::exp(-std::pow(x - 0.5, 2) / 0.02);
                     }});
    Vec errs;
    for (int k : {8, 16, 32}) {
      auto meshk = unit_mesh(k, BoundaryKind::periodic);
      Vec ak(static_cast<size_t>(k) * 3, 1.0);
      AdvectionModel mk(meshk, basis, ak, 0.0, Form::strong);
      auto q0k = sample(meshk, basis, {"u"}, {[](double x) {
                          return std::exp(-std::pow(x - 0.5, 2) / 0.02);
                        }});
      const int steps = 40 * k;  // keeps time error subdominant
      Trajectory traj = run_forward(mk, q0k, 1.0 / steps, steps);
      errs.push_back(l2_error(mk, traj.final_state, [](int, double x) {
        return std::exp(-std::pow(x - 0.5, 2) / 0.02);
      }));
    }
    CHECK(std::log2(errs[0] / errs[1]) > 2.4);  // order >= min(N+1, 4) observed
    CHECK(std::log2(errs[1] / errs[2]) > 2.4);
  }
  SUBCASE("superposition holds for the homogeneous problem") {
    auto q1 = sample(mesh, basis, {"u"},
                     {[](double x) { return std::sin(2 * M_PI * x); }});
    auto q2 = sample(mesh, basis, {"u"},
                     {[](double x) { return std::cos(4 * M_PI * x); }});
    DgField qs = q1;
    qs.axpy(1.0, q2);
    Trajectory t1 = run_forward(m, q1, 0.005, 40);
    Trajectory t2 = run_forward(m, q2, 0.005, 40);
    Trajectory ts = run_forward(m, qs, 0.005, 40);
    DgField sum = t1.final_state;
    sum.axpy(1.0, t2.final_state);
    sum.axpy(-1.0, ts.final_state);
    for (double v : sum.blocks[0]) CHECK(std::abs(v) < 1e-12);
  }
  SUBCASE("checkpointed run reproduces the stored run bitwise") {
    auto q0 = sample(mesh, basis, {"u"},
                     {[](double x) { return std::sin(2 * M_PI * x); }});
    Trajectory full = run_forward(m, q0, 0.005, 23);
    Trajectory ck = run_forward(m, q0, 0.005, 23, StoragePolicy::checkpoint, 5);
    for (size_t i = 0; i < full.final_state.blocks[0].size(); ++i)
      CHECK(full.final_state.blocks[0][i] == ck.final_state.blocks[0][i]);
    // replaying a middle segment reproduces stored snapshots exactly
    std::vector<DgField> snaps;
    std::vector<std::array<DgField, 4>> stages;
    replay_segment(m, ck.snapshot(10), 10 * 0.005, 0.005, 5, snaps, stages);
    for (size_t i = 0; i < snaps.back().blocks[0].size(); ++i)
      CHECK(snaps.back().blocks[0][i] == full.snapshots[15].blocks[0][i]);
  }
  SUBCASE("blowup is reported with the step index") {
    auto q0 = sample(mesh, basis, {"u"},
                     {[](double x) { return std::sin(2 * M_PI * x); }});
    CHECK_THROWS_AS((void)run_forward(m, q0, 1e4, 50), SolverBlowup);
  }
}

TEST_CASE("homogeneous adjoint transport moves support toward the inflow") {
  // advection adjoint travels with velocity -a when viewed forward in time
  auto mesh = unit_mesh(16, BoundaryKind::periodic);
  auto basis = make_basis(3, QuadMode::collocation);
  Vec a(static_cast<size_t>(16) * 4, 1.0);
  AdvectionModel m(mesh, basis, a, 0.0, Form::strong);
  auto terminal = sample(mesh, basis, {"u"}, {[](double x) {
                           return std::exp(-std::pow(x - 0.5, 2) / 0.01);
                         }});
  const DgField at0 = run_adjoint_homogeneous(m, terminal, 0.002, 100);
  auto center = [&](const DgField& f) {
    double num = 0.0, den = 0.0;
    for (int e = 0; e < f.n_elements(); ++e)
      for (int i = 0; i < f.n_nodes(); ++i) {
        const double w = f.at(0, e, i) * f.at(0, e, i);
        num += w * f.node_x(e, i);
        den += w;
      }
    return num / den;
  };
  // the adjoint advects with -a: walking backward to t = 0 shifts the
  // profile toward the inflow boundary
  CHECK(center(at0) < center(terminal) - 0.15);
}
