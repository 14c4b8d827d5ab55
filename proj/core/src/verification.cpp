#include "adjdg/verification.hpp"

#include <cmath>
#include <random>

namespace adjdg {

double fd_directional(const CostOfParam& cost, const Vec& base, const Vec& direction,
                      double epsilon, bool central, double positivity_floor) {
  require(epsilon > 0.0, "fd_directional: epsilon must be positive");
  require(base.size() == direction.size(), "fd_directional: layout mismatch");
  auto shifted = [&](double s) {
    Vec p(base.size());
    for (size_t i = 0; i < p.size(); ++i) {
      p[i] = base[i] + s * direction[i];
      if (positivity_floor >= 0.0)
        require(p[i] > positivity_floor,
                "fd_directional: perturbation violates parameter positivity");
    }
    return p;
  };
  if (central)
    return (cost(shifted(epsilon)) - cost(shifted(-epsilon))) / (2.0 * epsilon);
  return (cost(shifted(epsilon)) - cost(base)) / epsilon;
}

Vec default_epsilon_ladder() {
  return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
}

int matched_digits(double fd_value, double reference) {
  const double rel = std::abs(fd_value - reference) / std::abs(reference);
  if (rel == 0.0) return 16;
  return std::max(0, static_cast<int>(std::floor(-std::log10(rel))));
}

FdSweepResult fd_sweep(const CostOfParam& cost, const Vec& base, const Vec& direction,
                       double reference, Vec epsilons, double positivity_floor) {
  for (size_t i = 0; i + 1 < epsilons.size(); ++i)
    require(epsilons[i] > epsilons[i + 1], "fd_sweep: epsilons must decrease");
  FdSweepResult r;
  r.epsilons = std::move(epsilons);
  r.reference = reference;
  double best = std::numeric_limits<double>::infinity();
  for (double eps : r.epsilons) {
    const double one = fd_directional(cost, base, direction, eps, false, positivity_floor);
    const double cen = fd_directional(cost, base, direction, eps, true, positivity_floor);
    r.one_sided.push_back(one);
    r.central.push_back(cen);
    r.matched_one_sided.push_back(matched_digits(one, reference));
    r.matched_central.push_back(matched_digits(cen, reference));
    const double rel = std::abs(cen - reference) / std::abs(reference);
    if (rel < best) {
      best = rel;
      r.best_epsilon = eps;
    }
  }
  r.best_central_rel = best;
  return r;
}

void fill_random(DgField& f, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& b : f.blocks)
    for (double& v : b) v = dist(rng);
}

double adjoint_identity_check(
    const Model& model, uint64_t seed,
    const std::function<void(const DgField&, DgField&)>& adjoint_override) {
  DgField q = model.make_state();
  DgField p = model.make_state();
  fill_random(q, seed);
  fill_random(p, seed + 0x9e3779b97f4a7c15ull);
  DgField lq = model.make_state();
  DgField lp = model.make_state();
  model.rhs_state(0.0, q, lq, /*homogeneous=*/true);
  if (adjoint_override)
    adjoint_override(p, lp);
  else
    model.rhs_adjoint(p, lp);
  const double lhs = model.w_inner(lq, p);
  const double rhs = model.w_inner(q, lp);
  const double nq = std::sqrt(model.w_inner(q, q));
  const double np = std::sqrt(model.w_inner(p, p));
  return std::abs(lhs - rhs) / (nq * np);
}

double l2_error(const Model& model, const DgField& q,
                const std::function<double(int, double)>& exact_at_x) {
  DgField diff_field = q;
  for (int c = 0; c < q.n_components(); ++c)
    for (int e = 0; e < q.n_elements(); ++e)
      for (int i = 0; i < q.n_nodes(); ++i)
        diff_field.at(c, e, i) -= exact_at_x(c, q.node_x(e, i));
  return std::sqrt(broken_inner_product(diff_field, diff_field));
}

std::vector<ConvergenceRow> convergence_study(const ConvergenceCase& c,
                                              const std::vector<int>& orders,
                                              const std::vector<int>& levels) {
  std::vector<ConvergenceRow> rows;
  for (int order : orders) {
    double prev_err = 0.0;
    for (size_t li = 0; li < levels.size(); ++li) {
      const int k = levels[li];
      auto model = c.make_model(order, k);
      const double h = model->mesh().width(0);
      const double dt_cfl =
          c.cfl * h / (model->max_wave_speed() * order * order);
      const int n_steps = std::max(1, static_cast<int>(std::ceil(c.final_time / dt_cfl)));
      const double dt = c.final_time / n_steps;
      DgField end = model->make_state();
      if (!c.adjoint) {
        auto names = model->component_names();
        std::vector<std::function<double(double)>> fns;
        for (int comp = 0; comp < static_cast<int>(names.size()); ++comp)
          fns.push_back([&c, comp](double x) { return c.exact(comp, x, 0.0); });
        DgField q0 = sample(model->mesh_ptr(), model->basis_ptr(),
                            model->component_names(), fns);
        Trajectory traj = run_forward(*model, q0, dt, n_steps);
        end = traj.final_state;
      } else {
        std::vector<std::function<double(double)>> fns;
        for (int comp = 0; comp < static_cast<int>(model->component_names().size());
             ++comp)
          fns.push_back([&c, comp](double x) { return c.exact(comp, x, 0.0); });
        DgField terminal = sample(model->mesh_ptr(), model->basis_ptr(),
                                  model->component_names(), fns);
        end = run_adjoint_homogeneous(*model, terminal, dt, n_steps);
      }
      const double err = l2_error(
          *model, end, [&](int comp, double x) { return c.exact(comp, x, c.final_time); });
      ConvergenceRow row;
      row.order = order;
      row.n_elements = k;
      row.error = err;
      row.rate = (li == 0) ? 0.0 : std::log2(prev_err / err);
      prev_err = err;
      rows.push_back(row);
    }
  }
  return rows;
}

Mat materialize(const Model& model,
                const std::function<void(const DgField&, DgField&)>& apply) {
  DgField x = model.make_state();
  DgField y = model.make_state();
  const int nb = x.block_size();
  const int dim = x.size();
  Mat a(dim, dim);
  for (int j = 0; j < dim; ++j) {
    x.set_zero();
    x.blocks[j / nb][j % nb] = 1.0;
    apply(x, y);
    for (int c = 0; c < y.n_components(); ++c)
      for (int r = 0; r < nb; ++r) a(c * nb + r, j) = y.blocks[c][r];
  }
  return a;
}

OperatorDiffs weak_strong_consistency(const Model& model) {
  auto strong = [&](const DgField& x, DgField& y) {
    model.rhs_state_form(0.0, x, y, Form::strong, true);
  };
  auto weak = [&](const DgField& x, DgField& y) {
    model.rhs_state_form(0.0, x, y, Form::weak, true);
  };
  auto adj_weak = [&](const DgField& x, DgField& y) {
    model.rhs_adjoint_form(x, y, Form::weak);
  };
  auto adj_strong = [&](const DgField& x, DgField& y) {
    model.rhs_adjoint_form(x, y, Form::strong);
  };
  const Mat a_s = materialize(model, strong);
  const Mat a_w = materialize(model, weak);
  const Mat d_w = materialize(model, adj_weak);
  const Mat d_s = materialize(model, adj_strong);

  // W-weighted transpose: A* = M_W^{-1} A^T M_W, assembled columnwise
  auto w_transpose = [&](const Mat& a) {
    DgField col = model.make_state();
    DgField tmp = model.make_state();
    const int nb = col.block_size();
    const int dim = col.size();
    Mat t(dim, dim);
    for (int j = 0; j < dim; ++j) {
      col.set_zero();
      col.blocks[j / nb][j % nb] = 1.0;
      model.w_pairing(col, tmp);  // W e_j
      Vec we(dim);
      for (int c = 0; c < tmp.n_components(); ++c)
        for (int r = 0; r < nb; ++r) we[c * nb + r] = tmp.blocks[c][r];
      Vec atwe = mat_tvec(a, we);  // A^T W e_j
      for (int c = 0; c < tmp.n_components(); ++c)
        for (int r = 0; r < nb; ++r) tmp.blocks[c][r] = atwe[c * nb + r];
      model.w_solve(tmp);
      for (int c = 0; c < tmp.n_components(); ++c)
        for (int r = 0; r < nb; ++r) t(c * nb + r, j) = tmp.blocks[c][r];
    }
    return t;
  };
  const Mat star_of_strong = w_transpose(a_s);
  const Mat star_of_weak = w_transpose(a_w);

  auto max_diff = [](const Mat& a, const Mat& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.a.size(); ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
    return m;
  };
  OperatorDiffs out;
  out.weak_vs_strong = max_diff(a_s, a_w);
  out.weak_adjoint_vs_strong_state_transpose = max_diff(d_w, star_of_strong);
  out.strong_adjoint_vs_weak_state_transpose = max_diff(d_s, star_of_weak);
  return out;
}

}  // namespace adjdg
