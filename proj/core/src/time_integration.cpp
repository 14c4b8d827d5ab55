#include "adjdg/time_integration.hpp"

#include <cmath>
#include <cstdio>

namespace adjdg {

namespace {

bool finite(const DgField& q) {
  for (const auto& b : q.blocks)
    for (double v : b)
      if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

bool Trajectory::has_snapshot(int step) const {
  if (policy == StoragePolicy::store_all) return step >= 0 && step <= n_steps;
  return step % checkpoint_interval == 0 && step <= n_steps;
}

const DgField& Trajectory::snapshot(int step) const {
  if (policy == StoragePolicy::store_all) return snapshots[step];
  require(step % checkpoint_interval == 0, "trajectory: step is not a checkpoint");
  return snapshots[step / checkpoint_interval];
}

Vec trapezoid_weights(int n_steps, double dt) {
  Vec w(n_steps + 1, dt);
  w.front() = 0.5 * dt;
  w.back() = 0.5 * dt;
  return w;
}

void rk4_step(const Model& model, double t, double dt, const DgField& q,
              DgField& q_next, std::array<DgField, 4>* stages) {
  require(dt > 0.0, "rk4_step: nonpositive dt");
  DgField k = model.make_state();
  DgField stage = q;
  DgField acc = q;

  model.rhs_state(t, stage, k);          // k1 at Q1 = q
  if (stages) (*stages)[0] = stage;
  acc.axpy(dt / 6.0, k);

  DgField q2 = q;
  q2.axpy(0.5 * dt, k);
  model.rhs_state(t + 0.5 * dt, q2, k);  // k2 at Q2
  if (stages) (*stages)[1] = q2;
  acc.axpy(dt / 3.0, k);

  DgField q3 = q;
  q3.axpy(0.5 * dt, k);
  model.rhs_state(t + 0.5 * dt, q3, k);  // k3 at Q3
  if (stages) (*stages)[2] = q3;
  acc.axpy(dt / 3.0, k);

  DgField q4 = q;
  q4.axpy(dt, k);
  model.rhs_state(t + dt, q4, k);        // k4 at Q4
  if (stages) (*stages)[3] = q4;
  acc.axpy(dt / 6.0, k);

  q_next = std::move(acc);
}

void adjoint_rk4_step(const Model& model, const DgField& p_next, double dt,
                      DgField& p_out, std::array<DgField, 4>& gammas) {
  require(dt > 0.0, "adjoint_rk4_step: nonpositive dt");
  DgField ap = model.make_state();

  gammas[3] = p_next;
  gammas[3].scale(dt / 6.0);

  model.rhs_adjoint(gammas[3], ap);
  gammas[2] = p_next;
  gammas[2].scale(dt / 3.0);
  gammas[2].axpy(dt, ap);

  model.rhs_adjoint(gammas[2], ap);
  gammas[1] = p_next;
  gammas[1].scale(dt / 3.0);
  gammas[1].axpy(0.5 * dt, ap);

  model.rhs_adjoint(gammas[1], ap);
  gammas[0] = p_next;
  gammas[0].scale(dt / 6.0);
  gammas[0].axpy(0.5 * dt, ap);

  DgField sum = gammas[0];
  sum.axpy(1.0, gammas[1]);
  sum.axpy(1.0, gammas[2]);
  sum.axpy(1.0, gammas[3]);
  model.rhs_adjoint(sum, ap);
  p_out = p_next;
  p_out.axpy(1.0, ap);
}

void replay_segment(const Model& model, const DgField& q_start, double t_start,
                    double dt, int m, std::vector<DgField>& snapshots,
                    std::vector<std::array<DgField, 4>>& stages) {
  snapshots.assign(1, q_start);
  stages.assign(m, {});
  for (int s = 0; s < m; ++s) {
    DgField next = model.make_state();
    rk4_step(model, t_start + s * dt, dt, snapshots.back(), next, &stages[s]);
    snapshots.push_back(std::move(next));
  }
}

Trajectory run_forward(const Model& model, const DgField& q0, double dt, int n_steps,
                       StoragePolicy policy, int checkpoint_interval,
                       const CostIntegrand& integrand, double cfl_safety) {
  require(dt > 0.0 && n_steps >= 1, "run_forward: need dt > 0 and n_steps >= 1");
  if (policy == StoragePolicy::checkpoint)
    require(checkpoint_interval >= 1, "run_forward: checkpoint interval >= 1 required");

  double hmin = model.mesh().width(0);
  for (int e = 1; e < model.mesh().n_elements(); ++e)
    hmin = std::min(hmin, model.mesh().width(e));
  const double n2 = static_cast<double>(model.basis().order) * model.basis().order;
  const double dt_cfl = cfl_safety * hmin / (model.max_wave_speed() * n2);
  if (dt > dt_cfl)
    std::fprintf(stderr, "warning: dt = %.3e exceeds CFL guideline %.3e\n", dt, dt_cfl);

  Trajectory traj;
  traj.dt = dt;
  traj.n_steps = n_steps;
  traj.policy = policy;
  traj.checkpoint_interval = checkpoint_interval;
  traj.cost_samples.assign(n_steps + 1, 0.0);

  DgField q = q0;
  if (integrand) traj.cost_samples[0] = integrand(0, 0.0, q);
  traj.snapshots.push_back(q);
  traj.snapshot_steps.push_back(0);
  const bool keep_all = policy == StoragePolicy::store_all;
  if (keep_all) traj.stages.resize(n_steps);

  for (int s = 0; s < n_steps; ++s) {
    DgField next = model.make_state();
    rk4_step(model, s * dt, dt, q, next, keep_all ? &traj.stages[s] : nullptr);
    q = std::move(next);
    if (!finite(q)) throw SolverBlowup(s + 1);
    if (integrand) traj.cost_samples[s + 1] = integrand(s + 1, (s + 1) * dt, q);
    const int step = s + 1;
    if (keep_all || step % checkpoint_interval == 0) {
      traj.snapshots.push_back(q);
      traj.snapshot_steps.push_back(step);
    }
  }
  traj.final_state = q;
  return traj;
}

AdjointTrajectory run_adjoint(const Model& model, const Trajectory& traj,
                              const AdjointSources& sources) {
  const int n = traj.n_steps;
  const double dt = traj.dt;
  const Vec w = trapezoid_weights(n, dt);

  AdjointTrajectory adj;
  adj.dt = dt;
  adj.n_steps = n;
  adj.cost_tag = sources.cost_tag;
  adj.snapshots.assign(n + 1, model.make_state());
  adj.multipliers.assign(n, {});

  // terminal condition: pi_N = -M_W^{-1}(w_N j'(q_N) + j_T'(q_N))
  DgField pairing = model.make_state();
  DgField terminal = model.make_state();
  if (sources.step_pairing) {
    sources.step_pairing(n, n * dt, traj.final_state, pairing);
    terminal.axpy(w[n], pairing);
  }
  if (sources.terminal_pairing) {
    sources.terminal_pairing(traj.final_state, pairing);
    terminal.axpy(1.0, pairing);
  }
  model.w_solve(terminal);
  terminal.scale(-1.0);
  adj.snapshots[n] = terminal;

  // backward over checkpoint segments (a single segment when storing all)
  const int interval = traj.policy == StoragePolicy::store_all
                           ? n
                           : traj.checkpoint_interval;
  int seg_end = n;
  while (seg_end > 0) {
    const int seg_start = std::max(0, ((seg_end - 1) / interval) * interval);
    const int m = seg_end - seg_start;
    std::vector<DgField> snaps;
    std::vector<std::array<DgField, 4>> stages;
    const std::vector<DgField>* snaps_p = nullptr;
    if (traj.policy == StoragePolicy::store_all) {
      snaps_p = &traj.snapshots;
    } else {
      replay_segment(model, traj.snapshot(seg_start), seg_start * dt, dt, m, snaps,
                     stages);
      snaps_p = &snaps;
    }
    for (int s = seg_end - 1; s >= seg_start; --s) {
      DgField p = model.make_state();
      adjoint_rk4_step(model, adj.snapshots[s + 1], dt, p, adj.multipliers[s]);
      if (sources.step_pairing) {
        const DgField& qs = (traj.policy == StoragePolicy::store_all)
                                ? (*snaps_p)[s]
                                : (*snaps_p)[s - seg_start];
        sources.step_pairing(s, s * dt, qs, pairing);
        model.w_solve(pairing);
        p.axpy(-w[s], pairing);
      }
      adj.snapshots[s] = std::move(p);
    }
    seg_end = seg_start;
  }
  return adj;
}

DgField run_adjoint_homogeneous(const Model& model, const DgField& terminal, double dt,
                                int n_steps) {
  DgField p = terminal;
  std::array<DgField, 4> gammas;
  for (int s = n_steps - 1; s >= 0; --s) {
    DgField next = model.make_state();
    adjoint_rk4_step(model, p, dt, next, gammas);
    p = std::move(next);
  }
  return p;
}

}  // namespace adjdg
