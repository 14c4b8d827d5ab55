#ifndef ADJDG_TIME_INTEGRATION_HPP
#define ADJDG_TIME_INTEGRATION_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "adjdg/models.hpp"

namespace adjdg {

struct SolverBlowup : std::runtime_error {
  int step;
  explicit SolverBlowup(int s)
      : std::runtime_error("non-finite state detected at step " + std::to_string(s)),
        step(s) {}
};

enum class StoragePolicy { store_all, checkpoint };

/// Time-indexed store of state snapshots and RK stage values. Under the
/// checkpoint policy only every `checkpoint_interval`-th snapshot is kept and
/// stages are recomputed segment-wise; recomputation is bit-identical.
struct Trajectory {
  double dt = 0.0;
  int n_steps = 0;
  StoragePolicy policy = StoragePolicy::store_all;
  int checkpoint_interval = 0;

  std::vector<DgField> snapshots;                   // all, or checkpoints
  std::vector<int> snapshot_steps;
  std::vector<std::array<DgField, 4>> stages;       // store_all only
  Vec cost_samples;                                 // integrand j(q_n), n = 0..N
  DgField final_state;

  const DgField& initial() const { return snapshots.front(); }
  bool has_snapshot(int step) const;
  const DgField& snapshot(int step) const;
  double time_of(int step) const { return step * dt; }
};

// Classical RK4 update; the four stage states are the operator inputs.
void rk4_step(const Model& model, double t, double dt, const DgField& q,
              DgField& q_next, std::array<DgField, 4>* stages);

// Exact algebraic transpose of rk4_step for the homogeneous step map,
// producing the stage multipliers used for parameter-gradient accumulation.
void adjoint_rk4_step(const Model& model, const DgField& p_next, double dt,
                      DgField& p_out, std::array<DgField, 4>& gammas);

using CostIntegrand = std::function<double(int step, double t, const DgField& q)>;

// CFL sanity uses dt <= safety * h / (max speed * N^2); violation warns once.
Trajectory run_forward(const Model& model, const DgField& q0, double dt, int n_steps,
                       StoragePolicy policy = StoragePolicy::store_all,
                       int checkpoint_interval = 0,
                       const CostIntegrand& integrand = nullptr,
                       double cfl_safety = 0.5);

struct AdjointTrajectory {
  double dt = 0.0;
  int n_steps = 0;
  std::vector<DgField> snapshots;                   // dual state per step
  std::vector<std::array<DgField, 4>> multipliers;  // per forward step
  std::string cost_tag;

  const DgField& terminal() const { return snapshots.back(); }
};

/// Cost-derivative injections for the backward sweep, supplied as plain
/// pairing vectors (the runner applies the weighted mass inverse and the
/// trapezoid weights).
struct AdjointSources {
  std::function<void(int step, double t, const DgField& q, DgField& pairing)>
      step_pairing;  // may be null
  std::function<void(const DgField& q_final, DgField& pairing)>
      terminal_pairing;  // may be null
  std::string cost_tag;
};

AdjointTrajectory run_adjoint(const Model& model, const Trajectory& trajectory,
                              const AdjointSources& sources);

// Backward sweep from an explicit terminal dual state with no injections
// (used for adjoint convergence studies and step-transpose tests).
DgField run_adjoint_homogeneous(const Model& model, const DgField& terminal, double dt,
                                int n_steps);

// Composite-trapezoid weights over step boundaries.
Vec trapezoid_weights(int n_steps, double dt);

// Replays [start_step, start_step + m] from a given state, storing local
// snapshots and stages; deterministic and bitwise identical to run_forward.
void replay_segment(const Model& model, const DgField& q_start, double t_start,
                    double dt, int m, std::vector<DgField>& snapshots,
                    std::vector<std::array<DgField, 4>>& stages);

}  // namespace adjdg

#endif
