#ifndef ADJDG_VERIFICATION_HPP
#define ADJDG_VERIFICATION_HPP

#include <cstdint>
#include <functional>
#include <memory>

#include "adjdg/objective.hpp"

namespace adjdg {

using CostOfParam = std::function<double(const Vec& param_values)>;

// Finite-difference directional derivative of a cost functional; rejects
// perturbations that violate parameter positivity via `positivity_floor`
// (ignored when negative).
double fd_directional(const CostOfParam& cost, const Vec& base, const Vec& direction,
                      double epsilon, bool central, double positivity_floor = -1.0);

struct FdSweepResult {
  Vec epsilons;  // strictly decreasing
  Vec one_sided, central;
  double reference = 0.0;
  std::vector<int> matched_one_sided, matched_central;
  double best_central_rel = 0.0;
  double best_epsilon = 0.0;
};

Vec default_epsilon_ladder();  // 1e-2 ... 1e-8, decade steps
int matched_digits(double fd_value, double reference);

FdSweepResult fd_sweep(const CostOfParam& cost, const Vec& base, const Vec& direction,
                       double reference, Vec epsilons = default_epsilon_ladder(),
                       double positivity_floor = -1.0);

// Normalized adjoint-identity defect |<Lq,p>_W - <q,L*p>_W| / (|q|_W |p|_W)
// for one seeded random field pair; `adjoint_override` substitutes a
// mismatched adjoint operator (negative controls).
double adjoint_identity_check(
    const Model& model, uint64_t seed,
    const std::function<void(const DgField&, DgField&)>& adjoint_override = nullptr);

// Fill all components with seeded uniform values in [-1, 1].
void fill_random(DgField& f, uint64_t seed);

struct ConvergenceRow {
  int order = 0;
  int n_elements = 0;
  double error = 0.0;
  double rate = 0.0;  // vs previous level at the same order; 0 for the first
};

struct ConvergenceCase {
  std::function<std::unique_ptr<Model>(int order, int n_elements)> make_model;
  // exact solution per component, forward time for the state, backward-time
  // elapsed tau for the dual
  std::function<double(int comp, double x, double t)> exact;
  double final_time = 1.0;
  double cfl = 0.4;
  bool adjoint = false;  // drive the backward stepper from the exact dual at T
};

std::vector<ConvergenceRow> convergence_study(const ConvergenceCase& c,
                                              const std::vector<int>& orders,
                                              const std::vector<int>& levels);

// L2 norm of (q - exact sampled) over the broken space.
double l2_error(const Model& model, const DgField& q,
                const std::function<double(int, double)>& exact_at_x);

struct OperatorDiffs {
  double weak_vs_strong = 0.0;
  double strong_adjoint_vs_weak_state_transpose = 0.0;
  double weak_adjoint_vs_strong_state_transpose = 0.0;
};

// Materializes the four operator variants on homogeneous data and compares
// entrywise (max norm). Intended for instances of at most a few hundred
// unknowns.
OperatorDiffs weak_strong_consistency(const Model& model);

// Dense materialization of a linear field-to-field map.
Mat materialize(const Model& model,
                const std::function<void(const DgField&, DgField&)>& apply);

}  // namespace adjdg

#endif
