#ifndef ADJDG_OBJECTIVE_HPP
#define ADJDG_OBJECTIVE_HPP

#include <string>

#include "adjdg/time_integration.hpp"

namespace adjdg {

/// Discrete cost: trapezoid-in-time volume (and optional outflow-trace) terms,
/// an optional quadratic terminal term, and beta * ||param||^2 regularization.
struct CostSpec {
  enum class Volume { none, energy, tracking };
  Volume volume = Volume::energy;
  std::vector<int> volume_components;  // empty selects all components
  bool boundary_tracking = false;      // advection outflow trace only
  TimeSignal boundary_target;          // defaults to zero
  bool terminal_quadratic = false;
  std::vector<int> terminal_components;
  double beta = 0.0;
  const Trajectory* observed = nullptr;  // tracking reference, step-aligned

  std::string tag() const;
};

/// Parameter degrees of freedom the gradient is taken with respect to.
struct ParamSet {
  enum class Kind {
    advection_speed,          // globally continuous nodal field
    acoustic_speed_nodal,     // globally continuous nodal field
    acoustic_speed_element,   // one value per element
    maxwell_boundary_current  // per boundary face time series at step boundaries
  };
  Kind kind = Kind::advection_speed;
  Vec values;
  Vec locations;  // x per dof (fields) or t per dof (series)

  // field layouts
  int n_elements = 0;
  int order = 0;
  bool periodic = false;

  // series layout
  int n_steps = 0;
  double dt = 0.0;

  int dim() const { return static_cast<int>(values.size()); }
  bool is_series() const { return kind == Kind::maxwell_boundary_current; }

  // global dof of nodal table entry (e, i); element-constant layouts map the
  // whole element to one dof
  int node_dof(int e, int i) const;
  // expand dof values into a K x (N+1) nodal table (fields only)
  Vec scatter_table() const;
  // series value at time t (linear within steps), face 0 = left, 1 = right
  double series_at(int face, double t) const;
  TimeSignal series_signal(int face) const;
};

ParamSet make_continuous_param(const Mesh1D& mesh, const NodalBasis& basis,
                               const std::function<double(double)>& fn,
                               ParamSet::Kind kind);
ParamSet make_element_param(const Mesh1D& mesh,
                            const std::function<double(double)>& fn_at_center);
ParamSet make_series_param(int n_steps, double dt, const TimeSignal& left,
                           const TimeSignal& right);

// Pointwise cost integrand j_Omega(q_n) + j_Gamma(q_n) for the trapezoid rule.
double cost_integrand(const Model& model, const CostSpec& spec, int step, double t,
                      const DgField& q);

// Total discrete cost from a trajectory whose samples were recorded with the
// same spec; adds the terminal term and regularization.
double evaluate_cost(const Model& model, const Trajectory& traj, const CostSpec& spec,
                     const ParamSet& params);

double regularization_value(const Model& model, const ParamSet& params, double beta);
Vec regularization_gradient(const Model& model, const ParamSet& params, double beta);

// Cost-derivative pairing vectors consumed by run_adjoint.
AdjointSources make_adjoint_sources(const Model& model, const CostSpec& spec);

/// Coefficient-space gradient of the discrete cost, split into volume, face,
/// and regularization parts; `comparator` is the continuous-style variant
/// with the face-jump contributions omitted.
struct GradientReport {
  std::string parameter;
  Vec locations;
  Vec volume, face, regularization, total, comparator;
  std::string cost_tag;
};

GradientReport assemble_gradient(const Model& model, const ParamSet& params,
                                 const Trajectory& state_traj,
                                 const AdjointTrajectory& adjoint_traj,
                                 const CostSpec& spec);

// Same pipeline with the face-jump contributions dropped: the report's total
// equals the comparator column of assemble_gradient.
GradientReport continuous_style_gradient(const Model& model, const ParamSet& params,
                                         const Trajectory& state_traj,
                                         const AdjointTrajectory& adjoint_traj,
                                         const CostSpec& spec);

double directional_derivative(const GradientReport& report, const Vec& direction);

// Convenience wrapper: forward solve with the cost integrand wired in.
Trajectory run_forward_with_cost(const Model& model, const DgField& q0, double dt,
                                 int n_steps, const CostSpec& spec,
                                 StoragePolicy policy = StoragePolicy::store_all,
                                 int checkpoint_interval = 0);

}  // namespace adjdg

#endif
