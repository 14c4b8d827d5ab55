#include "adjdg/objective.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "model_detail.hpp"

namespace adjdg {

std::string CostSpec::tag() const {
  std::ostringstream os;
  os << "vol=" << static_cast<int>(volume) << ";comps=";
  for (int c : volume_components) os << c << ',';
  os << ";bdy=" << boundary_tracking << ";term=" << terminal_quadratic << ";tcomps=";
  for (int c : terminal_components) os << c << ',';
  os << ";beta=" << beta;
  return os.str();
}

int ParamSet::node_dof(int e, int i) const {
  switch (kind) {
    case Kind::acoustic_speed_element:
      return e;
    case Kind::advection_speed:
    case Kind::acoustic_speed_nodal: {
      const int g = e * order + i;
      return periodic ? g % (n_elements * order) : g;
    }
    default:
      throw std::invalid_argument("node_dof: not a field parameter");
  }
}

Vec ParamSet::scatter_table() const {
  require(!is_series(), "scatter_table: not a field parameter");
  const int nn = order + 1;
  Vec table(static_cast<size_t>(n_elements) * nn);
  for (int e = 0; e < n_elements; ++e)
    for (int i = 0; i < nn; ++i)
      table[e * nn + i] = kind == Kind::acoustic_speed_element
                              ? values[e]
                              : values[node_dof(e, i)];
  return table;
}

double ParamSet::series_at(int face, double t) const {
  const int stride = n_steps + 1;
  const double s = t / dt;
  int k = static_cast<int>(std::floor(s + 1e-12));
  k = std::clamp(k, 0, n_steps - 1);
  const double th = s - k;
  const double a = values[face * stride + k];
  const double b = values[face * stride + k + 1];
  return (1.0 - th) * a + th * b;
}

TimeSignal ParamSet::series_signal(int face) const {
  ParamSet copy = *this;
  return [copy, face](double t) { return copy.series_at(face, t); };
}

ParamSet make_continuous_param(const Mesh1D& mesh, const NodalBasis& basis,
                               const std::function<double(double)>& fn,
                               ParamSet::Kind kind) {
  ParamSet p;
  p.kind = kind;
  p.n_elements = mesh.n_elements();
  p.order = basis.order;
  p.periodic = mesh.periodic();
  const int dim = p.periodic ? p.n_elements * p.order : p.n_elements * p.order + 1;
  p.values.assign(dim, 0.0);
  p.locations.assign(dim, 0.0);
  for (int e = 0; e < p.n_elements; ++e)
    for (int i = 0; i <= p.order; ++i) {
      const int g = p.node_dof(e, i);
      const double x = mesh.breaks[e] + 0.5 * (basis.nodes[i] + 1.0) * mesh.width(e);
      p.locations[g] = x;
      p.values[g] = fn(x);
    }
  if (p.periodic) {
    // the wrapped dof takes the left-endpoint value
    p.locations[0] = mesh.x_left;
    p.values[0] = fn(mesh.x_left);
  }
  return p;
}

ParamSet make_element_param(const Mesh1D& mesh,
                            const std::function<double(double)>& fn_at_center) {
  ParamSet p;
  p.kind = ParamSet::Kind::acoustic_speed_element;
  p.n_elements = mesh.n_elements();
  p.periodic = mesh.periodic();
  p.values.resize(p.n_elements);
  p.locations.resize(p.n_elements);
  for (int e = 0; e < p.n_elements; ++e) {
    p.locations[e] = 0.5 * (mesh.breaks[e] + mesh.breaks[e + 1]);
    p.values[e] = fn_at_center(p.locations[e]);
  }
  return p;
}

ParamSet make_series_param(int n_steps, double dt, const TimeSignal& left,
                           const TimeSignal& right) {
  ParamSet p;
  p.kind = ParamSet::Kind::maxwell_boundary_current;
  p.n_steps = n_steps;
  p.dt = dt;
  p.values.assign(2 * (n_steps + 1), 0.0);
  p.locations.assign(2 * (n_steps + 1), 0.0);
  for (int f = 0; f < 2; ++f)
    for (int k = 0; k <= n_steps; ++k) {
      const TimeSignal& sig = f == 0 ? left : right;
      p.values[f * (n_steps + 1) + k] = sig ? sig(k * dt) : 0.0;
      p.locations[f * (n_steps + 1) + k] = k * dt;
    }
  return p;
}

namespace {

std::vector<int> selected(const std::vector<int>& sel, int n_comp) {
  if (!sel.empty()) return sel;
  std::vector<int> all(n_comp);
  for (int c = 0; c < n_comp; ++c) all[c] = c;
  return all;
}

double quadratic_volume(const Model& model, const DgField& q, const DgField* obs,
                        const std::vector<int>& comps) {
  const NodalBasis& b = model.basis();
  Vec unit(b.n_quad(), 1.0);
  double total = 0.0;
  for (int c : comps)
    for (int e = 0; e < model.mesh().n_elements(); ++e) {
      Vec fq = to_quad(b, q.element(c, e));
      if (obs) {
        const Vec oq = to_quad(b, obs->element(c, e));
        for (int i = 0; i < b.n_quad(); ++i) fq[i] -= oq[i];
      }
      total += model.mesh().jacobian(e) * quadrature_inner_product(b, fq, fq, unit);
    }
  return total;
}

}  // namespace

double cost_integrand(const Model& model, const CostSpec& spec, int step, double t,
                      const DgField& q) {
  double j = 0.0;
  const auto comps = selected(spec.volume_components, q.n_components());
  if (spec.volume == CostSpec::Volume::energy) {
    j += quadratic_volume(model, q, nullptr, comps);
  } else if (spec.volume == CostSpec::Volume::tracking) {
    require(spec.observed != nullptr &&
                spec.observed->policy == StoragePolicy::store_all,
            "cost: tracking requires a stored observation trajectory");
    const DgField& obs = spec.observed->snapshot(step);
    require(obs.n_components() == q.n_components() &&
                obs.block_size() == q.block_size(),
            "cost: observation trajectory shape mismatch");
    j += quadratic_volume(model, q, &obs, comps);
  }
  if (spec.boundary_tracking) {
    require(!model.mesh().periodic(),
            "cost: boundary tracking needs a domain boundary");
    const int last = model.mesh().n_elements() - 1;
    const double trace = q.at(0, last, model.basis().order);
    const double target = spec.boundary_target ? spec.boundary_target(t) : 0.0;
    j += (trace - target) * (trace - target);
  }
  return j;
}

double regularization_value(const Model& model, const ParamSet& params, double beta) {
  if (beta == 0.0) return 0.0;
  double r = 0.0;
  if (params.is_series()) {
    const Vec w = trapezoid_weights(params.n_steps, params.dt);
    for (int f = 0; f < 2; ++f)
      for (int k = 0; k <= params.n_steps; ++k) {
        const double v = params.values[f * (params.n_steps + 1) + k];
        r += w[k] * v * v;
      }
    return beta * r;
  }
  if (params.kind == ParamSet::Kind::acoustic_speed_element) {
    for (int e = 0; e < params.n_elements; ++e)
      r += model.mesh().width(e) * params.values[e] * params.values[e];
    return beta * r;
  }
  const NodalBasis& b = model.basis();
  const Vec table = params.scatter_table();
  Vec unit(b.n_quad(), 1.0);
  for (int e = 0; e < params.n_elements; ++e) {
    std::span<const double> ce{table.data() + static_cast<size_t>(e) * b.n_nodes(),
                               static_cast<size_t>(b.n_nodes())};
    const Vec cq = to_quad(b, ce);
    r += model.mesh().jacobian(e) * quadrature_inner_product(b, cq, cq, unit);
  }
  return beta * r;
}

Vec regularization_gradient(const Model& model, const ParamSet& params, double beta) {
  Vec g(params.dim(), 0.0);
  if (beta == 0.0) return g;
  if (params.is_series()) {
    const Vec w = trapezoid_weights(params.n_steps, params.dt);
    for (int f = 0; f < 2; ++f)
      for (int k = 0; k <= params.n_steps; ++k) {
        const int d = f * (params.n_steps + 1) + k;
        g[d] = 2.0 * beta * w[k] * params.values[d];
      }
    return g;
  }
  if (params.kind == ParamSet::Kind::acoustic_speed_element) {
    for (int e = 0; e < params.n_elements; ++e)
      g[e] = 2.0 * beta * model.mesh().width(e) * params.values[e];
    return g;
  }
  const NodalBasis& b = model.basis();
  const Vec table = params.scatter_table();
  for (int e = 0; e < params.n_elements; ++e) {
    std::span<const double> ce{table.data() + static_cast<size_t>(e) * b.n_nodes(),
                               static_cast<size_t>(b.n_nodes())};
    const Vec y = detail::pair_apply(b, ce);
    for (int i = 0; i < b.n_nodes(); ++i)
      g[params.node_dof(e, i)] += 2.0 * beta * model.mesh().jacobian(e) * y[i];
  }
  return g;
}

double evaluate_cost(const Model& model, const Trajectory& traj, const CostSpec& spec,
                     const ParamSet& params) {
  const Vec w = trapezoid_weights(traj.n_steps, traj.dt);
  double j = 0.0;
  for (int n = 0; n <= traj.n_steps; ++n) j += w[n] * traj.cost_samples[n];
  if (spec.terminal_quadratic) {
    const auto comps = selected(spec.terminal_components,
                                traj.final_state.n_components());
    j += quadratic_volume(model, traj.final_state, nullptr, comps);
  }
  j += regularization_value(model, params, spec.beta);
  return j;
}

AdjointSources make_adjoint_sources(const Model& model, const CostSpec& spec) {
  AdjointSources src;
  src.cost_tag = spec.tag();
  const Mesh1D& mesh = model.mesh();
  src.step_pairing = [&model, &mesh, spec](int step, double t, const DgField& q,
                                           DgField& pairing) {
    pairing.set_zero();
    const NodalBasis& b = model.basis();
    const auto comps = selected(spec.volume_components, q.n_components());
    if (spec.volume != CostSpec::Volume::none) {
      const DgField* obs = nullptr;
      if (spec.volume == CostSpec::Volume::tracking) obs = &spec.observed->snapshot(step);
      for (int c : comps)
        for (int e = 0; e < mesh.n_elements(); ++e) {
          Vec diff_e(b.n_nodes());
          for (int i = 0; i < b.n_nodes(); ++i)
            diff_e[i] = q.at(c, e, i) - (obs ? obs->at(c, e, i) : 0.0);
          const Vec y = detail::pair_apply(b, diff_e);
          for (int i = 0; i < b.n_nodes(); ++i)
            pairing.at(c, e, i) += 2.0 * mesh.jacobian(e) * y[i];
        }
    }
    if (spec.boundary_tracking) {
      const int last = mesh.n_elements() - 1;
      const double trace = q.at(0, last, b.order);
      const double target = spec.boundary_target ? spec.boundary_target(t) : 0.0;
      pairing.at(0, last, b.order) += 2.0 * (trace - target);
    }
  };
  if (spec.terminal_quadratic) {
    src.terminal_pairing = [&model, &mesh, spec](const DgField& q, DgField& pairing) {
      pairing.set_zero();
      const NodalBasis& b = model.basis();
      const auto comps = selected(spec.terminal_components, q.n_components());
      for (int c : comps)
        for (int e = 0; e < mesh.n_elements(); ++e) {
          const Vec y = detail::pair_apply(b, q.element(c, e));
          for (int i = 0; i < b.n_nodes(); ++i)
            pairing.at(c, e, i) += 2.0 * mesh.jacobian(e) * y[i];
        }
    };
  }
  return src;
}

namespace {

class AccumSink final : public GradientSink {
 public:
  AccumSink(const ParamSet& p) : p_(p), volume_(p.dim(), 0.0), face_(p.dim(), 0.0) {}

  void add_volume(int elem, int node, double v) override {
    volume_[p_.node_dof(elem, node)] += v;
  }
  void add_face(int elem, int node, double v) override {
    face_[p_.node_dof(elem, node)] += v;
  }
  void add_boundary_series(int side, double t, double v) override {
    const int stride = p_.n_steps + 1;
    const double s = t / p_.dt;
    int k = static_cast<int>(std::floor(s + 1e-12));
    k = std::clamp(k, 0, p_.n_steps - 1);
    const double th = s - k;
    face_[side * stride + k] += (1.0 - th) * v;
    face_[side * stride + k + 1] += th * v;
  }

  const Vec& volume() const { return volume_; }
  const Vec& face() const { return face_; }

 private:
  const ParamSet& p_;
  Vec volume_, face_;
};

std::string param_name(ParamSet::Kind k) {
  switch (k) {
    case ParamSet::Kind::advection_speed: return "a";
    case ParamSet::Kind::acoustic_speed_nodal:
    case ParamSet::Kind::acoustic_speed_element: return "c";
    default: return "J_s";
  }
}

}  // namespace

GradientReport assemble_gradient(const Model& model, const ParamSet& params,
                                 const Trajectory& traj,
                                 const AdjointTrajectory& adj, const CostSpec& spec) {
  require(adj.cost_tag == spec.tag(),
          "assemble_gradient: adjoint trajectory from a different cost spec");
  require(adj.n_steps == traj.n_steps, "assemble_gradient: trajectory mismatch");
  if (params.is_series())
    require(params.n_steps == traj.n_steps && params.dt == traj.dt,
            "assemble_gradient: series parameter layout mismatch");
  else
    require(params.n_elements == model.mesh().n_elements() &&
                params.order == model.basis().order,
            "assemble_gradient: parameter layout mismatch");

  AccumSink sink(params);
  const double dt = traj.dt;
  const bool need_k = model.gradient_needs_stage_derivative();
  DgField kstage = model.make_state();
  const std::array<double, 4> stage_offset{0.0, 0.5 * dt, 0.5 * dt, dt};

  const int interval = traj.policy == StoragePolicy::store_all
                           ? traj.n_steps
                           : traj.checkpoint_interval;
  int seg_end = traj.n_steps;
  while (seg_end > 0) {
    const int seg_start = std::max(0, ((seg_end - 1) / interval) * interval);
    std::vector<DgField> snaps;
    std::vector<std::array<DgField, 4>> local_stages;
    const std::vector<std::array<DgField, 4>>* stages_p = &traj.stages;
    int stage_base = 0;
    if (traj.policy != StoragePolicy::store_all) {
      replay_segment(model, traj.snapshot(seg_start), seg_start * dt, dt,
                     seg_end - seg_start, snaps, local_stages);
      stages_p = &local_stages;
      stage_base = seg_start;
    }
    for (int s = seg_start; s < seg_end; ++s) {
      const auto& stages = (*stages_p)[s - stage_base];
      for (int i = 0; i < 4; ++i) {
        const double ti = s * dt + stage_offset[i];
        if (need_k) model.rhs_state(ti, stages[i], kstage);
        model.gradient_stage(stages[i], kstage, adj.multipliers[s][i], ti, sink);
      }
    }
    seg_end = seg_start;
  }

  GradientReport rep;
  rep.parameter = param_name(params.kind);
  rep.locations = params.locations;
  rep.cost_tag = spec.tag();
  rep.volume = sink.volume();
  rep.face = sink.face();
  rep.regularization = regularization_gradient(model, params, spec.beta);
  rep.total.resize(params.dim());
  rep.comparator.resize(params.dim());
  for (int d = 0; d < params.dim(); ++d) {
    rep.total[d] = rep.volume[d] + rep.face[d] + rep.regularization[d];
    // the boundary-current kernel is the continuous gradient itself; the
    // field kernels drop their jump-type face deposits
    rep.comparator[d] = params.is_series()
                            ? rep.total[d]
                            : rep.volume[d] + rep.regularization[d];
  }
  return rep;
}

GradientReport continuous_style_gradient(const Model& model, const ParamSet& params,
                                         const Trajectory& traj,
                                         const AdjointTrajectory& adj,
                                         const CostSpec& spec) {
  GradientReport rep = assemble_gradient(model, params, traj, adj, spec);
  rep.total = rep.comparator;
  if (!params.is_series()) std::fill(rep.face.begin(), rep.face.end(), 0.0);
  return rep;
}

double directional_derivative(const GradientReport& report, const Vec& direction) {
  require(direction.size() == report.total.size(),
          "directional_derivative: layout mismatch");
  double s = 0.0;
  for (size_t i = 0; i < direction.size(); ++i) s += report.total[i] * direction[i];
  return s;
}

Trajectory run_forward_with_cost(const Model& model, const DgField& q0, double dt,
                                 int n_steps, const CostSpec& spec,
                                 StoragePolicy policy, int checkpoint_interval) {
  return run_forward(model, q0, dt, n_steps, policy, checkpoint_interval,
                     [&](int step, double t, const DgField& q) {
                       return cost_integrand(model, spec, step, t, q);
                     });
}

}  // namespace adjdg
