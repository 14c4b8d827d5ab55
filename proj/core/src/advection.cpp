#include <cmath>

#include "adjdg/models.hpp"
#include "model_detail.hpp"

namespace adjdg {

using detail::assembly_faces;
using detail::interior_sides;

double advection_flux(const FaceState& f, double alpha) {
  const double a = f.mat_minus[0];
  require(a > 0.0, "advection_flux: nonpositive speed");
  return a * mean(f, 0) + 0.5 * a * (1.0 - alpha) * jump(f, 0);
}

double advection_adjoint_flux(const FaceState& f, double alpha) {
  const double a = f.mat_minus[0];
  require(a > 0.0, "advection_adjoint_flux: nonpositive speed");
  return a * mean(f, 0) + 0.5 * a * (alpha - 1.0) * jump(f, 0);
}

double advection_adjoint_outflow_ghost(double j_gamma_prime, double a, double alpha,
                                       double p_minus) {
  require(std::abs(2.0 - alpha) > 1e-14, "adjoint outflow ghost: alpha = 2 singular");
  return -j_gamma_prime / (a * (1.0 - 0.5 * alpha)) - alpha / (2.0 - alpha) * p_minus;
}

double advection_face_kernel(const FaceState& u, const FaceState& p, double alpha) {
  return -(jump(u, 0) * mean(p, 0) + 0.5 * (alpha - 1.0) * jump(u, 0) * jump(p, 0));
}

double advection_inflow_kernel(double u_minus, double u_inflow, double p_minus,
                               double alpha) {
  return 0.5 * (2.0 - alpha) * p_minus * (u_minus - u_inflow);
}

AdvectionModel::AdvectionModel(std::shared_ptr<const Mesh1D> mesh,
                               std::shared_ptr<const NodalBasis> basis,
                               Vec speed_nodal_table, double alpha, Form form,
                               TimeSignal inflow_data, SpaceTimeFn forcing)
    : a_(std::move(speed_nodal_table)),
      alpha_(alpha),
      inflow_(std::move(inflow_data)),
      forcing_(std::move(forcing)) {
  mesh_ = std::move(mesh);
  basis_ = std::move(basis);
  form_ = form;
  require(alpha_ >= 0.0 && alpha_ <= 1.0, "advection: alpha must lie in [0,1]");
  require(static_cast<int>(a_.size()) == mesh_->n_elements() * basis_->n_nodes(),
          "advection: speed table shape mismatch");
  for (double av : a_) require(av > 0.0, "advection: speed must be positive");
  require(mesh_->boundary != BoundaryKind::traction_like,
          "advection: traction-like boundaries are not meaningful");
  mass_ = detail::build_masses(*mesh_, *basis_, detail::unit_table(*mesh_, *basis_));
}

void AdvectionModel::rhs_state_form(double t, const DgField& q, DgField& out,
                                    Form form, bool homogeneous) const {
  const NodalBasis& b = *basis_;
  const int nn = b.n_nodes(), k = mesh_->n_elements();
  require(q.n_components() == 1 && q.block_size() == k * nn,
          "advection rhs: field shape mismatch");
  out.set_zero();
  Vec z(nn);
  for (int e = 0; e < k; ++e) {
    auto u = q.element(0, e);
    for (int i = 0; i < nn; ++i) z[i] = a_[e * nn + i] * u[i];
    Vec r = (form == Form::strong) ? detail::pair_diff(b, z) : detail::diff_t_pair(b, z);
    auto o = out.element(0, e);
    const double s = (form == Form::strong) ? -1.0 : 1.0;
    for (int i = 0; i < nn; ++i) o[i] += s * r[i];
    if (forcing_ && !homogeneous) {
      Vec fp = detail::forcing_pairing(*mesh_, b, e, forcing_, t);
      for (int i = 0; i < nn; ++i) o[i] += fp[i];
    }
  }
  for (const auto& face : assembly_faces(*mesh_)) {
    FaceState fs;
    fs.n_comp = 1;
    auto deposit = [&](int elem, int node, double n, double um, double up) {
      fs.minus[0] = um;
      fs.plus[0] = up;
      fs.n_minus = n;
      fs.mat_minus[0] = fs.mat_plus[0] = a_[elem * nn + node];
      const double flux = advection_flux(fs, alpha_);
      const double term = (form == Form::strong)
                              ? n * (fs.mat_minus[0] * um - flux)
                              : -n * flux;
      out.at(0, elem, node) += term;
    };
    if (face.left >= 0 && face.right >= 0) {
      const double um = q.at(0, face.left, nn - 1);
      const double up = q.at(0, face.right, 0);
      deposit(face.left, nn - 1, +1.0, um, up);
      deposit(face.right, 0, -1.0, up, um);
    } else if (face.left < 0) {
      const double um = q.at(0, face.right, 0);
      const double data = (homogeneous || !inflow_) ? 0.0 : inflow_(t);
      deposit(face.right, 0, -1.0, um, data);
    } else {
      const double um = q.at(0, face.left, nn - 1);
      deposit(face.left, nn - 1, +1.0, um, um);  // outflow copy
    }
  }
  detail::solve_blocks(mass_, out.blocks[0], nn);
}

void AdvectionModel::rhs_adjoint_form(const DgField& p, DgField& out, Form form) const {
  const NodalBasis& b = *basis_;
  const int nn = b.n_nodes(), k = mesh_->n_elements();
  out.set_zero();
  for (int e = 0; e < k; ++e) {
    auto pe = p.element(0, e);
    auto o = out.element(0, e);
    if (form == Form::weak) {
      Vec y = detail::diff_t_pair(b, pe);
      for (int i = 0; i < nn; ++i) o[i] -= a_[e * nn + i] * y[i];
    } else {
      Vec y = detail::pair_diff(b, pe);
      for (int i = 0; i < nn; ++i) o[i] += a_[e * nn + i] * y[i];
    }
  }
  for (const auto& face : assembly_faces(*mesh_)) {
    FaceState fs;
    fs.n_comp = 1;
    auto deposit = [&](int elem, int node, double n, double pm, double pp) {
      fs.minus[0] = pm;
      fs.plus[0] = pp;
      fs.n_minus = n;
      fs.mat_minus[0] = fs.mat_plus[0] = a_[elem * nn + node];
      const double flux = advection_adjoint_flux(fs, alpha_);
      const double term = (form == Form::weak)
                              ? n * flux
                              : -n * (fs.mat_minus[0] * pm - flux);
      out.at(0, elem, node) += term;
    };
    if (face.left >= 0 && face.right >= 0) {
      const double pm = p.at(0, face.left, nn - 1);
      const double pp = p.at(0, face.right, 0);
      deposit(face.left, nn - 1, +1.0, pm, pp);
      deposit(face.right, 0, -1.0, pp, pm);
    } else if (face.right < 0) {
      // adjoint inflow: homogeneous outflow-cost closure
      const double pm = p.at(0, face.left, nn - 1);
      const double pp = advection_adjoint_outflow_ghost(0.0, a_[face.left * nn + nn - 1],
                                                        alpha_, pm);
      deposit(face.left, nn - 1, +1.0, pm, pp);
    } else {
      // adjoint outflow closure at the state inflow boundary
      const double pm = p.at(0, face.right, 0);
      const double a = a_[face.right * nn];
      const double term = (form == Form::weak)
                              ? -1.0 * a * 0.5 * (2.0 - alpha_) * pm
                              : -1.0 * (-a * 0.5 * alpha_) * pm;
      out.at(0, face.right, 0) += term;
    }
  }
  detail::solve_blocks(mass_, out.blocks[0], nn);
}

double AdvectionModel::w_inner(const DgField& x, const DgField& y) const {
  return broken_inner_product(x, y);
}

void AdvectionModel::w_pairing(const DgField& x, DgField& out) const {
  const int nn = basis_->n_nodes();
  out.set_zero();
  for (int e = 0; e < mesh_->n_elements(); ++e) {
    Vec r = detail::pair_apply(*basis_, x.element(0, e));
    auto o = out.element(0, e);
    for (int i = 0; i < nn; ++i) o[i] = mesh_->jacobian(e) * r[i];
  }
}

void AdvectionModel::w_solve(DgField& pairing) const {
  detail::solve_blocks(mass_, pairing.blocks[0], basis_->n_nodes());
}

double AdvectionModel::max_wave_speed() const {
  double m = 0.0;
  for (double av : a_) m = std::max(m, std::abs(av));
  return m;
}

void AdvectionModel::gradient_stage(const DgField& Q, const DgField& /*k*/,
                                    const DgField& gamma, double t,
                                    GradientSink& sink) const {
  const NodalBasis& b = *basis_;
  const int nn = b.n_nodes(), k = mesh_->n_elements();
  for (int e = 0; e < k; ++e) {
    Vec y = detail::diff_t_pair(b, gamma.element(0, e));
    auto u = Q.element(0, e);
    for (int i = 0; i < nn; ++i) sink.add_volume(e, i, u[i] * y[i]);
  }
  for (const auto& face : assembly_faces(*mesh_)) {
    if (face.left >= 0 && face.right >= 0) {
      FaceState u, p;
      u.minus[0] = Q.at(0, face.left, nn - 1);
      u.plus[0] = Q.at(0, face.right, 0);
      p.minus[0] = gamma.at(0, face.left, nn - 1);
      p.plus[0] = gamma.at(0, face.right, 0);
      u.n_minus = p.n_minus = 1.0;
      sink.add_face(face.left, nn - 1, advection_face_kernel(u, p, alpha_));
    } else if (face.left < 0) {
      const double data = inflow_ ? inflow_(t) : 0.0;
      sink.add_face(face.right, 0,
                    advection_inflow_kernel(Q.at(0, face.right, 0), data,
                                            gamma.at(0, face.right, 0), alpha_));
    }
    // outflow boundary carries no speed sensitivity
  }
}

}  // namespace adjdg
