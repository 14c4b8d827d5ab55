#include <cmath>

#include "adjdg/models.hpp"
#include "model_detail.hpp"

namespace adjdg {

using detail::assembly_faces;

namespace {

struct AcousticSide {
  double em, ep, vm, vp;   // state traces (ghost applied on the plus side)
  double n;
  double lamm, lamp, rcm, rcp;
  double k0() const { return 1.0 / (rcm + rcp); }
  // common upwind mismatch entering both equations
  double S() const { return k0() * ((lamm * em - lamp * ep) + rcp * n * (vm - vp)); }
};

}  // namespace

AcousticFluxValue acoustic_flux(const FaceState& f) {
  const double rho = f.mat_minus[0], c = f.mat_minus[1];
  require(rho > 0.0 && c > 0.0, "acoustic_flux: nonpositive material");
  const double lam = c * c * rho;
  AcousticFluxValue out;
  out.n_dot_v_flux = f.n_minus * mean(f, 1) - 0.5 * c * diff(f, 0);
  out.lambda_e_flux = lam * mean(f, 0) - 0.5 * rho * c * jump(f, 1);
  return out;
}

AcousticFluxValue acoustic_adjoint_flux(const FaceState& f) {
  const double rho = f.mat_minus[0], c = f.mat_minus[1];
  require(rho > 0.0 && c > 0.0, "acoustic_adjoint_flux: nonpositive material");
  const double lam = c * c * rho;
  AcousticFluxValue out;
  out.n_dot_v_flux = f.n_minus * mean(f, 1) + 0.5 * c * diff(f, 0);
  out.lambda_e_flux = lam * mean(f, 0) + 0.5 * rho * c * jump(f, 1);
  return out;
}

AcousticFluxValue acoustic_flux_discontinuous(const FaceState& f) {
  const double rm = f.mat_minus[0], cm = f.mat_minus[1];
  const double rp = f.mat_plus[0], cp = f.mat_plus[1];
  require(rm > 0.0 && cm > 0.0 && rp > 0.0 && cp > 0.0,
          "acoustic_flux_discontinuous: nonpositive material");
  AcousticSide s{f.minus[0], f.plus[0], f.minus[1], f.plus[1], f.n_minus,
                 cm * cm * rm, cp * cp * rp, rm * cm, rp * cp};
  AcousticFluxValue out;
  out.n_dot_v_flux = f.n_minus * s.vm - s.S();
  out.lambda_e_flux = s.lamm * s.em - s.rcm * s.S();
  return out;
}

double acoustic_side_kernel(const FaceState& state, const FaceState& adj,
                            bool full_form) {
  const double rm = state.mat_minus[0], cm = state.mat_minus[1];
  const double rp = state.mat_plus[0], cp = state.mat_plus[1];
  const double lamm = cm * cm * rm, lamp = cp * cp * rp;
  const double rcm = rm * cm, rcp = rp * cp;
  const double k0 = 1.0 / (rcm + rcp);
  const double n = state.n_minus;
  const double dd_lam_e = lamm * state.minus[0] - lamp * state.plus[0];
  const double dd_lam_h = lamm * adj.minus[0] - lamp * adj.plus[0];
  const double jv = n * (state.minus[1] - state.plus[1]);
  const double jw = n * (adj.minus[1] - adj.plus[1]);
  const double em = state.minus[0];
  double g = -k0 * k0 * rm * dd_lam_e * dd_lam_h
             + k0 * k0 * rm * rcp * rcp * jv * jw
             + k0 * k0 * rm * rcp * (dd_lam_e * jw - jv * dd_lam_h)
             + 2.0 * k0 * rcm * em * (dd_lam_h - rcp * jw)
             + 2.0 * rcm * em * n * adj.minus[1];
  if (full_form) {
    const double s = k0 * (dd_lam_e + rcp * jv);
    g += 2.0 * rcm * adj.minus[0] * s;
  }
  return g;
}

AcousticModel::AcousticModel(std::shared_ptr<const Mesh1D> mesh,
                             std::shared_ptr<const NodalBasis> basis, Vec rho,
                             Vec c_nodal, bool element_speed, Form form,
                             TimeSignal e_data, TimeSignal v_data, SpaceTimeFn forcing)
    : rho_(std::move(rho)),
      c_(std::move(c_nodal)),
      element_speed_(element_speed),
      e_data_(std::move(e_data)),
      v_data_(std::move(v_data)),
      forcing_(std::move(forcing)) {
  mesh_ = std::move(mesh);
  basis_ = std::move(basis);
  form_ = form;
  const int nn = basis_->n_nodes();
  const size_t sz = static_cast<size_t>(mesh_->n_elements()) * nn;
  require(rho_.size() == sz, "acoustic: density table shape mismatch");
  require(c_.size() == sz, "acoustic: speed table shape mismatch");
  for (double v : rho_) require(v > 0.0, "acoustic: density must be positive");
  for (double v : c_) require(v > 0.0, "acoustic: wave speed must be positive");
  lam_.resize(sz);
  rc_.resize(sz);
  for (size_t i = 0; i < sz; ++i) {
    lam_[i] = c_[i] * c_[i] * rho_[i];
    rc_[i] = rho_[i] * c_[i];
  }
  mass_e_ = detail::build_masses(*mesh_, *basis_, lam_);
  mass_v_ = detail::build_masses(*mesh_, *basis_, rho_);
}

AcousticModel::AcousticModel(std::shared_ptr<const Mesh1D> mesh,
                             std::shared_ptr<const NodalBasis> basis,
                             Vec rho_nodal_table, Vec speed_nodal_table, Form form,
                             TimeSignal e_data, TimeSignal v_data, SpaceTimeFn forcing)
    : AcousticModel(std::move(mesh), std::move(basis), std::move(rho_nodal_table),
                    std::move(speed_nodal_table), false, form, std::move(e_data),
                    std::move(v_data), std::move(forcing)) {}

std::unique_ptr<AcousticModel> AcousticModel::with_element_speed(
    std::shared_ptr<const Mesh1D> mesh, std::shared_ptr<const NodalBasis> basis,
    Vec rho_nodal_table, Vec speed_per_element, Form form, TimeSignal e_data,
    TimeSignal v_data, SpaceTimeFn forcing) {
  const int nn = basis->n_nodes();
  require(static_cast<int>(speed_per_element.size()) == mesh->n_elements(),
          "acoustic: one speed per element required");
  Vec table(static_cast<size_t>(mesh->n_elements()) * nn);
  for (int e = 0; e < mesh->n_elements(); ++e)
    for (int i = 0; i < nn; ++i) table[e * nn + i] = speed_per_element[e];
  return std::unique_ptr<AcousticModel>(new AcousticModel(
      std::move(mesh), std::move(basis), std::move(rho_nodal_table), std::move(table),
      true, form, std::move(e_data), std::move(v_data), std::move(forcing)));
}

namespace {

// state ghost traces at a boundary face; mirrors keep the ghost map
// independent of the wave speed
void acoustic_state_ghost(BoundaryKind kind, double em, double vm, double e_bc,
                          double v_bc, double& ep, double& vp) {
  if (kind == BoundaryKind::traction_like) {
    ep = 2.0 * e_bc - em;
    vp = vm;
  } else {
    ep = em;
    vp = 2.0 * v_bc - vm;
  }
}

void acoustic_adjoint_ghost(BoundaryKind kind, double hm, double wm, double& hp,
                            double& wp) {
  if (kind == BoundaryKind::traction_like) {
    hp = -hm;
    wp = wm;
  } else {
    hp = hm;
    wp = -wm;
  }
}

}  // namespace

void AcousticModel::rhs_state_form(double t, const DgField& q, DgField& out, Form form,
                                   bool homogeneous) const {
  const NodalBasis& b = *basis_;
  const int nn = b.n_nodes(), k = mesh_->n_elements();
  require(q.n_components() == 2 && q.block_size() == k * nn,
          "acoustic rhs: field shape mismatch");
  out.set_zero();
  Vec z(nn);
  for (int e = 0; e < k; ++e) {
    auto ev = q.element(0, e);
    auto vv = q.element(1, e);
    auto oe = out.element(0, e);
    auto ov = out.element(1, e);
    for (int i = 0; i < nn; ++i) z[i] = lam_[e * nn + i] * ev[i];
    if (form == Form::strong) {
      Vec rh = detail::pair_diff(b, vv);
      Vec rw = detail::pair_diff(b, z);
      for (int i = 0; i < nn; ++i) {
        oe[i] += lam_[e * nn + i] * rh[i];
        ov[i] += rw[i];
      }
    } else {
      Vec rh = detail::diff_t_pair(b, vv);
      Vec rw = detail::diff_t_pair(b, z);
      for (int i = 0; i < nn; ++i) {
        oe[i] -= lam_[e * nn + i] * rh[i];
        ov[i] -= rw[i];
      }
    }
    if (forcing_ && !homogeneous) {
      Vec fp = detail::forcing_pairing(*mesh_, b, e, forcing_, t);
      for (int i = 0; i < nn; ++i) ov[i] += fp[i];
    }
  }
  for (const auto& face : assembly_faces(*mesh_)) {
    auto deposit = [&](int elem, int node, int oelem, int onode, double n, double em,
                       double ep, double vm, double vp) {
      const size_t im = static_cast<size_t>(elem) * nn + node;
      AcousticSide s;
      s.em = em; s.ep = ep; s.vm = vm; s.vp = vp; s.n = n;
      s.lamm = lam_[im];
      s.rcm = rc_[im];
      if (oelem >= 0) {
        const size_t ip = static_cast<size_t>(oelem) * nn + onode;
        s.lamp = lam_[ip];
        s.rcp = rc_[ip];
      } else {
        s.lamp = s.lamm;
        s.rcp = s.rcm;
      }
      const double sv = s.S();
      if (form == Form::strong) {
        out.at(0, elem, node) -= s.lamm * sv;
        out.at(1, elem, node) -= n * s.rcm * sv;
      } else {
        const double v_dag = vm - n * sv;
        const double lam_e_dag = s.lamm * em - s.rcm * sv;
        out.at(0, elem, node) += n * v_dag * s.lamm;
        out.at(1, elem, node) += n * lam_e_dag;
      }
    };
    if (face.left >= 0 && face.right >= 0) {
      const double eL = q.at(0, face.left, nn - 1), eR = q.at(0, face.right, 0);
      const double vL = q.at(1, face.left, nn - 1), vR = q.at(1, face.right, 0);
      deposit(face.left, nn - 1, face.right, 0, +1.0, eL, eR, vL, vR);
      deposit(face.right, 0, face.left, nn - 1, -1.0, eR, eL, vR, vL);
    } else {
      const bool left_end = face.left < 0;
      const int elem = left_end ? face.right : face.left;
      const int node = left_end ? 0 : nn - 1;
      const double n = left_end ? -1.0 : 1.0;
      const double em = q.at(0, elem, node), vm = q.at(1, elem, node);
      const double e_bc = (homogeneous || !e_data_) ? 0.0 : e_data_(t);
      const double v_bc = (homogeneous || !v_data_) ? 0.0 : v_data_(t);
      double ep, vp;
      acoustic_state_ghost(mesh_->boundary, em, vm, e_bc, v_bc, ep, vp);
      deposit(elem, node, -1, 0, n, em, ep, vm, vp);
    }
  }
  detail::solve_blocks(mass_e_, out.blocks[0], nn);
  detail::solve_blocks(mass_v_, out.blocks[1], nn);
}

void AcousticModel::rhs_adjoint_form(const DgField& p, DgField& out, Form form) const {
  const NodalBasis& b = *basis_;
  const int nn = b.n_nodes(), k = mesh_->n_elements();
  out.set_zero();
  Vec z(nn);
  for (int e = 0; e < k; ++e) {
    auto hv = p.element(0, e);
    auto wv = p.element(1, e);
    auto oh = out.element(0, e);
    auto ow = out.element(1, e);
    for (int i = 0; i < nn; ++i) z[i] = lam_[e * nn + i] * hv[i];
    if (form == Form::weak) {
      Vec rh = detail::diff_t_pair(b, wv);
      Vec rw = detail::diff_t_pair(b, z);
      for (int i = 0; i < nn; ++i) {
        oh[i] += lam_[e * nn + i] * rh[i];
        ow[i] += rw[i];
      }
    } else {
      Vec rh = detail::pair_diff(b, wv);
      Vec rw = detail::pair_diff(b, z);
      for (int i = 0; i < nn; ++i) {
        oh[i] -= lam_[e * nn + i] * rh[i];
        ow[i] -= rw[i];
      }
    }
  }
  for (const auto& face : assembly_faces(*mesh_)) {
    auto deposit = [&](int elem, int node, int oelem, int onode, double n, double hm,
                       double hp, double wm, double wp) {
      const size_t im = static_cast<size_t>(elem) * nn + node;
      const double lamm = lam_[im], rcm = rc_[im];
      double lamp = lamm, rcp = rcm;
      if (oelem >= 0) {
        const size_t ip = static_cast<size_t>(oelem) * nn + onode;
        lamp = lam_[ip];
        rcp = rc_[ip];
      }
      const double k0 = 1.0 / (rcm + rcp);
      if (form == Form::weak) {
        const double s_star = k0 * ((lamm * hm - lamp * hp) + n * (rcm * wm + rcp * wp));
        const double t_star = rcp * lamm * hm + rcm * lamp * hp + rcm * rcp * n * (wm - wp);
        out.at(0, elem, node) -= lamm * s_star;
        out.at(1, elem, node) -= n * k0 * t_star;
      } else {
        const double s_star = k0 * ((lamm * hm - lamp * hp) - rcp * n * (wm - wp));
        out.at(0, elem, node) -= lamm * s_star;
        out.at(1, elem, node) += n * rcm * s_star;
      }
    };
    if (face.left >= 0 && face.right >= 0) {
      const double hL = p.at(0, face.left, nn - 1), hR = p.at(0, face.right, 0);
      const double wL = p.at(1, face.left, nn - 1), wR = p.at(1, face.right, 0);
      deposit(face.left, nn - 1, face.right, 0, +1.0, hL, hR, wL, wR);
      deposit(face.right, 0, face.left, nn - 1, -1.0, hR, hL, wR, wL);
    } else {
      const bool left_end = face.left < 0;
      const int elem = left_end ? face.right : face.left;
      const int node = left_end ? 0 : nn - 1;
      const double n = left_end ? -1.0 : 1.0;
      const double hm = p.at(0, elem, node), wm = p.at(1, elem, node);
      double hp, wp;
      acoustic_adjoint_ghost(mesh_->boundary, hm, wm, hp, wp);
      deposit(elem, node, -1, 0, n, hm, hp, wm, wp);
    }
  }
  detail::solve_blocks(mass_e_, out.blocks[0], nn);
  detail::solve_blocks(mass_v_, out.blocks[1], nn);
}

double AcousticModel::w_inner(const DgField& x, const DgField& y) const {
  const NodalBasis& b = *basis_;
  const int nn = b.n_nodes();
  double total = 0.0;
  for (int e = 0; e < mesh_->n_elements(); ++e) {
    std::span<const double> lam{lam_.data() + static_cast<size_t>(e) * nn,
                                static_cast<size_t>(nn)};
    std::span<const double> rho{rho_.data() + static_cast<size_t>(e) * nn,
                                static_cast<size_t>(nn)};
    const Vec lam_q = to_quad(b, lam), rho_q = to_quad(b, rho);
    const Vec xe = to_quad(b, x.element(0, e)), ye = to_quad(b, y.element(0, e));
    const Vec xv = to_quad(b, x.element(1, e)), yv = to_quad(b, y.element(1, e));
    total += mesh_->jacobian(e) * (quadrature_inner_product(b, xe, ye, lam_q) +
                                   quadrature_inner_product(b, xv, yv, rho_q));
  }
  return total;
}

void AcousticModel::w_pairing(const DgField& x, DgField& out) const {
  const NodalBasis& b = *basis_;
  const int nn = b.n_nodes();
  out.set_zero();
  for (int e = 0; e < mesh_->n_elements(); ++e) {
    std::span<const double> lam{lam_.data() + static_cast<size_t>(e) * nn,
                                static_cast<size_t>(nn)};
    std::span<const double> rho{rho_.data() + static_cast<size_t>(e) * nn,
                                static_cast<size_t>(nn)};
    const Vec lam_q = to_quad(b, lam), rho_q = to_quad(b, rho);
    Vec xe = to_quad(b, x.element(0, e)), xv = to_quad(b, x.element(1, e));
    for (int q = 0; q < b.n_quad(); ++q) {
      xe[q] *= lam_q[q];
      xv[q] *= rho_q[q];
    }
    Vec ye = pair_from_quad(b, xe), yv = pair_from_quad(b, xv);
    for (int i = 0; i < nn; ++i) {
      out.at(0, e, i) = mesh_->jacobian(e) * ye[i];
      out.at(1, e, i) = mesh_->jacobian(e) * yv[i];
    }
  }
}

void AcousticModel::w_solve(DgField& pairing) const {
  detail::solve_blocks(mass_e_, pairing.blocks[0], basis_->n_nodes());
  detail::solve_blocks(mass_v_, pairing.blocks[1], basis_->n_nodes());
}

double AcousticModel::max_wave_speed() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, v);
  return m;
}

AcousticGradientForm AcousticModel::gradient_form() const {
  return basis_->quad_mode == QuadMode::collocation ? AcousticGradientForm::simplified
                                                    : AcousticGradientForm::full;
}

void AcousticModel::gradient_stage(const DgField& Q, const DgField& k,
                                   const DgField& gamma, double t,
                                   GradientSink& sink) const {
  gradient_stage_with_form(Q, k, gamma, t, AcousticGradientForm::automatic, sink);
}

void AcousticModel::gradient_stage_with_form(const DgField& Q, const DgField& k,
                                             const DgField& gamma, double t,
                                             AcousticGradientForm grad_form,
                                             GradientSink& sink) const {
  const NodalBasis& b = *basis_;
  const int nn = b.n_nodes(), ne = mesh_->n_elements();
  const bool full = (grad_form == AcousticGradientForm::full) ||
                    (grad_form == AcousticGradientForm::automatic &&
                     gradient_form() == AcousticGradientForm::full);
  if (full)
    require(k.n_components() == 2, "acoustic gradient: stage derivative required");
  for (int e = 0; e < ne; ++e) {
    Vec yw = detail::diff_t_pair(b, gamma.element(1, e));
    auto qe = Q.element(0, e);
    for (int i = 0; i < nn; ++i) {
      const size_t idx = static_cast<size_t>(e) * nn + i;
      double dep = -2.0 * rc_[idx] * qe[i] * yw[i];
      sink.add_volume(e, i, dep);
    }
    if (full) {
      // residual term 2 rho c (e_t - v_x) h of the unsimplified density
      const Vec gh_q = to_quad(b, gamma.element(0, e));
      const Vec ke_q = to_quad(b, k.element(0, e));
      Vec prod(b.n_quad());
      for (int q = 0; q < b.n_quad(); ++q) prod[q] = gh_q[q] * ke_q[q];
      const Vec r1 = pair_from_quad(b, prod);
      const Vec r2 = detail::pair_diff(b, Q.element(1, e));
      auto gh = gamma.element(0, e);
      for (int i = 0; i < nn; ++i) {
        const size_t idx = static_cast<size_t>(e) * nn + i;
        sink.add_volume(e, i, 2.0 * rc_[idx] * (mesh_->jacobian(e) * r1[i] - gh[i] * r2[i]));
      }
    }
  }
  for (const auto& face : assembly_faces(*mesh_)) {
    if (face.left >= 0 && face.right >= 0) {
      auto side = [&](int elem, int node, int oelem, int onode, double n) {
        FaceState st, ad;
        st.n_comp = ad.n_comp = 2;
        st.minus = {Q.at(0, elem, node), Q.at(1, elem, node)};
        st.plus = {Q.at(0, oelem, onode), Q.at(1, oelem, onode)};
        ad.minus = {gamma.at(0, elem, node), gamma.at(1, elem, node)};
        ad.plus = {gamma.at(0, oelem, onode), gamma.at(1, oelem, onode)};
        st.n_minus = ad.n_minus = n;
        const size_t im = static_cast<size_t>(elem) * nn + node;
        const size_t ip = static_cast<size_t>(oelem) * nn + onode;
        st.mat_minus = {rho_[im], c_[im]};
        st.mat_plus = {rho_[ip], c_[ip]};
        sink.add_face(elem, node, acoustic_side_kernel(st, ad, full));
      };
      side(face.left, nn - 1, face.right, 0, +1.0);
      side(face.right, 0, face.left, nn - 1, -1.0);
    } else {
      const bool left_end = face.left < 0;
      const int elem = left_end ? face.right : face.left;
      const int node = left_end ? 0 : nn - 1;
      const double n = left_end ? -1.0 : 1.0;
      const size_t idx = static_cast<size_t>(elem) * nn + node;
      const double rho = rho_[idx], c = c_[idx];
      const double gh = gamma.at(0, elem, node), gw = gamma.at(1, elem, node);
      double g;
      if (mesh_->boundary == BoundaryKind::traction_like) {
        const double mis = Q.at(0, elem, node) - (e_data_ ? e_data_(t) : 0.0);
        g = mis * rho * c * ((full ? 3.0 : 1.0) * c * gh + 2.0 * n * gw);
      } else {
        const double mis = Q.at(1, elem, node) - (v_data_ ? v_data_(t) : 0.0);
        g = mis * rho * (full ? (2.0 * n * c * gh + gw) : gw);
      }
      sink.add_face(elem, node, g);
    }
  }
}

}  // namespace adjdg
