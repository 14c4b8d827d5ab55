#include <cmath>

#include "adjdg/models.hpp"
#include "model_detail.hpp"

namespace adjdg {

using detail::assembly_faces;

MaxwellFluxValue maxwell_flux(const FaceState& f) {
  const double zm = f.mat_minus[0], ym = f.mat_minus[1];
  const double zp = f.mat_plus[0], yp = f.mat_plus[1];
  require(zm > 0.0 && ym > 0.0 && zp > 0.0 && yp > 0.0,
          "maxwell_flux: nonpositive impedance");
  const double my = 0.5 * (ym + yp), mz = 0.5 * (zm + zp);
  const double dh = diff(f, 0), de = diff(f, 1);
  MaxwellFluxValue out;
  out.h_equation_term = (f.n_minus * yp * de - dh) / (2.0 * my);
  out.e_equation_term = (f.n_minus * zp * dh - de) / (2.0 * mz);
  return out;
}

MaxwellAdjointFluxValue maxwell_adjoint_flux(const FaceState& f) {
  const double zm = f.mat_minus[0], ym = f.mat_minus[1];
  const double zp = f.mat_plus[0], yp = f.mat_plus[1];
  require(zm > 0.0 && ym > 0.0 && zp > 0.0 && yp > 0.0,
          "maxwell_adjoint_flux: nonpositive impedance");
  const double my = 0.5 * (ym + yp), mz = 0.5 * (zm + zp);
  const double gm = f.minus[0], gp = f.plus[0];  // G traces
  const double fm = f.minus[1], fp = f.plus[1];  // F traces
  MaxwellAdjointFluxValue out;
  out.f_flux = (0.5 * (ym * fm + yp * fp) - 0.5 * f.n_minus * (gm - gp)) / my;
  out.g_flux = (0.5 * (zm * gm + zp * gp) - 0.5 * f.n_minus * (fm - fp)) / mz;
  return out;
}

double maxwell_boundary_kernel(double gamma_g, double gamma_f, double n_minus,
                               double z) {
  return n_minus * gamma_f - z * gamma_g;
}

MaxwellModel::MaxwellModel(std::shared_ptr<const Mesh1D> mesh,
                           std::shared_ptr<const NodalBasis> basis, Vec mu_per_element,
                           Vec eps_per_element, Form form, TimeSignal js_left,
                           TimeSignal js_right)
    : mu_(std::move(mu_per_element)), eps_(std::move(eps_per_element)) {
  mesh_ = std::move(mesh);
  basis_ = std::move(basis);
  form_ = form;
  js_[0] = std::move(js_left);
  js_[1] = std::move(js_right);
  const int ne = mesh_->n_elements();
  require(static_cast<int>(mu_.size()) == ne && static_cast<int>(eps_.size()) == ne,
          "maxwell: one (mu, eps) pair per element required");
  for (int e = 0; e < ne; ++e)
    require(mu_[e] > 0.0 && eps_[e] > 0.0, "maxwell: materials must be positive");
  require(mesh_->boundary != BoundaryKind::inflow_dirichlet,
          "maxwell: boundary control enters through the traction-like tag");
  z_.resize(ne);
  y_.resize(ne);
  for (int e = 0; e < ne; ++e) {
    z_[e] = std::sqrt(mu_[e] / eps_[e]);
    y_[e] = 1.0 / z_[e];
  }
  const int nn = basis_->n_nodes();
  Vec mu_table(static_cast<size_t>(ne) * nn), eps_table(static_cast<size_t>(ne) * nn);
  for (int e = 0; e < ne; ++e)
    for (int i = 0; i < nn; ++i) {
      mu_table[e * nn + i] = mu_[e];
      eps_table[e * nn + i] = eps_[e];
    }
  mass_h_ = detail::build_masses(*mesh_, *basis_, mu_table);
  mass_e_ = detail::build_masses(*mesh_, *basis_, eps_table);
}

void MaxwellModel::rhs_state_form(double t, const DgField& q, DgField& out, Form form,
                                  bool homogeneous) const {
  const NodalBasis& b = *basis_;
  const int nn = b.n_nodes(), ne = mesh_->n_elements();
  require(q.n_components() == 2 && q.block_size() == ne * nn,
          "maxwell rhs: field shape mismatch");
  out.set_zero();
  for (int e = 0; e < ne; ++e) {
    auto hv = q.element(0, e);
    auto ev = q.element(1, e);
    auto oh = out.element(0, e);
    auto oe = out.element(1, e);
    if (form == Form::strong) {
      Vec rh = detail::pair_diff(b, ev);
      Vec re = detail::pair_diff(b, hv);
      for (int i = 0; i < nn; ++i) {
        oh[i] -= rh[i];
        oe[i] -= re[i];
      }
    } else {
      Vec rh = detail::diff_t_pair(b, ev);
      Vec re = detail::diff_t_pair(b, hv);
      for (int i = 0; i < nn; ++i) {
        oh[i] += rh[i];
        oe[i] += re[i];
      }
    }
  }
  for (const auto& face : assembly_faces(*mesh_)) {
    auto deposit = [&](int elem, int node, int other, double n, double hm, double hp,
                       double em, double ep) {
      FaceState fs;
      fs.n_comp = 2;
      fs.minus = {hm, em};
      fs.plus = {hp, ep};
      fs.n_minus = n;
      fs.mat_minus = {z_[elem], y_[elem]};
      fs.mat_plus = other >= 0 ? std::array<double, 2>{z_[other], y_[other]}
                               : fs.mat_minus;
      const MaxwellFluxValue p = maxwell_flux(fs);
      if (form == Form::strong) {
        out.at(0, elem, node) += p.h_equation_term;
        out.at(1, elem, node) += p.e_equation_term;
      } else {
        out.at(0, elem, node) -= n * (em - n * p.h_equation_term);
        out.at(1, elem, node) -= n * (hm - n * p.e_equation_term);
      }
    };
    if (face.left >= 0 && face.right >= 0) {
      const double hL = q.at(0, face.left, nn - 1), hR = q.at(0, face.right, 0);
      const double eL = q.at(1, face.left, nn - 1), eR = q.at(1, face.right, 0);
      deposit(face.left, nn - 1, face.right, +1.0, hL, hR, eL, eR);
      deposit(face.right, 0, face.left, -1.0, hR, hL, eR, eL);
    } else {
      const bool left_end = face.left < 0;
      const int elem = left_end ? face.right : face.left;
      const int node = left_end ? 0 : nn - 1;
      const double n = left_end ? -1.0 : 1.0;
      const double hm = q.at(0, elem, node), em = q.at(1, elem, node);
      const TimeSignal& js = js_[left_end ? 0 : 1];
      const double j = (homogeneous || !js) ? 0.0 : js(t);
      deposit(elem, node, -1, n, hm, -hm + 2.0 * j, em, em);
    }
  }
  detail::solve_blocks(mass_h_, out.blocks[0], nn);
  detail::solve_blocks(mass_e_, out.blocks[1], nn);
}

void MaxwellModel::rhs_adjoint_form(const DgField& p, DgField& out, Form form) const {
  const NodalBasis& b = *basis_;
  const int nn = b.n_nodes(), ne = mesh_->n_elements();
  out.set_zero();
  for (int e = 0; e < ne; ++e) {
    auto gv = p.element(0, e);
    auto fv = p.element(1, e);
    auto og = out.element(0, e);
    auto of = out.element(1, e);
    if (form == Form::weak) {
      Vec rg = detail::diff_t_pair(b, fv);
      Vec rf = detail::diff_t_pair(b, gv);
      for (int i = 0; i < nn; ++i) {
        og[i] -= rg[i];
        of[i] -= rf[i];
      }
    } else {
      Vec rg = detail::pair_diff(b, fv);
      Vec rf = detail::pair_diff(b, gv);
      for (int i = 0; i < nn; ++i) {
        og[i] += rg[i];
        of[i] += rf[i];
      }
    }
  }
  for (const auto& face : assembly_faces(*mesh_)) {
    auto deposit = [&](int elem, int node, int other, double n, double gm, double gp,
                       double fm, double fp) {
      FaceState fs;
      fs.n_comp = 2;
      fs.minus = {gm, fm};
      fs.plus = {gp, fp};
      fs.n_minus = n;
      fs.mat_minus = {z_[elem], y_[elem]};
      fs.mat_plus = other >= 0 ? std::array<double, 2>{z_[other], y_[other]}
                               : fs.mat_minus;
      if (form == Form::weak) {
        const MaxwellAdjointFluxValue d = maxwell_adjoint_flux(fs);
        out.at(0, elem, node) += n * d.f_flux;
        out.at(1, elem, node) += n * d.g_flux;
      } else {
        const double my = 0.5 * (fs.mat_minus[1] + fs.mat_plus[1]);
        const double mz = 0.5 * (fs.mat_minus[0] + fs.mat_plus[0]);
        const double dg = gm - gp, df = fm - fp;
        out.at(0, elem, node) += -dg / (2.0 * my) - n * z_[elem] * df / (2.0 * mz);
        out.at(1, elem, node) += -n * y_[elem] * dg / (2.0 * my) - df / (2.0 * mz);
      }
    };
    if (face.left >= 0 && face.right >= 0) {
      const double gL = p.at(0, face.left, nn - 1), gR = p.at(0, face.right, 0);
      const double fL = p.at(1, face.left, nn - 1), fR = p.at(1, face.right, 0);
      deposit(face.left, nn - 1, face.right, +1.0, gL, gR, fL, fR);
      deposit(face.right, 0, face.left, -1.0, gR, gL, fR, fL);
    } else {
      const bool left_end = face.left < 0;
      const int elem = left_end ? face.right : face.left;
      const int node = left_end ? 0 : nn - 1;
      const double n = left_end ? -1.0 : 1.0;
      const double gm = p.at(0, elem, node), fm = p.at(1, elem, node);
      deposit(elem, node, -1, n, gm, -gm, fm, fm);
    }
  }
  detail::solve_blocks(mass_h_, out.blocks[0], nn);
  detail::solve_blocks(mass_e_, out.blocks[1], nn);
}

double MaxwellModel::w_inner(const DgField& x, const DgField& y) const {
  const NodalBasis& b = *basis_;
  double total = 0.0;
  Vec unit(b.n_quad(), 1.0);
  for (int e = 0; e < mesh_->n_elements(); ++e) {
    const Vec xh = to_quad(b, x.element(0, e)), yh = to_quad(b, y.element(0, e));
    const Vec xe = to_quad(b, x.element(1, e)), ye = to_quad(b, y.element(1, e));
    total += mesh_->jacobian(e) * (mu_[e] * quadrature_inner_product(b, xh, yh, unit) +
                                   eps_[e] * quadrature_inner_product(b, xe, ye, unit));
  }
  return total;
}

void MaxwellModel::w_pairing(const DgField& x, DgField& out) const {
  const NodalBasis& b = *basis_;
  const int nn = b.n_nodes();
  out.set_zero();
  for (int e = 0; e < mesh_->n_elements(); ++e) {
    Vec yh = detail::pair_apply(b, x.element(0, e));
    Vec ye = detail::pair_apply(b, x.element(1, e));
    for (int i = 0; i < nn; ++i) {
      out.at(0, e, i) = mesh_->jacobian(e) * mu_[e] * yh[i];
      out.at(1, e, i) = mesh_->jacobian(e) * eps_[e] * ye[i];
    }
  }
}

void MaxwellModel::w_solve(DgField& pairing) const {
  detail::solve_blocks(mass_h_, pairing.blocks[0], basis_->n_nodes());
  detail::solve_blocks(mass_e_, pairing.blocks[1], basis_->n_nodes());
}

double MaxwellModel::max_wave_speed() const {
  double m = 0.0;
  for (size_t e = 0; e < mu_.size(); ++e)
    m = std::max(m, 1.0 / std::sqrt(mu_[e] * eps_[e]));
  return m;
}

void MaxwellModel::gradient_stage(const DgField& /*Q*/, const DgField& /*k*/,
                                  const DgField& gamma, double t,
                                  GradientSink& sink) const {
  if (mesh_->periodic()) return;  // no boundary faces, no control surface
  const int nn = basis_->n_nodes();
  const int last = mesh_->n_elements() - 1;
  sink.add_boundary_series(
      0, t, maxwell_boundary_kernel(gamma.at(0, 0, 0), gamma.at(1, 0, 0), -1.0, z_[0]));
  sink.add_boundary_series(
      1, t,
      maxwell_boundary_kernel(gamma.at(0, last, nn - 1), gamma.at(1, last, nn - 1),
                              +1.0, z_[last]));
}

}  // namespace adjdg
