#ifndef ADJDG_MODELS_HPP
#define ADJDG_MODELS_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "adjdg/dg_field.hpp"

namespace adjdg {

enum class Form { strong, weak };

inline Form dual_form(Form f) { return f == Form::strong ? Form::weak : Form::strong; }

using TimeSignal = std::function<double(double)>;      // boundary data
using SpaceTimeFn = std::function<double(double, double)>;  // forcing f(x,t)

/// Receives parameter-gradient deposits during stage accumulation.
/// Volume deposits discretize the continuous gradient density; face deposits
/// are the jump-type element-boundary terms; boundary-series deposits are the
/// boundary-forcing kernel (time-dependent controls).
class GradientSink {
 public:
  virtual ~GradientSink() = default;
  virtual void add_volume(int elem, int node, double v) = 0;
  virtual void add_face(int elem, int node, double v) = 0;
  virtual void add_boundary_series(int side, double t, double v) = 0;
};

class Model {
 public:
  virtual ~Model() = default;

  const Mesh1D& mesh() const { return *mesh_; }
  const NodalBasis& basis() const { return *basis_; }
  std::shared_ptr<const Mesh1D> mesh_ptr() const { return mesh_; }
  std::shared_ptr<const NodalBasis> basis_ptr() const { return basis_; }
  Form form() const { return form_; }

  virtual std::vector<std::string> component_names() const = 0;
  DgField make_state() const { return make_field(mesh_, basis_, component_names()); }

  // dq/dt in the requested residual form; homogeneous drops forcing and
  // boundary data (the bare spatial operator).
  virtual void rhs_state_form(double t, const DgField& q, DgField& out, Form form,
                              bool homogeneous) const = 0;
  void rhs_state(double t, const DgField& q, DgField& out, bool homogeneous = false) const {
    rhs_state_form(t, q, out, form_, homogeneous);
  }

  // Backward-time adjoint operator dp/dtau; a strong-form state pairs with the
  // weak-form adjoint and vice versa.
  virtual void rhs_adjoint_form(const DgField& p, DgField& out, Form form) const = 0;
  void rhs_adjoint(const DgField& p, DgField& out) const {
    rhs_adjoint_form(p, out, dual_form(form_));
  }

  // The model's weighted inner product and mass solve.
  virtual double w_inner(const DgField& x, const DgField& y) const = 0;
  virtual void w_pairing(const DgField& x, DgField& out) const = 0;  // M_W x
  virtual void w_solve(DgField& pairing) const = 0;                  // M_W^{-1} in place

  virtual double max_wave_speed() const = 0;

  // Whether gradient accumulation needs the stage derivative k = dq/dt.
  virtual bool gradient_needs_stage_derivative() const { return false; }

  // Pair the adjoint stage multiplier with the parameter derivative of the
  // spatial residual at stage state Q (k is the stage derivative, may be
  // empty unless gradient_needs_stage_derivative()).
  virtual void gradient_stage(const DgField& Q, const DgField& k, const DgField& gamma,
                              double t, GradientSink& sink) const = 0;

 protected:
  std::shared_ptr<const Mesh1D> mesh_;
  std::shared_ptr<const NodalBasis> basis_;
  Form form_ = Form::strong;
};

// ---------------------------------------------------------------------------
// advection: u_t + (a u)_x = f, a(x) >= a0 > 0 continuous
// ---------------------------------------------------------------------------

class AdvectionModel final : public Model {
 public:
  // `speed` is a globally continuous nodal table (shared face values).
  AdvectionModel(std::shared_ptr<const Mesh1D> mesh,
                 std::shared_ptr<const NodalBasis> basis, Vec speed_nodal_table,
                 double alpha, Form form, TimeSignal inflow_data = nullptr,
                 SpaceTimeFn forcing = nullptr);

  std::vector<std::string> component_names() const override { return {"u"}; }
  void rhs_state_form(double t, const DgField& q, DgField& out, Form form,
                      bool homogeneous) const override;
  void rhs_adjoint_form(const DgField& p, DgField& out, Form form) const override;
  double w_inner(const DgField& x, const DgField& y) const override;
  void w_pairing(const DgField& x, DgField& out) const override;
  void w_solve(DgField& pairing) const override;
  double max_wave_speed() const override;
  void gradient_stage(const DgField& Q, const DgField& k, const DgField& gamma,
                      double t, GradientSink& sink) const override;

  double alpha() const { return alpha_; }
  const Vec& speed() const { return a_; }

 private:
  Vec a_;  // K*(N+1) nodal, continuous across faces
  double alpha_;
  TimeSignal inflow_;
  SpaceTimeFn forcing_;
  std::vector<Cholesky> mass_;
};

// ---------------------------------------------------------------------------
// acoustic: e_t - v_x = 0, rho v_t - (lam e)_x = f, lam = c^2 rho
// ---------------------------------------------------------------------------

enum class AcousticGradientForm { automatic, simplified, full };

class AcousticModel final : public Model {
 public:
  // Continuous nodal wave speed.
  AcousticModel(std::shared_ptr<const Mesh1D> mesh,
                std::shared_ptr<const NodalBasis> basis, Vec rho_nodal_table,
                Vec speed_nodal_table, Form form, TimeSignal e_data = nullptr,
                TimeSignal v_data = nullptr, SpaceTimeFn forcing = nullptr);
  // Element-wise constant wave speed (possibly discontinuous across faces).
  static std::unique_ptr<AcousticModel> with_element_speed(
      std::shared_ptr<const Mesh1D> mesh, std::shared_ptr<const NodalBasis> basis,
      Vec rho_nodal_table, Vec speed_per_element, Form form,
      TimeSignal e_data = nullptr, TimeSignal v_data = nullptr,
      SpaceTimeFn forcing = nullptr);

  std::vector<std::string> component_names() const override { return {"e", "v"}; }
  void rhs_state_form(double t, const DgField& q, DgField& out, Form form,
                      bool homogeneous) const override;
  void rhs_adjoint_form(const DgField& p, DgField& out, Form form) const override;
  double w_inner(const DgField& x, const DgField& y) const override;
  void w_pairing(const DgField& x, DgField& out) const override;
  void w_solve(DgField& pairing) const override;
  double max_wave_speed() const override;
  bool gradient_needs_stage_derivative() const override {
    return gradient_form() == AcousticGradientForm::full;
  }
  void gradient_stage(const DgField& Q, const DgField& k, const DgField& gamma,
                      double t, GradientSink& sink) const override;

  // The full form keeps the dG-residual term of the gradient density; it is
  // required under over-integration and redundant under GLL collocation.
  void gradient_stage_with_form(const DgField& Q, const DgField& k,
                                const DgField& gamma, double t,
                                AcousticGradientForm grad_form,
                                GradientSink& sink) const;
  AcousticGradientForm gradient_form() const;

  bool element_speed() const { return element_speed_; }
  const Vec& speed_nodal() const { return c_; }

 private:
  AcousticModel(std::shared_ptr<const Mesh1D> mesh,
                std::shared_ptr<const NodalBasis> basis, Vec rho, Vec c_nodal,
                bool element_speed, Form form, TimeSignal e_data, TimeSignal v_data,
                SpaceTimeFn forcing);

  Vec rho_, c_, lam_, rc_;  // nodal tables; element-constant c replicated
  bool element_speed_ = false;
  TimeSignal e_data_, v_data_;
  SpaceTimeFn forcing_;
  std::vector<Cholesky> mass_e_, mass_v_;
};

// ---------------------------------------------------------------------------
// maxwell (1D TEM): mu H_t = -E_x, eps E_t = -H_x, boundary current J_s
// ---------------------------------------------------------------------------

class MaxwellModel final : public Model {
 public:
  MaxwellModel(std::shared_ptr<const Mesh1D> mesh,
               std::shared_ptr<const NodalBasis> basis, Vec mu_per_element,
               Vec eps_per_element, Form form, TimeSignal js_left = nullptr,
               TimeSignal js_right = nullptr);

  std::vector<std::string> component_names() const override { return {"H", "E"}; }
  void rhs_state_form(double t, const DgField& q, DgField& out, Form form,
                      bool homogeneous) const override;
  void rhs_adjoint_form(const DgField& p, DgField& out, Form form) const override;
  double w_inner(const DgField& x, const DgField& y) const override;
  void w_pairing(const DgField& x, DgField& out) const override;
  void w_solve(DgField& pairing) const override;
  double max_wave_speed() const override;
  void gradient_stage(const DgField& Q, const DgField& k, const DgField& gamma,
                      double t, GradientSink& sink) const override;

  double impedance(int e) const { return z_[e]; }

 private:
  Vec mu_, eps_, z_, y_;  // per element
  TimeSignal js_[2];
  std::vector<Cholesky> mass_h_, mass_e_;
};

// ---------------------------------------------------------------------------
// numerical fluxes and gradient kernels (pure functions of the traces)
// ---------------------------------------------------------------------------

// (au)^dag = a {{u}} + (a/2)(1-alpha) [[u]]; mat_minus[0] = a.
double advection_flux(const FaceState& f, double alpha);
// (ap)^dag = a {{p}} + (a/2)(alpha-1) [[p]].
double advection_adjoint_flux(const FaceState& f, double alpha);
// Ghost trace closing the adjoint flux at the outflow boundary.
double advection_adjoint_outflow_ghost(double j_gamma_prime, double a, double alpha,
                                       double p_minus);

struct AcousticFluxValue {
  double n_dot_v_flux;    // n . v^dag
  double lambda_e_flux;   // (lam e)^dag
};
// Continuous-material upwind fluxes; mat_minus = {rho, c}.
AcousticFluxValue acoustic_flux(const FaceState& f);
// Adjoint (downwind) fluxes on (h, w) traces.
AcousticFluxValue acoustic_adjoint_flux(const FaceState& f);
// Per-side-material upwind fluxes (acoustic limit of the elastic-acoustic
// interface states); reduces to acoustic_flux for equal materials.
AcousticFluxValue acoustic_flux_discontinuous(const FaceState& f);

struct MaxwellFluxValue {
  double h_equation_term;  // scalar reduction of -n x (E^dag - E^-)
  double e_equation_term;  // scalar reduction of +n x (H^dag - H^-)
};
// mat_minus = {Z, Y} per side; components (H, E) or adjoint (G, F).
MaxwellFluxValue maxwell_flux(const FaceState& f);
struct MaxwellAdjointFluxValue {
  double f_flux;  // F^dag
  double g_flux;  // G^dag
};
MaxwellAdjointFluxValue maxwell_adjoint_flux(const FaceState& f);

// Gradient kernels. Shared interior face value for continuous a:
double advection_face_kernel(const FaceState& u, const FaceState& p, double alpha);
// Inflow-boundary kernel (nonzero for all alpha in [0,1]).
double advection_inflow_kernel(double u_minus, double u_inflow, double p_minus,
                               double alpha);
// One-sided acoustic kernel weighting the minus-side speed perturbation;
// state carries (e, v) and mats {rho, c}; adj carries (h, w).
double acoustic_side_kernel(const FaceState& state, const FaceState& adj, bool full_form);
// Boundary-current kernel: n x F + (1/Y) n x (n x G) reduced to a scalar.
double maxwell_boundary_kernel(double gamma_g, double gamma_f, double n_minus, double z);

}  // namespace adjdg

#endif
