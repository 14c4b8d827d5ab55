#ifndef ADJDG_TEST_HELPERS_HPP
#define ADJDG_TEST_HELPERS_HPP

#include <cmath>
#include <memory>

#include "adjdg/models.hpp"
#include "adjdg/objective.hpp"

namespace adjdg::testing {

inline std::shared_ptr<const Mesh1D> unit_mesh(int k, BoundaryKind b) {
  return std::make_shared<const Mesh1D>(uniform_mesh(0.0, 1.0, k, b));
}

inline std::shared_ptr<const NodalBasis> make_basis(int n, QuadMode m) {
  return std::make_shared<const NodalBasis>(build_basis(n, m));
}

inline Vec table_of(const Mesh1D& mesh, const NodalBasis& basis,
                    const std::function<double(double)>& fn) {
  const int nn = basis.n_nodes();
  Vec t(static_cast<size_t>(mesh.n_elements()) * nn);
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int i = 0; i < nn; ++i)
      t[e * nn + i] =
          fn(mesh.breaks[e] + 0.5 * (basis.nodes[i] + 1.0) * mesh.width(e));
  return t;
}

inline double smooth_speed(double x) { return 1.0 + 0.3 * std::sin(2.0 * M_PI * x); }
inline double smooth_rho(double x) { return 1.0 + 0.2 * std::cos(2.0 * M_PI * x); }
inline double smooth_c(double x) { return 1.2 + 0.25 * std::sin(2.0 * M_PI * x); }

inline std::unique_ptr<AdvectionModel> make_advection(
    int k, int n, QuadMode qm = QuadMode::collocation,
    BoundaryKind bc = BoundaryKind::inflow_dirichlet, double alpha = 0.0,
    Form form = Form::strong, TimeSignal inflow = nullptr) {
  auto mesh = unit_mesh(k, bc);
  auto basis = make_basis(n, qm);
  return std::make_unique<AdvectionModel>(mesh, basis,
                                          table_of(*mesh, *basis, smooth_speed), alpha,
                                          form, std::move(inflow));
}

inline std::unique_ptr<AcousticModel> make_acoustic(
    int k, int n, QuadMode qm = QuadMode::collocation,
    BoundaryKind bc = BoundaryKind::periodic, Form form = Form::strong,
    TimeSignal e_bc = nullptr, TimeSignal v_bc = nullptr) {
  auto mesh = unit_mesh(k, bc);
  auto basis = make_basis(n, qm);
  return std::make_unique<AcousticModel>(mesh, basis,
                                         table_of(*mesh, *basis, smooth_rho),
                                         table_of(*mesh, *basis, smooth_c), form,
                                         std::move(e_bc), std::move(v_bc));
}

inline std::unique_ptr<MaxwellModel> make_maxwell(
    int k, int n, QuadMode qm = QuadMode::collocation,
    BoundaryKind bc = BoundaryKind::traction_like, Form form = Form::strong,
    TimeSignal jsl = nullptr, TimeSignal jsr = nullptr, bool jumpy_materials = true) {
  auto mesh = unit_mesh(k, bc);
  auto basis = make_basis(n, qm);
  Vec mu(k, 1.0), eps(k, 1.0);
  if (jumpy_materials)
    for (int e = k / 2; e < k; ++e) {
      mu[e] = 2.0;
      eps[e] = 0.5;
    }
  return std::make_unique<MaxwellModel>(mesh, basis, mu, eps, form, std::move(jsl),
                                        std::move(jsr));
}

}  // namespace adjdg::testing

#endif
