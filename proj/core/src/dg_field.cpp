#include "adjdg/dg_field.hpp"

#include <algorithm>

namespace adjdg {

void DgField::set_zero() {
  for (auto& b : blocks) std::fill(b.begin(), b.end(), 0.0);
}

void DgField::axpy(double a, const DgField& x) {
  require(x.n_components() == n_components() && x.block_size() == block_size(),
          "DgField::axpy: shape mismatch");
  for (int c = 0; c < n_components(); ++c)
    for (size_t k = 0; k < blocks[c].size(); ++k) blocks[c][k] += a * x.blocks[c][k];
}

void DgField::scale(double a) {
  for (auto& b : blocks)
    for (double& v : b) v *= a;
}

DgField make_field(std::shared_ptr<const Mesh1D> mesh,
                   std::shared_ptr<const NodalBasis> basis,
                   std::vector<std::string> names) {
  DgField f;
  f.mesh = std::move(mesh);
  f.basis = std::move(basis);
  f.names = std::move(names);
  f.blocks.assign(f.names.size(),
                  Vec(static_cast<size_t>(f.mesh->n_elements()) * f.basis->n_nodes(), 0.0));
  return f;
}

DgField sample(std::shared_ptr<const Mesh1D> mesh,
               std::shared_ptr<const NodalBasis> basis,
               std::vector<std::string> names,
               const std::vector<std::function<double(double)>>& fns) {
  require(fns.size() == names.size(), "sample: one function per component required");
  DgField f = make_field(std::move(mesh), std::move(basis), std::move(names));
  for (int c = 0; c < f.n_components(); ++c)
    for (int e = 0; e < f.n_elements(); ++e)
      for (int i = 0; i < f.n_nodes(); ++i) f.at(c, e, i) = fns[c](f.node_x(e, i));
  return f;
}

namespace {

double broken_ip_impl(const DgField& a, const DgField& b, const DgField* weight) {
  require(a.n_components() == b.n_components() && a.block_size() == b.block_size(),
          "broken_inner_product: shape mismatch");
  if (weight != nullptr)
    require(weight->n_components() == 1 && weight->block_size() == a.block_size(),
            "broken_inner_product: weight shape mismatch");
  const NodalBasis& basis = *a.basis;
  double total = 0.0;
  Vec unit(basis.n_quad(), 1.0);
  for (int e = 0; e < a.n_elements(); ++e) {
    const double jac = a.mesh->jacobian(e);
    Vec wq = weight ? to_quad(basis, weight->element(0, e)) : unit;
    for (int c = 0; c < a.n_components(); ++c) {
      const Vec fa = to_quad(basis, a.element(c, e));
      const Vec fb = to_quad(basis, b.element(c, e));
      total += jac * quadrature_inner_product(basis, fa, fb, wq);
    }
  }
  return total;
}

}  // namespace

double broken_inner_product(const DgField& a, const DgField& b) {
  return broken_ip_impl(a, b, nullptr);
}

double broken_inner_product(const DgField& a, const DgField& b, const DgField& weight) {
  return broken_ip_impl(a, b, &weight);
}

}  // namespace adjdg
