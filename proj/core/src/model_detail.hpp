#ifndef ADJDG_MODEL_DETAIL_HPP
#define ADJDG_MODEL_DETAIL_HPP

#include <vector>

#include "adjdg/dg_field.hpp"

namespace adjdg::detail {

// Faces in assembly order; element id -1 marks a domain boundary side.
// Periodic meshes wrap face 0 and have no face K.
struct AsmFace {
  int left = -1;
  int right = -1;
};

inline std::vector<AsmFace> assembly_faces(const Mesh1D& mesh) {
  const int k = mesh.n_elements();
  std::vector<AsmFace> out;
  out.reserve(k + 1);
  if (mesh.periodic()) {
    out.push_back({k - 1, 0});
    for (int f = 1; f < k; ++f) out.push_back({f - 1, f});
  } else {
    out.push_back({-1, 0});
    for (int f = 1; f < k; ++f) out.push_back({f - 1, f});
    out.push_back({k - 1, -1});
  }
  return out;
}

// One element's view of a face.
struct Side {
  int elem;
  int node;       // 0 or N
  double n;       // outward normal
  int other;      // neighbouring element, -1 at the boundary
  int other_node;
};

inline std::array<Side, 2> interior_sides(const AsmFace& f, int n_order) {
  return {Side{f.left, n_order, +1.0, f.right, 0},
          Side{f.right, 0, -1.0, f.left, n_order}};
}

// nodal pairing helpers (Jacobian-free)
inline Vec pair_apply(const NodalBasis& b, std::span<const double> x) {
  return matvec(b.pairing, x);
}
inline Vec pair_diff(const NodalBasis& b, std::span<const double> x) {
  return matvec(b.pairing, matvec(b.diff, x));
}
inline Vec diff_t_pair(const NodalBasis& b, std::span<const double> x) {
  return mat_tvec(b.diff, matvec(b.pairing, x));
}

inline void solve_blocks(const std::vector<Cholesky>& mass, Vec& block, int n_nodes) {
  for (size_t e = 0; e < mass.size(); ++e)
    mass[e].solve_inplace({block.data() + e * n_nodes, static_cast<size_t>(n_nodes)});
}

inline std::vector<Cholesky> build_masses(const Mesh1D& mesh, const NodalBasis& basis,
                                          const Vec& weight_table) {
  std::vector<Cholesky> out;
  out.reserve(mesh.n_elements());
  const int nn = basis.n_nodes();
  for (int e = 0; e < mesh.n_elements(); ++e) {
    std::span<const double> w{weight_table.data() + static_cast<size_t>(e) * nn,
                              static_cast<size_t>(nn)};
    out.emplace_back(weighted_mass(basis, w, mesh.jacobian(e)));
  }
  return out;
}

inline Vec unit_table(const Mesh1D& mesh, const NodalBasis& basis) {
  return Vec(static_cast<size_t>(mesh.n_elements()) * basis.n_nodes(), 1.0);
}

// J * pairing of a space-time function sampled at the physical quadrature points.
inline Vec forcing_pairing(const Mesh1D& mesh, const NodalBasis& basis, int elem,
                           const std::function<double(double, double)>& f, double t) {
  Vec fq(basis.n_quad());
  for (int q = 0; q < basis.n_quad(); ++q) {
    const double x =
        mesh.breaks[elem] + 0.5 * (basis.quad_nodes[q] + 1.0) * mesh.width(elem);
    fq[q] = f(x, t);
  }
  Vec y = pair_from_quad(basis, fq);
  for (double& v : y) v *= mesh.jacobian(elem);
  return y;
}

}  // namespace adjdg::detail

#endif
