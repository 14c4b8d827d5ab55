#ifndef ADJDG_DG_FIELD_HPP
#define ADJDG_DG_FIELD_HPP

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "adjdg/mesh.hpp"
#include "adjdg/nodal_basis.hpp"

namespace adjdg {

/// Element-by-element nodal coefficients, one block per solution component.
struct DgField {
  std::shared_ptr<const Mesh1D> mesh;
  std::shared_ptr<const NodalBasis> basis;
  std::vector<std::string> names;
  std::vector<Vec> blocks;  // each of size K*(N+1), row-major in (element, node)

  int n_components() const { return static_cast<int>(blocks.size()); }
  int n_elements() const { return mesh->n_elements(); }
  int n_nodes() const { return basis->n_nodes(); }
  int block_size() const { return n_elements() * n_nodes(); }
  int size() const { return n_components() * block_size(); }

  double& at(int c, int e, int i) { return blocks[c][e * n_nodes() + i]; }
  double at(int c, int e, int i) const { return blocks[c][e * n_nodes() + i]; }

  std::span<double> element(int c, int e) {
    return {blocks[c].data() + static_cast<size_t>(e) * n_nodes(),
            static_cast<size_t>(n_nodes())};
  }
  std::span<const double> element(int c, int e) const {
    return {blocks[c].data() + static_cast<size_t>(e) * n_nodes(),
            static_cast<size_t>(n_nodes())};
  }

  double node_x(int e, int i) const {
    return mesh->breaks[e] + 0.5 * (basis->nodes[i] + 1.0) * mesh->width(e);
  }

  void set_zero();
  void axpy(double a, const DgField& x);  // this += a*x
  void scale(double a);
};

DgField make_field(std::shared_ptr<const Mesh1D> mesh,
                   std::shared_ptr<const NodalBasis> basis,
                   std::vector<std::string> names);

// Nodal interpolation of the given functions at the mapped GLL points.
DgField sample(std::shared_ptr<const Mesh1D> mesh,
               std::shared_ptr<const NodalBasis> basis,
               std::vector<std::string> names,
               const std::vector<std::function<double(double)>>& fns);

// Jacobian-scaled quadrature inner product summed over elements and
// components; `weight` may be empty (unit weight) or a one-component field.
double broken_inner_product(const DgField& a, const DgField& b);
double broken_inner_product(const DgField& a, const DgField& b, const DgField& weight);

/// Two-sided trace data at one face, from the viewpoint of one element.
/// At boundary faces the plus side holds the model's ghost state.
struct FaceState {
  int n_comp = 1;
  std::array<double, 2> minus{0.0, 0.0};
  std::array<double, 2> plus{0.0, 0.0};
  double n_minus = 1.0;
  std::array<double, 2> mat_minus{0.0, 0.0};
  std::array<double, 2> mat_plus{0.0, 0.0};
};

inline double jump(double um, double up, double nm) { return um * nm - up * nm; }
inline double mean(double um, double up) { return 0.5 * (um + up); }
inline double diff(double um, double up) { return um - up; }

inline double jump(const FaceState& f, int c) { return jump(f.minus[c], f.plus[c], f.n_minus); }
inline double mean(const FaceState& f, int c) { return mean(f.minus[c], f.plus[c]); }
inline double diff(const FaceState& f, int c) { return diff(f.minus[c], f.plus[c]); }

}  // namespace adjdg

#endif
