#ifndef ADJDG_MESH_HPP
#define ADJDG_MESH_HPP

#include <array>
#include <vector>

#include "adjdg/linalg.hpp"

namespace adjdg {

enum class BoundaryKind { inflow_dirichlet, traction_like, periodic };

// Face f sits at breaks[f]; left/right are element indices, -1 marks the
// domain boundary side. Under periodic tagging face 0 and face K describe
// the same identification.
struct FaceRec {
  int left = -1;
  int right = -1;
};

struct Mesh1D {
  double x_left = 0.0;
  double x_right = 1.0;
  Vec breaks;  // K+1 strictly increasing coordinates
  BoundaryKind boundary = BoundaryKind::periodic;

  int n_elements() const { return static_cast<int>(breaks.size()) - 1; }
  bool periodic() const { return boundary == BoundaryKind::periodic; }
  double width(int e) const { return breaks[e + 1] - breaks[e]; }
  double jacobian(int e) const { return 0.5 * width(e); }

  std::vector<FaceRec> faces() const;
};

Mesh1D uniform_mesh(double x_left, double x_right, int n_elements, BoundaryKind kind);
Mesh1D mesh_from_breaks(Vec breaks, BoundaryKind kind);

// Bisect every element; endpoints are preserved exactly.
Mesh1D bisect(const Mesh1D& mesh);

// Outward normals of one element: always (-1, +1) in 1D.
std::array<double, 2> outward_normals(const Mesh1D& mesh, int element);

}  // namespace adjdg

#endif
