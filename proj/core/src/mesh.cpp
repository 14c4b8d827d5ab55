#include "adjdg/mesh.hpp"

namespace adjdg {

std::vector<FaceRec> Mesh1D::faces() const {
  const int k = n_elements();
  std::vector<FaceRec> out(k + 1);
  for (int f = 0; f <= k; ++f) {
    out[f].left = (f == 0) ? (periodic() ? k - 1 : -1) : f - 1;
    out[f].right = (f == k) ? (periodic() ? 0 : -1) : f;
  }
  return out;
}

Mesh1D uniform_mesh(double x_left, double x_right, int n_elements, BoundaryKind kind) {
  require(n_elements >= 1, "uniform_mesh: element count >= 1 required");
  require(x_left < x_right, "uniform_mesh: inverted interval");
  Mesh1D m;
  m.x_left = x_left;
  m.x_right = x_right;
  m.boundary = kind;
  m.breaks.resize(n_elements + 1);
  const double h = (x_right - x_left) / n_elements;
  for (int i = 0; i <= n_elements; ++i) m.breaks[i] = x_left + i * h;
  m.breaks.front() = x_left;
  m.breaks.back() = x_right;
  return m;
}

Mesh1D mesh_from_breaks(Vec breaks, BoundaryKind kind) {
  require(breaks.size() >= 2, "mesh_from_breaks: need at least two breaks");
  for (size_t i = 0; i + 1 < breaks.size(); ++i)
    require(breaks[i] < breaks[i + 1], "mesh_from_breaks: breaks not increasing");
  Mesh1D m;
  m.x_left = breaks.front();
  m.x_right = breaks.back();
  m.breaks = std::move(breaks);
  m.boundary = kind;
  return m;
}

Mesh1D bisect(const Mesh1D& mesh) {
  Vec b;
  b.reserve(2 * mesh.breaks.size() - 1);
  for (size_t i = 0; i + 1 < mesh.breaks.size(); ++i) {
    b.push_back(mesh.breaks[i]);
    b.push_back(0.5 * (mesh.breaks[i] + mesh.breaks[i + 1]));
  }
  b.push_back(mesh.breaks.back());
  return mesh_from_breaks(std::move(b), mesh.boundary);
}

std::array<double, 2> outward_normals(const Mesh1D& mesh, int element) {
  require(element >= 0 && element < mesh.n_elements(),
          "outward_normals: invalid element index");
  return {-1.0, 1.0};
}

}  // namespace adjdg
