#include "adjdg/nodal_basis.hpp"

#include <algorithm>
#include <cmath>

namespace adjdg {

namespace {

// P_n(x) and P_{n-1}(x) by the three-term recurrence.
void legendre_pair(int n, double x, double& pn, double& pnm1) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    pn = 1.0;
    pnm1 = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  pnm1 = p0;
}

Vec bary_weights(const Vec& x) {
  const int n = static_cast<int>(x.size());
  Vec w(n, 1.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (k != j) w[j] /= (x[j] - x[k]);
  return w;
}

}  // namespace

void gll_rule(int order, Vec& nodes, Vec& weights) {
  require(order >= 1, "gll_rule: order >= 1 required");
  const int n = order + 1;
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Chebyshev-Gauss-Lobatto initial guess, Newton iteration on
  // x P_N(x) - P_{N-1}(x) (proportional to (1-x^2) P_N'(x)).
  for (int i = 0; i < n; ++i) nodes[i] = -std::cos(M_PI * i / order);
  const double tol = 1e-14;
  const int max_iter = 100;
  for (int it = 0; it < max_iter; ++it) {
    double delta = 0.0;
    for (int i = 0; i < n; ++i) {
      double pn, pnm1;
      legendre_pair(order, nodes[i], pn, pnm1);
      const double dx = (nodes[i] * pn - pnm1) / (n * pn);
      nodes[i] -= dx;
      delta = std::max(delta, std::abs(dx));
    }
    if (delta < tol) break;
  }
  nodes.front() = -1.0;
  nodes.back() = 1.0;
  for (int i = 0; i < n; ++i) {
    double pn, pnm1;
    legendre_pair(order, nodes[i], pn, pnm1);
    weights[i] = 2.0 / (order * n * pn * pn);
  }
}

void gauss_rule(int n_points, Vec& nodes, Vec& weights) {
  require(n_points >= 1, "gauss_rule: n_points >= 1 required");
  nodes.assign(n_points, 0.0);
  weights.assign(n_points, 0.0);
  for (int i = 0; i < n_points; ++i)
    nodes[i] = -std::cos(M_PI * (i + 0.75) / (n_points + 0.5));
  const double tol = 1e-15;
  for (int it = 0; it < 100; ++it) {
    double delta = 0.0;
    for (int i = 0; i < n_points; ++i) {
      double pn, pnm1;
      legendre_pair(n_points, nodes[i], pn, pnm1);
      const double dp = n_points * (nodes[i] * pn - pnm1) / (nodes[i] * nodes[i] - 1.0);
      const double dx = pn / dp;
      nodes[i] -= dx;
      delta = std::max(delta, std::abs(dx));
    }
    if (delta < tol) break;
  }
  for (int i = 0; i < n_points; ++i) {
    double pn, pnm1;
    legendre_pair(n_points, nodes[i], pn, pnm1);
    const double dp = n_points * (nodes[i] * pn - pnm1) / (nodes[i] * nodes[i] - 1.0);
    weights[i] = 2.0 / ((1.0 - nodes[i] * nodes[i]) * dp * dp);
  }
}

Mat lagrange_diff_matrix(const Vec& nodes) {
  const int n = static_cast<int>(nodes.size());
  const Vec bw = bary_weights(nodes);
  Mat d(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = (bw[j] / bw[i]) / (nodes[i] - nodes[j]);
      diag -= d(i, j);
    }
    d(i, i) = diag;
  }
  return d;
}

Mat lagrange_interp_matrix(const Vec& nodes, const Vec& targets) {
  const int n = static_cast<int>(nodes.size());
  const int m = static_cast<int>(targets.size());
  const Vec bw = bary_weights(nodes);
  Mat l(m, n);
  for (int q = 0; q < m; ++q) {
    int hit = -1;
    for (int j = 0; j < n; ++j)
      if (std::abs(targets[q] - nodes[j]) < 1e-14) hit = j;
    if (hit >= 0) {
      l(q, hit) = 1.0;
      continue;
    }
    double denom = 0.0;
    for (int j = 0; j < n; ++j) denom += bw[j] / (targets[q] - nodes[j]);
    for (int j = 0; j < n; ++j) l(q, j) = (bw[j] / (targets[q] - nodes[j])) / denom;
  }
  return l;
}

NodalBasis build_basis(int order, QuadMode mode, int n_over_points) {
  require(order >= 1, "build_basis: order >= 1 required");
  NodalBasis b;
  b.order = order;
  b.quad_mode = mode;
  gll_rule(order, b.nodes, b.weights);
  b.diff = lagrange_diff_matrix(b.nodes);
  if (mode == QuadMode::collocation) {
    b.quad_nodes = b.nodes;
    b.quad_weights = b.weights;
    b.interp = Mat::identity(order + 1);
  } else {
    int m = n_over_points;
    if (m == 0) m = (3 * (order + 1) + 1) / 2;
    require(m >= order + 1, "build_basis: over-integration needs M >= order+1");
    gauss_rule(m, b.quad_nodes, b.quad_weights);
    b.interp = lagrange_interp_matrix(b.nodes, b.quad_nodes);
  }
  const int n = order + 1;
  const int m = b.n_quad();
  b.pairing = Mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int q = 0; q < m; ++q)
        s += b.quad_weights[q] * b.interp(q, i) * b.interp(q, j);
      b.pairing(i, j) = s;
    }
  return b;
}

Vec differentiate(const NodalBasis& basis, std::span<const double> values) {
  require(static_cast<int>(values.size()) == basis.n_nodes(),
          "differentiate: length mismatch");
  return matvec(basis.diff, values);
}

Vec to_quad(const NodalBasis& basis, std::span<const double> nodal) {
  require(static_cast<int>(nodal.size()) == basis.n_nodes(),
          "to_quad: length mismatch");
  if (basis.quad_mode == QuadMode::collocation) return Vec(nodal.begin(), nodal.end());
  return matvec(basis.interp, nodal);
}

double quadrature_inner_product(const NodalBasis& basis,
                                std::span<const double> f_values,
                                std::span<const double> g_values,
                                std::span<const double> pointwise_weight) {
  const int m = basis.n_quad();
  require(static_cast<int>(f_values.size()) == m &&
              static_cast<int>(g_values.size()) == m &&
              static_cast<int>(pointwise_weight.size()) == m,
          "quadrature_inner_product: length mismatch");
  double s = 0.0;
  for (int q = 0; q < m; ++q) {
    require(basis.quad_weights[q] > 0.0,
            "quadrature_inner_product: nonpositive quadrature weight");
    s += basis.quad_weights[q] * f_values[q] * g_values[q] * pointwise_weight[q];
  }
  return s;
}

Vec pair_from_quad(const NodalBasis& basis, std::span<const double> y_at_quad) {
  require(static_cast<int>(y_at_quad.size()) == basis.n_quad(),
          "pair_from_quad: length mismatch");
  Vec wy(basis.n_quad());
  for (int q = 0; q < basis.n_quad(); ++q) wy[q] = basis.quad_weights[q] * y_at_quad[q];
  return mat_tvec(basis.interp, wy);
}

Mat weighted_mass(const NodalBasis& basis, std::span<const double> weight_nodal,
                  double jacobian) {
  const int n = basis.n_nodes();
  const int m = basis.n_quad();
  const Vec wq = to_quad(basis, weight_nodal);
  Mat mass(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int q = 0; q < m; ++q)
        s += basis.quad_weights[q] * wq[q] * basis.interp(q, i) * basis.interp(q, j);
      mass(i, j) = jacobian * s;
    }
  return mass;
}

}  // namespace adjdg
