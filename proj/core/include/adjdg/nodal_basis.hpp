#ifndef ADJDG_NODAL_BASIS_HPP
#define ADJDG_NODAL_BASIS_HPP

#include <span>

#include "adjdg/linalg.hpp"

namespace adjdg {

enum class QuadMode { collocation, over_integration };

/// Reference-element data on [-1,1]: Gauss-Lobatto-Legendre nodes and
/// weights, the nodal differentiation operator, and the active quadrature
/// rule (the GLL rule itself, or an interior Gauss rule with an
/// interpolation operator onto its points).
struct NodalBasis {
  int order = 0;
  QuadMode quad_mode = QuadMode::collocation;
  Vec nodes;         // N+1 GLL points, increasing, nodes[0] = -1, nodes[N] = +1
  Vec weights;       // N+1 GLL weights
  Mat diff;          // (N+1)x(N+1) nodal differentiation operator D
  Vec quad_nodes;    // active quadrature points (== nodes when collocating)
  Vec quad_weights;  // active quadrature weights
  Mat interp;        // n_quad x (N+1) interpolation onto quad_nodes
  Mat pairing;       // interp^T diag(quad_weights) interp, Jacobian-free

  int n_nodes() const { return order + 1; }
  int n_quad() const { return static_cast<int>(quad_nodes.size()); }
};

// n_over_points = 0 selects the default M = ceil(3(N+1)/2) Gauss rule when
// over-integrating. Rejects order < 1 and M < order+1.
NodalBasis build_basis(int order, QuadMode mode, int n_over_points = 0);

// Derivative of the degree-N interpolant at the nodes.
Vec differentiate(const NodalBasis& basis, std::span<const double> values);

// Nodal values -> values at the active quadrature points.
Vec to_quad(const NodalBasis& basis, std::span<const double> nodal);

// sum_i qw_i f_i g_i w_i over the active quadrature point set.
double quadrature_inner_product(const NodalBasis& basis,
                                std::span<const double> f_values,
                                std::span<const double> g_values,
                                std::span<const double> pointwise_weight);

// Pairing of quadrature-point values against every nodal test function:
// result_j = sum_q qw_q y_q l_j(x_q).
Vec pair_from_quad(const NodalBasis& basis, std::span<const double> y_at_quad);

// J * interp^T diag(qw * interp(weight)) interp; SPD for positive weights.
Mat weighted_mass(const NodalBasis& basis, std::span<const double> weight_nodal,
                  double jacobian);

// Free-standing rules (used by tests as independent oracles as well).
void gll_rule(int order, Vec& nodes, Vec& weights);
void gauss_rule(int n_points, Vec& nodes, Vec& weights);
Mat lagrange_diff_matrix(const Vec& nodes);
Mat lagrange_interp_matrix(const Vec& nodes, const Vec& targets);

}  // namespace adjdg

#endif
