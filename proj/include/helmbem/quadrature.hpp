#pragma once

#include <array>
#include <stdexcept>
#include <vector>

namespace helmbem {

/// Quadrature node on the reference triangle {xi >= 0, eta >= 0, xi + eta <= 1}.
struct TriQuadPoint {
  std::array<double, 3> bary; // (1-xi-eta, xi, eta)
  double weight;              // reference-triangle weights, sum = 1/2

  double xi() const { return bary[1]; }
  double eta() const { return bary[2]; }
};

/// Symmetric positive-weight rule, exact for polynomials up to `degree`.
struct TriangleQuadrature {
  int degree = 0;
  std::vector<TriQuadPoint> points;
};

/// Returns a symmetric rule exact to at least the requested degree.
/// Supported range is 2..14; throws std::invalid_argument outside it.
TriangleQuadrature gauss_rule(int degree);

/// Gauss-Legendre nodes/weights on [0,1] (weights sum to 1).
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Rule for the reference triangle refined into 4^depth congruent
/// sub-triangles, with `base` applied on each. Weights still sum to 1/2.
TriangleQuadrature subdivided_rule(const TriangleQuadrature& base, int depth);

/// Tensor-Gauss rule with the radial collapse placed at one node of the
/// six-node reference element (local node 0..5). Integrates 1/r-type
/// integrands centred at that node accurately; weights sum to 1/2.
TriangleQuadrature duffy_rule_at_node(int local_node, int points_per_dir);

} // namespace helmbem
