#include "helmbem/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace helmbem {

namespace {

void append_orbit3(std::vector<TriQuadPoint>& pts, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  pts.push_back({{b, a, a}, w});
  pts.push_back({{a, b, a}, w});
  pts.push_back({{a, a, b}, w});
}

void append_orbit6(std::vector<TriQuadPoint>& pts, double a, double b, double w) {
  const double c = 1.0 - a - b;
  pts.push_back({{a, b, c}, w});
  pts.push_back({{a, c, b}, w});
  pts.push_back({{b, a, c}, w});
  pts.push_back({{b, c, a}, w});
  pts.push_back({{c, a, b}, w});
  pts.push_back({{c, b, a}, w});
}

TriangleQuadrature rule_deg2() {
  TriangleQuadrature q;
  q.degree = 2;
  append_orbit3(q.points, 1.0 / 6.0, 1.0 / 6.0);
  return q;
}

TriangleQuadrature rule_deg4() {
  TriangleQuadrature q;
  q.degree = 4;
  append_orbit3(q.points, 0.445948490915965, 0.223381589678011 / 2.0);
  append_orbit3(q.points, 0.091576213509771, 0.109951743655322 / 2.0);
  return q;
}

TriangleQuadrature rule_deg5() {
  TriangleQuadrature q;
  q.degree = 5;
  q.points.push_back({{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 0.225 / 2.0});
  append_orbit3(q.points, 0.470142064105115, 0.132394152788506 / 2.0);
  append_orbit3(q.points, 0.101286507323456, 0.125939180544827 / 2.0);
  return q;
}

// 16-point degree-8 rule, orbit parameters tightened against the closed-form
// monomial integrals (max relative defect ~1.5e-15).
TriangleQuadrature rule_deg8() {
  TriangleQuadrature q;
  q.degree = 8;
  q.points.push_back({{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 0.14431560767775387 / 2.0});
  append_orbit3(q.points, 0.4592925882927004, 0.09509163426730456 / 2.0);
  append_orbit3(q.points, 0.17056930775173634, 0.10321737053471905 / 2.0);
  append_orbit3(q.points, 0.050547228317032046, 0.03245849762320152 / 2.0);
  append_orbit6(q.points, 0.26311282963471394, 0.728492392955357, 0.027230314174428463 / 2.0);
  return q;
}

// Golub-Welsch on the symmetric tridiagonal recurrence matrix.
void golub_welsch(const std::vector<double>& diag, const std::vector<double>& offdiag,
                  double mu0, std::vector<double>& nodes, std::vector<double>& weights) {
  const int n = static_cast<int>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) J(i, i) = diag[i];
  for (int i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = offdiag[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
}

} // namespace

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  std::vector<double> d(n, 0.0), e(n - 1);
  for (int j = 1; j < n; ++j) e[j - 1] = std::sqrt(j * j / (4.0 * j * j - 1.0));
  golub_welsch(d, e, 2.0, nodes, weights);
  for (int i = 0; i < n; ++i) {
    nodes[i] = 0.5 * (nodes[i] + 1.0);
    weights[i] *= 0.5;
  }
}

namespace {

// Gauss-Jacobi on [0,1] with weight (1-t); weights sum to 1/2.
void gauss_jacobi10_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  std::vector<double> d(n), e(n - 1);
  for (int j = 0; j < n; ++j) d[j] = -1.0 / ((2.0 * j + 1.0) * (2.0 * j + 3.0));
  for (int j = 1; j < n; ++j) e[j - 1] = std::sqrt(j * (j + 1.0)) / (2.0 * j + 1.0);
  golub_welsch(d, e, 2.0, nodes, weights);
  for (int i = 0; i < n; ++i) {
    nodes[i] = 0.5 * (nodes[i] + 1.0);
    weights[i] *= 0.25;
  }
}

// Conical-product rule exact to degree 2n-1, symmetrised over the full
// triangle symmetry group so the public rule keeps the symmetry contract.
TriangleQuadrature symmetrised_conical(int degree) {
  const int n = (degree + 2) / 2; // 2n-1 >= degree
  std::vector<double> s, ws, t, wt;
  gauss_legendre_01(n, s, ws);
  gauss_jacobi10_01(n, t, wt);

  std::vector<TriQuadPoint> base;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double xi = s[i] * (1.0 - t[j]);
      const double eta = t[j];
      base.push_back({{1.0 - xi - eta, xi, eta}, ws[i] * wt[j]});
    }

  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  TriangleQuadrature q;
  q.degree = 2 * n - 1;
  for (const auto& p : base)
    for (const auto& pm : perms)
      q.points.push_back({{p.bary[pm[0]], p.bary[pm[1]], p.bary[pm[2]]}, p.weight / 6.0});
  return q;
}

} // namespace

TriangleQuadrature gauss_rule(int degree) {
  if (degree < 2 || degree > 14)
    throw std::invalid_argument("gauss_rule: supported degrees are 2..14, got " +
                                std::to_string(degree));
  if (degree <= 2) return rule_deg2();
  if (degree <= 4) return rule_deg4();
  if (degree <= 5) return rule_deg5();
  if (degree <= 8) return rule_deg8();
  return symmetrised_conical(degree);
}

TriangleQuadrature subdivided_rule(const TriangleQuadrature& base, int depth) {
  if (depth <= 0) return base;

  struct Tri {
    // vertices in (xi, eta)
    std::array<std::array<double, 2>, 3> v;
  };
  std::vector<Tri> tris = {{{{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}}}};
  for (int level = 0; level < depth; ++level) {
    std::vector<Tri> next;
    next.reserve(4 * tris.size());
    for (const auto& t : tris) {
      auto mid = [&](int a, int b) {
        return std::array<double, 2>{0.5 * (t.v[a][0] + t.v[b][0]),
                                     0.5 * (t.v[a][1] + t.v[b][1])};
      };
      const auto m01 = mid(0, 1), m12 = mid(1, 2), m20 = mid(2, 0);
      next.push_back({{t.v[0], m01, m20}});
      next.push_back({{m01, t.v[1], m12}});
      next.push_back({{m20, m12, t.v[2]}});
      next.push_back({{m01, m12, m20}});
    }
    tris = std::move(next);
  }

  const double scale = 1.0 / std::pow(4.0, depth); // area ratio per sub-triangle
  TriangleQuadrature out;
  out.degree = base.degree;
  out.points.reserve(tris.size() * base.points.size());
  for (const auto& t : tris) {
    for (const auto& p : base.points) {
      const double xi = t.v[0][0] * p.bary[0] + t.v[1][0] * p.bary[1] + t.v[2][0] * p.bary[2];
      const double eta = t.v[0][1] * p.bary[0] + t.v[1][1] * p.bary[1] + t.v[2][1] * p.bary[2];
      out.points.push_back({{1.0 - xi - eta, xi, eta}, p.weight * scale});
    }
  }
  return out;
}

TriangleQuadrature duffy_rule_at_node(int local_node, int points_per_dir) {
  static const double node_xi[6] = {0.0, 1.0, 0.0, 0.5, 0.5, 0.0};
  static const double node_eta[6] = {0.0, 0.0, 1.0, 0.0, 0.5, 0.5};
  if (local_node < 0 || local_node > 5)
    throw std::invalid_argument("duffy_rule_at_node: local node must be 0..5");

  const std::array<double, 2> apex{node_xi[local_node], node_eta[local_node]};
  const std::array<std::array<double, 2>, 3> corner{{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};

  std::vector<double> u, wu;
  gauss_legendre_01(points_per_dir, u, wu);

  TriangleQuadrature out;
  out.degree = 2 * points_per_dir - 1;
  // fan the triangle around the apex; degenerate slivers drop out
  for (int c = 0; c < 3; ++c) {
    const auto& b = corner[c];
    const auto& cc = corner[(c + 1) % 3];
    const double e1x = b[0] - apex[0], e1y = b[1] - apex[1];
    const double e2x = cc[0] - apex[0], e2y = cc[1] - apex[1];
    const double area2 = e1x * e2y - e1y * e2x; // signed, = 2*area
    if (std::abs(area2) < 1e-14) continue;
    for (int i = 0; i < points_per_dir; ++i) {
      for (int j = 0; j < points_per_dir; ++j) {
        const double uu = u[i], ww = u[j];
        const double xi = apex[0] + uu * ((1.0 - ww) * e1x + ww * e2x);
        const double eta = apex[1] + uu * ((1.0 - ww) * e1y + ww * e2y);
        out.points.push_back({{1.0 - xi - eta, xi, eta},
                              std::abs(area2) * uu * wu[i] * wu[j]});
      }
    }
  }
  return out;
}

} // namespace helmbem
