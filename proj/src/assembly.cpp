#include "helmbem/assembly.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include "helmbem/kernels.hpp"
#include "helmbem/parallel.hpp"
#include "helmbem/quadrature.hpp"

namespace helmbem {

namespace {

struct QuadPointData {
  Vec3 x;
  Vec3 nc;   // collocation normal at x (minus the mesh-outward normal)
  double jw; // jacobian * reference weight
  double N[6];
};

void eval_rule_on_element(const QuadMesh& mesh, int elem, const TriangleQuadrature& rule,
                          std::vector<QuadPointData>& out) {
  out.clear();
  out.reserve(rule.points.size());
  for (const auto& p : rule.points) {
    const ShapeEval se = shape_eval(mesh, elem, p.xi(), p.eta());
    QuadPointData q;
    q.x = se.position;
    q.nc = -se.normal;
    q.jw = se.jacobian * p.weight;
    shape_values(p.xi(), p.eta(), q.N);
    out.push_back(q);
  }
}

struct ElementGeometry {
  double diameter = 0.0;
};

// Shared precomputed state for one assembly pass.
struct AssemblyPlan {
  const QuadMesh& mesh;
  const AssemblyConfig& cfg;
  std::vector<std::vector<QuadPointData>> far; // per element
  std::vector<ElementGeometry> geom;
  std::vector<TriangleQuadrature> near_rules;  // by depth, 1..max_depth
  std::vector<TriangleQuadrature> duffy;       // by local node, 0..5
  NodeAdjacency adjacency;

  AssemblyPlan(const QuadMesh& m, const AssemblyConfig& c) : mesh(m), cfg(c) {
    const TriangleQuadrature far_rule = gauss_rule(cfg.far_degree);
    const TriangleQuadrature near_base = gauss_rule(cfg.near_degree);
    far.resize(mesh.num_elements());
    geom.resize(mesh.num_elements());
    parallel_for(mesh.num_elements(), [&](int e) {
      eval_rule_on_element(mesh, e, far_rule, far[e]);
      const auto& conn = mesh.elements[e];
      double d2 = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
          d2 = std::max(d2, (mesh.nodes[conn[a]] - mesh.nodes[conn[b]]).squaredNorm());
      geom[e].diameter = std::sqrt(d2);
    });
    near_rules.resize(cfg.max_depth + 1);
    for (int d = 1; d <= cfg.max_depth; ++d) near_rules[d] = subdivided_rule(near_base, d);
    for (int l = 0; l < 6; ++l) duffy.push_back(duffy_rule_at_node(l, cfg.duffy_points));
    adjacency = build_adjacency(mesh);
  }

  int subdivision_depth(double dist, double diam) const {
    if (dist < 1e-12 * diam)
      throw QuadratureError("collocation node touches a non-adjacent element");
    const double ratio = dist / diam;
    int depth = 0;
    double threshold = 2.0;
    while (ratio < threshold && depth < cfg.max_depth) {
      ++depth;
      threshold *= 0.5;
    }
    if (depth > 0) depth = std::max(depth, std::min(cfg.near_depth, cfg.max_depth));
    return depth;
  }
};

// Everything one collocation row accumulates. Burton-Miller reuses the
// standard pieces and adds the i*beta-weighted ones.
struct RowAccumulator {
  VecXc rowH;
  VecXc rowG;
  cd diagH = 0.0;
  cd diagG = 0.0;
  VecXc rowL;          // hypersingular-equation phi entries
  VecXc rowR;          // dGk/dn0 entries
  cd diagR = 0.0;      // i*beta-weighted q0 pieces
  double diagL0 = 0.0; // -int d2_0 (the phi(x0) part of the difference)
  Vec3 w_far = Vec3::Zero();  // int (x-x0) d2_0 over elements away from the node
  Vec3 v_aux = Vec3::Zero();  // int n(x) dG0/dn0 over everything
};

// sparse surface-gradient row at the collocation node: node index ->
// t1*D1 + t2*D2 weight vector
struct GradientRow {
  std::vector<std::pair<int, Vec3>> weights;
};

template <bool BurtonMiller>
void accumulate_points(const std::vector<QuadPointData>& pts, const Vec3& x0,
                       const Vec3& nc0, cd k, const std::array<int, 6>& conn,
                       int self_local, const GradientRow* grad_row,
                       RowAccumulator& acc) {
  for (const auto& q : pts) {
    const Vec3 d = q.x - x0;
    const double r2 = d.squaredNorm();
    const double r = std::sqrt(r2);
    const double inv_r = 1.0 / r;
    const double inv_r3 = inv_r * inv_r * inv_r;
    const cd u = iu * k * r;
    const cd eikr = std::exp(u);
    const double dn = d.dot(q.nc);
    const double dn0 = d.dot(nc0);
    const double nn0 = q.nc.dot(nc0);
    const double f = dn0; // n(x0).(x - x0)

    const cd coefH = (u - 1.0) * eikr * dn * inv_r3 * q.jw; // dGk/dn
    const cd coefG = eikr * inv_r * q.jw;                   // Gk
    for (int a = 0; a < 6; ++a) {
      acc.rowH[conn[a]] += q.N[a] * coefH;
      acc.rowG[conn[a]] += q.N[a] * coefG;
    }
    const double dg0_dn = -dn * inv_r3;
    acc.diagH -= dg0_dn * q.jw;
    acc.diagG -= (nn0 * inv_r - f * dg0_dn) * q.jw;

    if constexpr (BurtonMiller) {
      const cd c1 = cancellation_c1(u);
      const cd c2 = cancellation_c2(u);
      const cd d2_diff = -nn0 * c1 * inv_r3 - dn * dn0 * c2 * inv_r3 * inv_r * inv_r;
      const cd dgk_dn0 = (1.0 - u) * eikr * dn0 * inv_r3;
      const double d2_0 = nn0 * inv_r3 - 3.0 * dn * dn0 * inv_r3 * inv_r * inv_r;
      for (int a = 0; a < 6; ++a) {
        acc.rowL[conn[a]] += q.N[a] * (d2_diff + d2_0) * q.jw;
        acc.rowR[conn[a]] += q.N[a] * dgk_dn0 * q.jw;
      }
      acc.diagL0 -= d2_0 * q.jw;                  // the phi(x0) subtraction
      acc.diagR += dg0_dn * q.jw;
      acc.v_aux += q.nc * (dn0 * inv_r3 * q.jw);  // n(x) dG0/dn0
      if (self_local >= 0) {
        // on touching elements also subtract the tangential-linear part
        // pointwise; the matching add-back uses the auxiliary identity
        // for the principal value of (x - x0) d2_0
        const double scale = d2_0 * q.jw;
        for (const auto& [j, s] : grad_row->weights)
          acc.rowL[j] -= s.dot(d) * scale;
      } else {
        acc.w_far += d * (d2_0 * q.jw);
      }
    }
  }
}

template <bool BurtonMiller>
void assemble_row(const AssemblyPlan& plan, const std::vector<NodeFrame>& cframes,
                  int row, cd k, const GradientRow* grad_row, RowAccumulator& acc,
                  std::vector<QuadPointData>& scratch) {
  const QuadMesh& mesh = plan.mesh;
  const Vec3 x0 = mesh.nodes[row];
  const Vec3 nc0 = cframes[row].n;

  acc.rowH.setZero();
  acc.rowG.setZero();
  acc.diagH = acc.diagG = 0.0;
  if constexpr (BurtonMiller) {
    acc.rowL.setZero();
    acc.rowR.setZero();
    acc.diagR = 0.0;
    acc.diagL0 = 0.0;
    acc.w_far.setZero();
    acc.v_aux.setZero();
  }

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& conn = mesh.elements[e];
    int local = -1;
    for (int a = 0; a < 6; ++a)
      if (conn[a] == row) { local = a; break; }
    if (local >= 0) {
      eval_rule_on_element(mesh, e, plan.duffy[local], scratch);
      accumulate_points<BurtonMiller>(scratch, x0, nc0, k, conn, local, grad_row, acc);
      continue;
    }
    double d2 = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 6; ++a)
      d2 = std::min(d2, (mesh.nodes[conn[a]] - x0).squaredNorm());
    const int depth = plan.subdivision_depth(std::sqrt(d2), plan.geom[e].diameter);
    if (depth == 0) {
      accumulate_points<BurtonMiller>(plan.far[e], x0, nc0, k, conn, -1, grad_row, acc);
    } else {
      eval_rule_on_element(mesh, e, plan.near_rules[depth], scratch);
      accumulate_points<BurtonMiller>(scratch, x0, nc0, k, conn, -1, grad_row, acc);
    }
  }
}

} // namespace

BemMatrices assemble(const QuadMesh& mesh, const std::vector<NodeFrame>& frames,
                     cd k, bool exterior, const AssemblyConfig& config) {
  if (static_cast<int>(frames.size()) != mesh.num_nodes())
    throw std::invalid_argument("assemble: frames do not belong to this mesh");

  const AssemblyPlan plan(mesh, config);
  const std::vector<NodeFrame> cframes = collocation_frames(frames);
  const int n = mesh.num_nodes();

  BemMatrices out;
  out.H.resize(n, n);
  out.G.resize(n, n);
  out.k = k;
  out.exterior = exterior;
  out.mesh_fingerprint = mesh.fingerprint();

  parallel_for(n, [&](int i) {
    thread_local RowAccumulator acc;
    thread_local std::vector<QuadPointData> scratch;
    if (acc.rowH.size() != n) {
      acc.rowH.resize(n);
      acc.rowG.resize(n);
    }
    assemble_row<false>(plan, cframes, i, k, nullptr, acc, scratch);
    acc.rowH[i] += acc.diagH;
    acc.rowG[i] += acc.diagG;
    if (exterior) acc.rowH[i] += 4.0 * pi;
    out.H.row(i) = acc.rowH.transpose();
    out.G.row(i) = acc.rowG.transpose();
  });
  return out;
}

BurtonMillerMatrices assemble_burton_miller(const QuadMesh& mesh,
                                            const std::vector<NodeFrame>& frames,
                                            cd k, double beta, bool exterior,
                                            const AssemblyConfig& config) {
  if (static_cast<int>(frames.size()) != mesh.num_nodes())
    throw std::invalid_argument("assemble_burton_miller: frames do not belong to this mesh");
  if (!(beta > 0.0)) throw std::invalid_argument("assemble_burton_miller: beta must be positive");

  const AssemblyPlan plan(mesh, config);
  const std::vector<NodeFrame> cframes = collocation_frames(frames);
  const int n = mesh.num_nodes();
  const cd ib = iu * beta;

  // surface-gradient rows for the linear-part subtraction of the
  // hypersingular kernel
  const TangentialOps ops = tangential_ops(mesh, cframes);
  std::vector<GradientRow> grad_rows(n);
  for (int i = 0; i < n; ++i) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(ops.D_t1, i); it;
         ++it)
      grad_rows[i].weights.push_back({static_cast<int>(it.col()), it.value() * cframes[i].t1});
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(ops.D_t2, i); it;
         ++it) {
      bool merged = false;
      for (auto& [j, s] : grad_rows[i].weights)
        if (j == it.col()) {
          s += it.value() * cframes[i].t2;
          merged = true;
          break;
        }
      if (!merged)
        grad_rows[i].weights.push_back({static_cast<int>(it.col()), it.value() * cframes[i].t2});
    }
  }

  BurtonMillerMatrices out;
  out.L.resize(n, n);
  out.R.resize(n, n);
  out.k = k;
  out.beta = beta;
  out.mesh_fingerprint = mesh.fingerprint();

  parallel_for(n, [&](int i) {
    thread_local RowAccumulator acc;
    thread_local std::vector<QuadPointData> scratch;
    if (acc.rowH.size() != n || acc.rowL.size() != n) {
      acc.rowH.resize(n);
      acc.rowG.resize(n);
      acc.rowL.resize(n);
      acc.rowR.resize(n);
    }
    assemble_row<true>(plan, cframes, i, k, &grad_rows[i], acc, scratch);

    // hypersingular phi side: d2-difference entries plus the split
    //   pv int (phi - phi0) d2_0 = int [phi - phi0 - grad_s phi . (x-x0)] d2_0
    //                              + grad_s phi . V
    // with V = int n dG0/dn0 + 2 pi n0 (exterior; -2 pi n0 interior),
    // the quadrature part of V restricted to the far elements since the
    // touching ones were regularised pointwise
    const Vec3 V_total = acc.v_aux + (exterior ? 2.0 : -2.0) * pi * cframes[i].n;
    const Vec3 addback = V_total - acc.w_far;
    VecXc rowL = acc.rowH + ib * acc.rowL;
    for (const auto& [j, s] : grad_rows[i].weights) rowL[j] += ib * s.dot(addback);
    rowL[i] += acc.diagH + ib * acc.diagL0;

    VecXc rowR = acc.rowG + ib * acc.rowR;
    rowR[i] += acc.diagG + ib * acc.diagR;
    if (exterior) {
      rowL[i] += 4.0 * pi;
      rowR[i] -= 4.0 * pi * ib;
    }
    out.L.row(i) = rowL.transpose();
    out.R.row(i) = rowR.transpose();
  });
  return out;
}

double default_beta(double characteristic_length, cd k) {
  const double ak = std::abs(k);
  if (ak == 0.0) return 0.5 * characteristic_length;
  return std::min(0.5 * characteristic_length, 1.0 / ak);
}

TangentialOps tangential_ops(const QuadMesh& mesh, const std::vector<NodeFrame>& frames) {
  static const double ref_xi[6] = {0.0, 1.0, 0.0, 0.5, 0.5, 0.0};
  static const double ref_eta[6] = {0.0, 0.0, 1.0, 0.0, 0.5, 0.5};

  const NodeAdjacency adjacency = build_adjacency(mesh);
  const int n = mesh.num_nodes();

  std::vector<Eigen::Triplet<double>> trip1, trip2;
  for (int i = 0; i < n; ++i) {
    std::map<int, Vec3> grad; // node -> averaged surface gradient of its shape fn
    double wsum = 0.0;
    for (const auto& [e, local] : adjacency.elems[i]) {
      const double xi = ref_xi[local], eta = ref_eta[local];
      const ShapeEval se = shape_eval(mesh, e, xi, eta);
      const double E = se.d_xi.dot(se.d_xi);
      const double F = se.d_xi.dot(se.d_eta);
      const double Gm = se.d_eta.dot(se.d_eta);
      const double det = E * Gm - F * F;
      if (det <= 0.0 || !std::isfinite(det))
        throw MeshError("tangential_ops: rank-deficient metric at node " + std::to_string(i));
      double dNx[6], dNe[6];
      shape_gradients(xi, eta, dNx, dNe);
      const double w = se.jacobian;
      for (int a = 0; a < 6; ++a) {
        const Vec3 g = ((Gm * dNx[a] - F * dNe[a]) * se.d_xi +
                        (E * dNe[a] - F * dNx[a]) * se.d_eta) / det;
        grad.try_emplace(mesh.elements[e][a], Vec3::Zero()).first->second += w * g;
      }
      wsum += w;
    }
    double sum1 = 0.0, sum2 = 0.0;
    for (const auto& [j, g] : grad) {
      if (j == i) continue;
      const double v1 = frames[i].t1.dot(g) / wsum;
      const double v2 = frames[i].t2.dot(g) / wsum;
      trip1.emplace_back(i, j, v1);
      trip2.emplace_back(i, j, v2);
      sum1 += v1;
      sum2 += v2;
    }
    // derivative of a constant vanishes exactly
    trip1.emplace_back(i, i, -sum1);
    trip2.emplace_back(i, i, -sum2);
  }

  TangentialOps ops;
  ops.D_t1.resize(n, n);
  ops.D_t2.resize(n, n);
  ops.D_t1.setFromTriplets(trip1.begin(), trip1.end());
  ops.D_t2.setFromTriplets(trip2.begin(), trip2.end());
  return ops;
}

void dump_matrix_binary(const MatXc& M, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  const std::uint64_t rows = M.rows(), cols = M.cols();
  out.write(reinterpret_cast<const char*>(&rows), 8);
  out.write(reinterpret_cast<const char*>(&cols), 8);
  for (std::uint64_t i = 0; i < rows; ++i)
    for (std::uint64_t j = 0; j < cols; ++j) {
      const double re = M(i, j).real(), im = M(i, j).imag();
      out.write(reinterpret_cast<const char*>(&re), 8);
      out.write(reinterpret_cast<const char*>(&im), 8);
    }
}

MatXc load_matrix_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::uint64_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), 8);
  in.read(reinterpret_cast<char*>(&cols), 8);
  MatXc M(rows, cols);
  for (std::uint64_t i = 0; i < rows; ++i)
    for (std::uint64_t j = 0; j < cols; ++j) {
      double re, im;
      in.read(reinterpret_cast<char*>(&re), 8);
      in.read(reinterpret_cast<char*>(&im), 8);
      M(i, j) = cd(re, im);
    }
  if (!in) throw std::runtime_error("truncated matrix file " + path);
  return M;
}

} // namespace helmbem
