#include <cmath>
#include <functional>

#include "helmbem/mesh.hpp"

namespace helmbem {

namespace {

// meridian curve in the (rho, z) half-plane, rho >= 0, traversed from one
// axis pole to the other
struct Segment {
  // t in [0,1] -> (rho, z)
  std::function<std::array<double, 2>(double)> eval;
  double length = 0.0;
};

struct Profile {
  std::vector<Segment> segments;

  double total_length() const {
    double s = 0.0;
    for (const auto& seg : segments) s += seg.length;
    return s;
  }

  std::array<double, 2> at_arclength(double s) const {
    for (const auto& seg : segments) {
      if (s <= seg.length || &seg == &segments.back())
        return seg.eval(std::min(1.0, std::max(0.0, s / seg.length)));
      s -= seg.length;
    }
    return segments.back().eval(1.0);
  }
};

double segment_length(const std::function<std::array<double, 2>(double)>& f, int samples = 256) {
  double len = 0.0;
  auto prev = f(0.0);
  for (int i = 1; i <= samples; ++i) {
    const auto cur = f(static_cast<double>(i) / samples);
    len += std::hypot(cur[0] - prev[0], cur[1] - prev[1]);
    prev = cur;
  }
  return len;
}

Segment line_segment(std::array<double, 2> p0, std::array<double, 2> p1) {
  Segment s;
  s.eval = [p0, p1](double t) {
    return std::array<double, 2>{p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1])};
  };
  s.length = std::hypot(p1[0] - p0[0], p1[1] - p0[1]);
  return s;
}

Segment arc_segment(std::array<double, 2> center, double radius, double ang0, double ang1) {
  Segment s;
  s.eval = [center, radius, ang0, ang1](double t) {
    const double a = ang0 + t * (ang1 - ang0);
    return std::array<double, 2>{center[0] + radius * std::cos(a),
                                 center[1] + radius * std::sin(a)};
  };
  s.length = std::abs(ang1 - ang0) * radius;
  return s;
}

// Build the six-node revolved mesh from a pole-to-pole profile. Rings are
// spaced so elements stay roughly isotropic: target spacing tracks the
// local circumference / n_phi, clamped to [h_min, h_max]. `snap` lists
// arclengths that must coincide with corner rings (segment junctions).
QuadMesh revolve(const Profile& profile, int n_phi, double h_min, double h_max,
                 const std::vector<double>& snap) {
  const double S = profile.total_length();

  auto target_h = [&](double s) {
    const double rho = profile.at_arclength(s)[0];
    return std::min(h_max, std::max(h_min, 2.0 * pi * rho / n_phi));
  };

  // ring positions: per snapped section, equidistribute 1/h
  std::vector<double> bounds = {0.0};
  for (double s : snap)
    if (s > 1e-12 && s < S - 1e-12) bounds.push_back(s);
  bounds.push_back(S);
  std::sort(bounds.begin(), bounds.end());

  std::vector<double> rings = {0.0};
  for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
    const double s0 = bounds[b], s1 = bounds[b + 1];
    const int fine = 200;
    double units = 0.0;
    for (int i = 0; i < fine; ++i) {
      const double sm = s0 + (i + 0.5) * (s1 - s0) / fine;
      units += (s1 - s0) / fine / target_h(sm);
    }
    const int m = std::max(1, static_cast<int>(std::lround(units)));
    double acc = 0.0;
    int placed = 1;
    for (int i = 0; i < fine && placed < m; ++i) {
      const double sm = s0 + (i + 0.5) * (s1 - s0) / fine;
      acc += (s1 - s0) / fine / target_h(sm);
      if (acc >= units * placed / m) {
        rings.push_back(s0 + (i + 1.0) * (s1 - s0) / fine);
        ++placed;
      }
    }
    rings.push_back(s1);
  }

  const int M = static_cast<int>(rings.size()) - 1; // latitude cells
  if (M < 2) throw MeshError("revolve: profile too short for the requested density");

  // node grid: ring index r in 0..2M (even = corner rings), angle index
  // c in 0..2*n_phi-1; poles are single nodes; rings 1 and 2M-1 only hold
  // even angle indices (pole-edge midpoints)
  QuadMesh mesh;
  std::vector<std::vector<int>> grid(2 * M + 1, std::vector<int>(2 * n_phi, -1));

  auto ring_s = [&](int r) {
    const int lo = r / 2;
    if (r % 2 == 0) return rings[lo];
    return 0.5 * (rings[lo] + rings[lo + 1]);
  };

  auto add_node = [&](double s, double phi) {
    const auto rz = profile.at_arclength(s);
    mesh.nodes.push_back({rz[0] * std::cos(phi), rz[0] * std::sin(phi), rz[1]});
    return mesh.num_nodes() - 1;
  };

  const int pole0 = add_node(0.0, 0.0);
  const int pole1 = add_node(S, 0.0);
  const double dphi = pi / n_phi; // half-step between angle indices
  for (int r = 1; r < 2 * M; ++r) {
    const bool evens_only = (r == 1 || r == 2 * M - 1);
    for (int c = 0; c < 2 * n_phi; ++c) {
      if (evens_only && (c % 2 == 1)) continue;
      grid[r][c] = add_node(ring_s(r), c * dphi);
    }
  }

  auto at = [&](int r, int c) {
    c = ((c % (2 * n_phi)) + 2 * n_phi) % (2 * n_phi);
    if (r == 0) return pole0;
    if (r == 2 * M) return pole1;
    return grid[r][c];
  };

  // top fan
  for (int j = 0; j < n_phi; ++j)
    mesh.elements.push_back({pole0, at(2, 2 * j), at(2, 2 * j + 2),
                             at(1, 2 * j), at(2, 2 * j + 1), at(1, 2 * j + 2)});
  // body bands
  for (int band = 1; band + 1 < M; ++band) {
    const int r = 2 * band;
    for (int j = 0; j < n_phi; ++j) {
      const int c = 2 * j;
      mesh.elements.push_back({at(r, c), at(r + 2, c), at(r + 2, c + 2),
                               at(r + 1, c), at(r + 2, c + 1), at(r + 1, c + 1)});
      mesh.elements.push_back({at(r, c), at(r + 2, c + 2), at(r, c + 2),
                               at(r + 1, c + 1), at(r + 1, c + 2), at(r, c + 1)});
    }
  }
  // bottom fan
  const int rb = 2 * M - 2;
  for (int j = 0; j < n_phi; ++j)
    mesh.elements.push_back({pole1, at(rb, 2 * j + 2), at(rb, 2 * j),
                             at(rb + 1, 2 * j + 2), at(rb, 2 * j + 1), at(rb + 1, 2 * j)});

  // orient outward: enclosed volume must come out positive
  const auto rule_area = [&] {
    double vol = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
      static const double qp[3][2] = {{1.0 / 6, 1.0 / 6}, {2.0 / 3, 1.0 / 6}, {1.0 / 6, 2.0 / 3}};
      for (const auto& p : qp) {
        const ShapeEval se = shape_eval(mesh, e, p[0], p[1]);
        vol += se.position.dot(se.normal) * se.jacobian * (1.0 / 6.0);
      }
    }
    return vol / 3.0;
  };
  if (rule_area() < 0.0) {
    for (auto& el : mesh.elements) {
      std::swap(el[1], el[2]);
      std::swap(el[3], el[5]);
    }
  }
  return mesh;
}

double cross2(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return a[0] * b[1] - a[1] * b[0];
}

} // namespace

namespace {

struct ResonatorProfile {
  Profile profile;
  std::vector<double> snaps;
  double z_junction_inner = 0.0;
};

ResonatorProfile resonator_profile(double a, const ResonatorParams& p) {
  if (!(p.neck_length > 0.0))
    throw MeshError("resonator: neck length must be positive");
  if (!(p.taper_bottom > 0.0) || !(p.taper_top > 0.0) || !(p.fillet > 0.0))
    throw MeshError("resonator: radii must be positive");
  if (p.taper_bottom >= p.inner_radius)
    throw MeshError("resonator: bore does not fit inside the inner sphere");
  if (p.outer_neck_base >= p.outer_radius)
    throw MeshError("resonator: outer neck base exceeds the outer sphere");

  const double Rout = p.outer_radius, Rin = p.inner_radius;
  const double zJ1 = std::sqrt(Rout * Rout - p.outer_neck_base * p.outer_neck_base);
  const double z_top = zJ1 + p.neck_length;
  const double zJ2 = std::sqrt(Rin * Rin - p.taper_bottom * p.taper_bottom);
  const double outer_top = p.taper_top + 2.0 * p.fillet;
  if (z_top <= zJ2)
    throw MeshError("resonator: neck ends inside the shell (self-intersecting)");

  // straight walls
  const std::array<double, 2> A0{p.outer_neck_base, zJ1}, A1{outer_top, z_top};
  const std::array<double, 2> B0{p.taper_top, z_top}, B1{p.taper_bottom, zJ2};

  // wall must keep positive thickness along the neck
  for (int i = 0; i <= 16; ++i) {
    const double t = i / 16.0;
    const double z = zJ2 + t * (z_top - zJ2);
    const double bore = p.taper_top + (p.taper_bottom - p.taper_top) * (z_top - z) / (z_top - zJ2);
    double outer = p.outer_neck_base;
    if (z >= zJ1) outer = p.outer_neck_base + (outer_top - p.outer_neck_base) * (z - zJ1) / (z_top - zJ1);
    if (outer <= bore)
      throw MeshError("resonator: neck walls self-intersect");
  }

  // fillet circle tangent to both neck lines near the top
  const auto unit = [](std::array<double, 2> v) {
    const double l = std::hypot(v[0], v[1]);
    return std::array<double, 2>{v[0] / l, v[1] / l};
  };
  const auto dA = unit({A1[0] - A0[0], A1[1] - A0[1]});
  const auto dB = unit({B1[0] - B0[0], B1[1] - B0[1]});
  // solve cross(C - P, d) = s*f for both lines; pick the solution between them
  std::array<double, 2> center{};
  bool found = false;
  for (const double sa : {1.0, -1.0}) {
    for (const double sb : {1.0, -1.0}) {
      // cross(C,dA) = sa*f + cross(P_A,dA); linear 2x2 system
      const double rhs1 = sa * p.fillet + cross2(A0, dA);
      const double rhs2 = sb * p.fillet + cross2(B0, dB);
      const double det = dA[1] * (-dB[0]) - (-dA[0]) * dB[1];
      if (std::abs(det) < 1e-14) continue;
      // C_x*dA_y - C_y*dA_x = rhs1 ; C_x*dB_y - C_y*dB_x = rhs2
      const double cx = (rhs1 * (-dB[0]) - (-dA[0]) * rhs2) / det;
      const double cy = (dA[1] * rhs2 - rhs1 * dB[1]) / det;
      if (cx > p.taper_top - 1e-12 && cx < outer_top + 1e-12 && cy < z_top + p.fillet &&
          cy > zJ1) {
        center = {cx, cy};
        found = true;
      }
    }
  }
  if (!found) throw MeshError("resonator: fillet construction failed");

  // tangent points: project the center onto each line
  const auto project = [](std::array<double, 2> P, std::array<double, 2> d,
                          std::array<double, 2> C) {
    const double t = (C[0] - P[0]) * d[0] + (C[1] - P[1]) * d[1];
    return std::array<double, 2>{P[0] + t * d[0], P[1] + t * d[1]};
  };
  const auto TA = project(A0, dA, center);
  const auto TB = project(B0, dB, center);
  const double angA = std::atan2(TA[1] - center[1], TA[0] - center[0]);
  double angB = std::atan2(TB[1] - center[1], TB[0] - center[0]);
  // go over the top of the rim (increasing angle through pi/2)
  while (angB < angA) angB += 2.0 * pi;

  const double tJ1 = std::acos(-zJ1 / Rout);
  const double tJ2 = std::acos(-zJ2 / Rin);

  ResonatorProfile out;
  Profile& pr = out.profile;
  // outer sphere, south pole up to the neck junction
  Segment sph_out;
  sph_out.eval = [Rout, tJ1](double t) {
    const double th = t * tJ1;
    return std::array<double, 2>{Rout * std::sin(th), -Rout * std::cos(th)};
  };
  sph_out.length = Rout * tJ1;
  pr.segments.push_back(sph_out);
  pr.segments.push_back(line_segment(A0, TA));
  pr.segments.push_back(arc_segment(center, p.fillet, angA, angB));
  pr.segments.push_back(line_segment(TB, B1));
  Segment sph_in;
  sph_in.eval = [Rin, tJ2](double t) {
    const double th = (1.0 - t) * tJ2;
    return std::array<double, 2>{Rin * std::sin(th), -Rin * std::cos(th)};
  };
  sph_in.length = Rin * tJ2;
  pr.segments.push_back(sph_in);

  double s = 0.0;
  for (std::size_t i = 0; i + 1 < pr.segments.size(); ++i) {
    s += pr.segments[i].length;
    out.snaps.push_back(s);
  }
  out.z_junction_inner = zJ2;

  // scale everything by a
  for (auto& seg : pr.segments) {
    auto inner_eval = seg.eval;
    seg.eval = [inner_eval, a](double t) {
      auto rz = inner_eval(t);
      return std::array<double, 2>{rz[0] * a, rz[1] * a};
    };
    seg.length *= a;
  }
  for (auto& sv : out.snaps) sv *= a;
  out.z_junction_inner *= a;
  return out;
}

} // namespace

QuadMesh generate_resonator_mesh(double a, const ResonatorParams& params) {
  if (!(a > 0.0)) throw MeshError("resonator: scale must be positive");
  const ResonatorProfile rp = resonator_profile(a, params);
  const int n_phi = std::max(5, 5 << params.refinement);
  QuadMesh mesh = revolve(rp.profile, n_phi, 0.04 * a, 0.35 * a, rp.snaps);
  mesh.characteristic_length = a;
  validate_mesh(mesh);
  return mesh;
}

ResonatorVolumes resonator_reference_volumes(double a, const ResonatorParams& params) {
  const ResonatorProfile rp = resonator_profile(a, params);

  ResonatorVolumes v;
  // V = |pi * closed-loop integral of rho^2 dz| along the meridian; the
  // closing run down the axis has rho = 0
  double integral = 0.0;
  for (const auto& seg : rp.profile.segments) {
    const int fine = 4096;
    auto prev = seg.eval(0.0);
    for (int i = 1; i <= fine; ++i) {
      const auto cur = seg.eval(static_cast<double>(i) / fine);
      const double rho_mid = 0.5 * (prev[0] + cur[0]);
      integral += rho_mid * rho_mid * (cur[1] - prev[1]);
      prev = cur;
    }
  }
  v.solid = std::abs(pi * integral);

  const double R = params.inner_radius * a;
  const double h = R - rp.z_junction_inner; // cap cut away by the bore
  v.cavity = (4.0 / 3.0) * pi * R * R * R - pi * h * h * (R - h / 3.0);
  return v;
}

QuadMesh generate_dish_mesh(double rim_radius, double focal, double thickness,
                            int refinement) {
  if (!(rim_radius > 0.0) || !(focal > 0.0) || !(thickness > 0.0))
    throw MeshError("dish: parameters must be positive");
  const double R = rim_radius, t = thickness;
  auto zfront = [focal](double rho) { return rho * rho / (4.0 * focal); };

  Profile pr;
  Segment front;
  front.eval = [R, zfront](double u) {
    const double rho = u * R;
    return std::array<double, 2>{rho, zfront(rho)};
  };
  front.length = segment_length(front.eval);
  pr.segments.push_back(front);
  const double zr = zfront(R);
  pr.segments.push_back(arc_segment({R, zr + 0.5 * t}, 0.5 * t, -0.5 * pi, 0.5 * pi));
  Segment back;
  back.eval = [R, t, zfront](double u) {
    const double rho = (1.0 - u) * R;
    return std::array<double, 2>{rho, zfront(rho) + t};
  };
  back.length = segment_length(back.eval);
  pr.segments.push_back(back);

  std::vector<double> snaps = {pr.segments[0].length,
                               pr.segments[0].length + pr.segments[1].length};
  const int n_phi = std::max(5, 4 << refinement);
  QuadMesh mesh = revolve(pr, n_phi, 0.15 * t, 0.5 * R / (1 << refinement), snaps);
  mesh.characteristic_length = R;
  validate_mesh(mesh);
  return mesh;
}

QuadMesh transform_mesh(const QuadMesh& mesh, const Eigen::Matrix3d& rotation,
                        const Vec3& translation) {
  QuadMesh out = mesh;
  for (auto& x : out.nodes) x = rotation * x + translation;
  return out;
}

QuadMesh merge_meshes(const QuadMesh& a, const QuadMesh& b) {
  QuadMesh out = a;
  const int offset = a.num_nodes();
  out.nodes.insert(out.nodes.end(), b.nodes.begin(), b.nodes.end());
  for (const auto& el : b.elements) {
    std::array<int, 6> conn;
    for (int i = 0; i < 6; ++i) conn[i] = el[i] + offset;
    out.elements.push_back(conn);
  }
  return out;
}

} // namespace helmbem
