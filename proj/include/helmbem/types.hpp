#pragma once

#include <complex>
#include <vector>
#include <Eigen/Dense>

namespace helmbem {

using cd = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;
using VecX = Eigen::VectorXd;
using VecXc = Eigen::VectorXcd;
using MatXc = Eigen::MatrixXcd;

/// Complex-valued quantity sampled at every mesh node (phi, dphi/dn, a
/// field component, ...).
using SurfaceField = Eigen::VectorXcd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cd iu{0.0, 1.0};

} // namespace helmbem
