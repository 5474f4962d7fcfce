#pragma once

#include <Eigen/Dense>
#include <complex>

namespace pcia {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Relative singular value threshold shared by every rank decision in the
// toolkit: sigma_i counts toward the rank iff sigma_i > tol * sigma_max.
inline constexpr double kRankTol = 1e-9;

// Residual norm threshold for containment / orthogonalization of unit vectors.
inline constexpr double kResidualTol = 1e-8;

Index numerical_rank(const CMatrix& m, double tol = kRankTol);

// Orthonormal basis of span(candidate); column count equals the numerical rank.
CMatrix orthonormal_span(const CMatrix& candidate, double tol = kRankTol);

}  // namespace pcia
