#pragma once

#include <complex>

#include <Eigen/Dense>

namespace modefisher {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultTolerance = 1e-10;

// Largest |M(i,j)| over i != j.
double max_offdiagonal(const Matrix& m);

// max |M - M^dagger| entrywise.
double hermiticity_residual(const Matrix& m);

// max |U^dagger U - I| entrywise.
double unitarity_residual(const Matrix& u);

/// exp(i * theta * H) for Hermitian H, through its eigendecomposition.
Matrix unitary_exponential(const Matrix& hermitian, double theta);

}  // namespace modefisher
