#include "modefisher/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace modefisher {

double max_offdiagonal(const Matrix& m) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j) best = std::max(best, std::abs(m(i, j)));
    }
  }
  return best;
}

double hermiticity_residual(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_residual(const Matrix& u) {
  if (u.size() == 0) return 0.0;
  return (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

Matrix unitary_exponential(const Matrix& hermitian, double theta) {
  if (hermitian.rows() != hermitian.cols()) {
    throw std::invalid_argument("unitary_exponential: matrix is not square");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian);
  const Matrix& w = eig.eigenvectors();
  Vector phases(eig.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, theta * eig.eigenvalues()(i));
  }
  return w * phases.asDiagonal() * w.adjoint();
}

}  // namespace modefisher
