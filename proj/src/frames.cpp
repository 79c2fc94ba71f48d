#include "modefisher/frames.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace modefisher {
namespace {

constexpr double kFrameUnitarityTol = 1e-12;

// Apply (alpha b1^dag + beta b2^dag) to a vector over the n-particle b-basis.
Vector apply_creation(const Vector& in, Complex alpha, Complex beta) {
  const Eigen::Index n = in.size() - 1;
  Vector out = Vector::Zero(n + 2);
  for (Eigen::Index j = 0; j <= n; ++j) {
    if (in(j) == Complex(0.0)) continue;
    out(j + 1) += alpha * std::sqrt(static_cast<double>(j + 1)) * in(j);
    out(j) += beta * std::sqrt(static_cast<double>(n - j + 1)) * in(j);
  }
  return out;
}

void check_frame(const ModeFrame& frame) {
  const Eigen::Matrix2cd& u = frame.mixing();
  const double residual = (u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
  if (!(residual <= kFrameUnitarityTol)) {
    std::ostringstream msg;
    msg << "non-unitary frame: max|U^dag U - I| = " << residual;
    throw std::invalid_argument(msg.str());
  }
}

Vector expansion_column(int k, int n_particles, const Eigen::Matrix2cd& u) {
  // a_j^dag = sum_i U(i,j) b_i^dag
  Vector v = Vector::Ones(1);
  for (int i = 1; i <= k; ++i) {
    v = apply_creation(v, u(0, 0), u(1, 0)) / std::sqrt(static_cast<double>(i));
  }
  for (int i = 1; i <= n_particles - k; ++i) {
    v = apply_creation(v, u(0, 1), u(1, 1)) / std::sqrt(static_cast<double>(i));
  }
  return v;
}

}  // namespace

Matrix frame_change_unitary(int n_particles, const ModeFrame& frame) {
  if (n_particles < 0) throw std::domain_error("frame_change_unitary: N must be nonnegative");
  check_frame(frame);
  const Eigen::Index dim = n_particles + 1;
  if (frame.kind() == FrameKind::spatial) return Matrix::Identity(dim, dim);
  Matrix v(dim, dim);
  for (int k = 0; k <= n_particles; ++k) v.col(k) = expansion_column(k, n_particles, frame.mixing());
  return v;
}

Vector fock_expansion_coefficients(int k, int n_particles, const ModeFrame& frame) {
  if (k < 0 || k > n_particles) {
    throw std::domain_error("fock_expansion_coefficients: k = " + std::to_string(k) +
                            " outside 0..N = " + std::to_string(n_particles));
  }
  check_frame(frame);
  return expansion_column(k, n_particles, frame.mixing());
}

SectorState transform_state(const SectorState& state, const ModeFrame& target) {
  const ModeFrame rel = target.relative_to(state.frame());
  const Matrix v = frame_change_unitary(state.n_particles(), rel);
  if (state.is_pure()) return SectorState::pure(v * state.amplitudes(), target);
  return SectorState::density(v * state.density_matrix() * v.adjoint(), target);
}

Matrix transport_matrix(const Matrix& m, int n_particles, const ModeFrame& from, const ModeFrame& to) {
  if (m.rows() != n_particles + 1 || m.cols() != n_particles + 1) {
    throw std::invalid_argument("transport_matrix: dimension mismatch");
  }
  const Matrix v = frame_change_unitary(n_particles, to.relative_to(from));
  return v * m * v.adjoint();
}

}  // namespace modefisher
