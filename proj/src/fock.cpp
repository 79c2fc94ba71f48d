#include "modefisher/fock.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace modefisher {

SectorState::SectorState(int n, std::variant<Vector, Matrix> payload, ModeFrame frame)
    : n_particles_(n), payload_(std::move(payload)), frame_(std::move(frame)) {}

SectorState SectorState::pure(Vector amplitudes, ModeFrame frame) {
  if (amplitudes.size() < 1) throw std::invalid_argument("pure state needs at least one amplitude");
  const int n = static_cast<int>(amplitudes.size()) - 1;
  return SectorState(n, std::move(amplitudes), std::move(frame));
}

SectorState SectorState::density(Matrix rho, ModeFrame frame) {
  if (rho.rows() < 1 || rho.rows() != rho.cols()) {
    throw std::invalid_argument("density matrix must be square and non-empty");
  }
  const int n = static_cast<int>(rho.rows()) - 1;
  return SectorState(n, std::move(rho), std::move(frame));
}

SectorState SectorState::diagonal(const std::vector<double>& p, ModeFrame frame) {
  if (p.empty()) throw std::invalid_argument("diagonal state needs at least one probability");
  Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(p.size()));
  for (std::size_t k = 0; k < p.size(); ++k) rho(k, k) = p[k];
  return density(std::move(rho), std::move(frame));
}

const Vector& SectorState::amplitudes() const {
  if (!is_pure()) throw std::logic_error("amplitudes() called on a mixed state");
  return std::get<Vector>(payload_);
}

Matrix SectorState::density_matrix() const {
  if (const auto* psi = std::get_if<Vector>(&payload_)) return (*psi) * psi->adjoint();
  return std::get<Matrix>(payload_);
}

SectorState SectorState::with_frame(ModeFrame frame) const {
  return SectorState(n_particles_, payload_, std::move(frame));
}

SectorState make_fock_state(int k, int n_particles) {
  if (n_particles < 0) {
    throw std::domain_error("make_fock_state: N = " + std::to_string(n_particles) + " violates N >= 0");
  }
  if (k < 0) throw std::domain_error("make_fock_state: k = " + std::to_string(k) + " violates k >= 0");
  if (k > n_particles) {
    throw std::domain_error("make_fock_state: k = " + std::to_string(k) + " violates k <= N = " +
                            std::to_string(n_particles));
  }
  Vector c = Vector::Zero(n_particles + 1);
  c(k) = 1.0;
  return SectorState::pure(std::move(c));
}

namespace {

// Product of the integers under the square root of the ladder coefficient.
double ladder_product(int q, int create, int annihilate) {
  if (q < annihilate) return 0.0;
  double prod = 1.0;
  for (int i = 0; i < annihilate; ++i) prod *= q - i;
  const int base = q - annihilate;
  for (int i = 1; i <= create; ++i) prod *= base + i;
  return prod;
}

}  // namespace

double ladder_coefficient(int q, int create, int annihilate) {
  return std::sqrt(ladder_product(q, create, annihilate));
}

Matrix monomial_matrix(const MonomialOp& op, int n_particles) {
  if (op.m < 0 || op.n < 0 || op.r < 0 || op.s < 0) {
    throw std::domain_error("monomial exponents must be nonnegative");
  }
  if (n_particles < 0) throw std::domain_error("monomial_matrix: N must be nonnegative");
  const Eigen::Index dim = n_particles + 1;
  Matrix mat = Matrix::Zero(dim, dim);
  if (!op.conserves_number()) return mat;
  for (int k = 0; k <= n_particles; ++k) {
    const int other = n_particles - k;
    if (k < op.n || other < op.s) continue;
    const int l = k - op.n + op.m;
    const double p1 = ladder_product(k, op.m, op.n);
    const double p2 = ladder_product(other, op.r, op.s);
    const double joint = p1 * p2;
    mat(l, k) = std::isfinite(joint) ? std::sqrt(joint) : std::sqrt(p1) * std::sqrt(p2);
  }
  return mat;
}

Complex expectation(const SectorState& state, const Matrix& m) {
  const Eigen::Index dim = state.dimension();
  if (m.rows() != dim || m.cols() != dim) {
    std::ostringstream msg;
    msg << "dimension mismatch: state has dimension " << dim << ", operator is " << m.rows() << "x"
        << m.cols();
    throw std::invalid_argument(msg.str());
  }
  if (state.is_pure()) {
    const Vector& psi = state.amplitudes();
    return psi.dot(m * psi);  // conjugates the first argument
  }
  return (state.density_matrix() * m).trace();
}

std::vector<std::string> validate_state(const SectorState& state, double tol) {
  std::vector<std::string> violations;
  if (state.dimension() < 1) {
    violations.emplace_back("dimension");
    return violations;
  }
  if (state.is_pure()) {
    const double norm2 = state.amplitudes().squaredNorm();
    if (!(std::abs(norm2 - 1.0) <= tol)) violations.emplace_back("normalization");
    return violations;
  }
  const Matrix rho = state.density_matrix();
  if (!(hermiticity_residual(rho) <= tol)) violations.emplace_back("hermiticity");
  const Complex tr = rho.trace();
  if (!(std::abs(tr - 1.0) <= tol)) violations.emplace_back("trace");
  const Matrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(herm, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() >= -tol)) violations.emplace_back("positivity");
  return violations;
}

void require_valid(const SectorState& state, double tol) {
  const auto violations = validate_state(state, tol);
  if (violations.empty()) return;
  std::string msg = "invalid state: violated";
  for (const auto& v : violations) msg += " " + v;
  throw std::invalid_argument(msg);
}

}  // namespace modefisher
