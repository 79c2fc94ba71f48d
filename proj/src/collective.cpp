#include "modefisher/collective.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "modefisher/frames.hpp"

namespace modefisher {
namespace {

constexpr double kDirectionRenormTol = 1e-6;

std::string format_label(const char* head, std::initializer_list<double> args) {
  std::ostringstream s;
  s.precision(17);
  s << head << "(";
  bool first = true;
  for (double a : args) {
    if (!first) s << ",";
    s << a;
    first = false;
  }
  s << ")";
  return s.str();
}

// J+ = a1^dag a2 : |k> -> sqrt((k+1)(N-k)) |k+1>
Matrix raising(int n_particles) {
  const Eigen::Index dim = n_particles + 1;
  Matrix jp = Matrix::Zero(dim, dim);
  for (int k = 0; k < n_particles; ++k) {
    jp(k + 1, k) = std::sqrt(static_cast<double>(k + 1) * static_cast<double>(n_particles - k));
  }
  return jp;
}

void require_sector(int n_particles, const char* what) {
  if (n_particles < 0) throw std::domain_error(std::string(what) + ": N must be nonnegative");
}

}  // namespace

Direction::Direction(double nx, double ny, double nz) {
  const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (!std::isfinite(norm) || !(std::abs(norm - 1.0) <= kDirectionRenormTol)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "non-unit direction (" << nx << "," << ny << "," << nz << "): |n| = " << norm;
    throw std::domain_error(msg.str());
  }
  nx_ = nx / norm;
  ny_ = ny / norm;
  nz_ = nz / norm;
}

Direction Direction::in_plane(double phi) { return {std::cos(phi), std::sin(phi), 0.0}; }

double Direction::transverse_weight() const { return nx_ * nx_ + ny_ * ny_; }

CollectiveObservable CollectiveObservable::in_frame(const ModeFrame& target) const {
  return {transport_matrix(matrix, n_particles(), frame, target), label, target};
}

SchwingerTriple schwinger(int n_particles) {
  require_sector(n_particles, "schwinger");
  const Eigen::Index dim = n_particles + 1;
  const Matrix jp = raising(n_particles);
  const Matrix jm = jp.adjoint();
  const Complex i(0.0, 1.0);
  Matrix jz = Matrix::Zero(dim, dim);
  for (int k = 0; k <= n_particles; ++k) jz(k, k) = 0.5 * (2.0 * k - n_particles);
  return {{0.5 * (jp + jm), "Jx", ModeFrame::spatial()},
          {(jp - jm) / (2.0 * i), "Jy", ModeFrame::spatial()},
          {std::move(jz), "Jz", ModeFrame::spatial()}};
}

CollectiveObservable direction_generator(int n_particles, const Direction& n) {
  const auto j = schwinger(n_particles);
  Matrix m = n.nx() * j.jx.matrix + n.ny() * j.jy.matrix + n.nz() * j.jz.matrix;
  return {std::move(m), format_label("Jn", {n.nx(), n.ny(), n.nz()}), ModeFrame::spatial()};
}

double commutator_residual(int n_particles) {
  const auto j = schwinger(n_particles);
  if (n_particles == 0) return 0.0;
  const Complex i(0.0, 1.0);
  const auto comm = [](const Matrix& a, const Matrix& b) -> Matrix { return a * b - b * a; };
  const double r1 = (comm(j.jx.matrix, j.jy.matrix) - i * j.jz.matrix).cwiseAbs().maxCoeff();
  const double r2 = (comm(j.jy.matrix, j.jz.matrix) - i * j.jx.matrix).cwiseAbs().maxCoeff();
  const double r3 = (comm(j.jz.matrix, j.jx.matrix) - i * j.jy.matrix).cwiseAbs().maxCoeff();
  return std::max({r1, r2, r3});
}

double casimir_residual(int n_particles) {
  const auto j = schwinger(n_particles);
  const Eigen::Index dim = n_particles + 1;
  const double spin = 0.5 * n_particles;
  const Matrix c = j.jx.matrix * j.jx.matrix + j.jy.matrix * j.jy.matrix + j.jz.matrix * j.jz.matrix;
  return (c - spin * (spin + 1.0) * Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

CollectiveObservable bose_hubbard(int n_particles, const BoseHubbardCouplings& c) {
  require_sector(n_particles, "bose_hubbard");
  if (!std::isfinite(c.eps1) || !std::isfinite(c.eps2) || !std::isfinite(c.u) || !std::isfinite(c.j)) {
    throw std::domain_error("bose_hubbard: couplings must be finite");
  }
  const Eigen::Index dim = n_particles + 1;
  Matrix h = Matrix::Zero(dim, dim);
  for (int k = 0; k <= n_particles; ++k) {
    const double n1 = k;
    const double n2 = n_particles - k;
    h(k, k) = c.eps1 * n1 + c.eps2 * n2 + c.u * (n1 * n1 + n2 * n2);
  }
  // hopping -J (a1^dag a2 + a1 a2^dag) = -J (J+ + J-)
  const Matrix jp = raising(n_particles);
  h -= c.j * (jp + jp.adjoint());
  return {std::move(h), format_label("H_BH", {c.eps1, c.eps2, c.u, c.j}), ModeFrame::spatial()};
}

Complex expectation(const SectorState& state, const CollectiveObservable& obs) {
  if (!state.frame().same_as(obs.frame)) {
    throw std::invalid_argument("frame mismatch: state is in " + state.frame().label() +
                                ", observable in " + obs.frame.label());
  }
  return expectation(state, obs.matrix);
}

}  // namespace modefisher
