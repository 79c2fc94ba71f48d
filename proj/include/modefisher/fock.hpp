#pragma once

#include <string>
#include <variant>
#include <vector>

#include "modefisher/linalg.hpp"
#include "modefisher/mode_frame.hpp"

namespace modefisher {

/// A state of N bosons in two modes.  Index k of the payload is the
/// occupation of mode 1 of `frame()`, i.e. basis vector |k, N-k>, k = 0..N.
///
/// Construction does not validate; use validate_state() to check the
/// normalization / positivity invariants.
class SectorState {
 public:
  static SectorState pure(Vector amplitudes, ModeFrame frame = ModeFrame::spatial());
  static SectorState density(Matrix rho, ModeFrame frame = ModeFrame::spatial());
  // Density matrix sum_k p_k |k,N-k><k,N-k|.
  static SectorState diagonal(const std::vector<double>& p, ModeFrame frame = ModeFrame::spatial());

  int n_particles() const { return n_particles_; }
  Eigen::Index dimension() const { return n_particles_ + 1; }
  bool is_pure() const { return std::holds_alternative<Vector>(payload_); }
  const ModeFrame& frame() const { return frame_; }

  // Valid only when is_pure().
  const Vector& amplitudes() const;
  // rho for mixed states, |psi><psi| for pure ones.
  Matrix density_matrix() const;

  SectorState with_frame(ModeFrame frame) const;

 private:
  SectorState(int n, std::variant<Vector, Matrix> payload, ModeFrame frame);

  int n_particles_;
  std::variant<Vector, Matrix> payload_;
  ModeFrame frame_;
};

/// Normally ordered local product (a1^dag)^m a1^n (a2^dag)^r a2^s.
struct MonomialOp {
  int m = 0;
  int n = 0;
  int r = 0;
  int s = 0;

  bool conserves_number() const { return m - n == s - r; }
  MonomialOp adjoint() const { return {n, m, s, r}; }
};

/// |k, N-k> in the spatial frame.  Throws std::domain_error unless 0 <= k <= N.
SectorState make_fock_state(int k, int n_particles);

/// Matrix M(l,k) = <l, N-l| A1 A2 |k, N-k>.  Monomials that change the total
/// particle number leave the sector and give the zero matrix.
Matrix monomial_matrix(const MonomialOp& op, int n_particles);

/// Single-mode coefficient: (a^dag)^c a^d |q> = coeff |q-d+c>.
/// Computed as the sqrt of a product of integers, never as a factorial ratio.
double ladder_coefficient(int q, int create, int annihilate);

/// Tr[rho M] or <psi|M|psi>.  Throws std::invalid_argument on a dimension
/// mismatch.  Callers are responsible for frame consistency; the observable
/// overload in collective.hpp checks it.
Complex expectation(const SectorState& state, const Matrix& m);

/// Names of violated invariants: "dimension", "normalization",
/// "hermiticity", "trace", "positivity".  Empty when the state is valid.
std::vector<std::string> validate_state(const SectorState& state, double tol = kDefaultTolerance);

// Throws std::invalid_argument listing the violations, if any.
void require_valid(const SectorState& state, double tol = kDefaultTolerance);

}  // namespace modefisher
