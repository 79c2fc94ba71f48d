#pragma once

#include <optional>
#include <vector>

#include "modefisher/fock.hpp"
#include "modefisher/mode_frame.hpp"

namespace modefisher {

struct WitnessCertificate {
  MonomialOp op;
  Complex residual;
};

struct SeparabilityVerdict {
  bool separable = true;
  ModeFrame frame;
  double max_offdiagonal = 0.0;
  std::optional<WitnessCertificate> witness;
};

/// Separable with respect to the bipartition of `frame` iff the density
/// matrix is diagonal in that frame's Fock basis (within `tol`).
/// When it is not, `witness` carries the local monomial whose expectation
/// is nonzero.
SeparabilityVerdict is_separable(const SectorState& state, const ModeFrame& frame,
                                 double tol = kDefaultTolerance);

/// True for m < n, s < r, m + r = n + s.
bool is_witness_monomial(const MonomialOp& op);

/// Tr[rho A1 A2] in the state's own frame.  Every separable state gives 0.
/// Throws std::invalid_argument for monomials outside the witness family.
Complex factorization_residual(const SectorState& state, const MonomialOp& op);

/// The witness monomials with all exponents <= N.
std::vector<MonomialOp> witness_monomials(int n_particles);

struct SpinSqueezingResult {
  double lhs = 0.0;  // N (Delta Jz)^2
  double rhs = 0.0;  // <Jx>^2 + <Jy>^2
  bool violated = false;
  // The inequality was derived for distinguishable particles; for identical
  // bosons a violation does not certify mode entanglement.
  bool identical_particle_caveat = true;
};

/// Evaluated with the spatial collective operators; the state is brought
/// into the spatial frame first.
SpinSqueezingResult spin_squeezing_witness(const SectorState& state);

}  // namespace modefisher
