#pragma once

#include <vector>

#include "modefisher/fock.hpp"
#include "modefisher/mode_frame.hpp"

namespace modefisher {

/// Change of Fock basis induced by a mode frame.  Column k holds the
/// amplitudes of the spatial state |k, N-k> over the frame's Fock basis
/// |j, N-j>_b, obtained by expanding
///   (a1^dag)^k (a2^dag)^(N-k) |0> / sqrt(k! (N-k)!)
/// with a_j^dag = sum_i U(i,j) b_i^dag.
///
/// The expansion is carried out by applying one creation operator at a time,
/// so only sqrt(integer) factors appear and the cost is O(N^3).
Matrix frame_change_unitary(int n_particles, const ModeFrame& frame);

/// Column k of frame_change_unitary().  Throws std::domain_error on k out of range.
Vector fock_expansion_coefficients(int k, int n_particles, const ModeFrame& frame);

/// Re-express `state` in the Fock basis of `target`.  The state can already be
/// tagged with any frame; the relative mixing is used.
SectorState transform_state(const SectorState& state, const ModeFrame& target);

/// Operator matrix given in basis `from` re-expressed in basis `to`: V M V^dag.
Matrix transport_matrix(const Matrix& m, int n_particles, const ModeFrame& from, const ModeFrame& to);

}  // namespace modefisher
