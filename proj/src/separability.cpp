#include "modefisher/separability.hpp"

#include <stdexcept>

#include "modefisher/collective.hpp"
#include "modefisher/frames.hpp"

namespace modefisher {

SeparabilityVerdict is_separable(const SectorState& state, const ModeFrame& frame, double tol) {
  require_valid(state);
  const SectorState local = transform_state(state, frame);
  const Matrix rho = local.density_matrix();
  const int n = local.n_particles();

  SeparabilityVerdict verdict;
  verdict.frame = frame;

  // Hermiticity lets the lower triangle stand for both coherences.
  int best_row = -1, best_col = -1;
  double best = 0.0;
  for (int col = 0; col <= n; ++col) {
    for (int row = 0; row <= n; ++row) {
      if (row == col) continue;
      const double mod = std::abs(rho(row, col));
      verdict.max_offdiagonal = std::max(verdict.max_offdiagonal, mod);
      if (row > col && mod > best) {
        best = mod;
        best_row = row;
        best_col = col;
      }
    }
  }
  verdict.separable = verdict.max_offdiagonal <= tol;
  if (!verdict.separable && best_row >= 0) {
    // n = N - s isolates the single coherence rho(row, col).
    const MonomialOp op{best_col, best_row, n - best_col, n - best_row};
    verdict.witness = WitnessCertificate{op, factorization_residual(local, op)};
  }
  return verdict;
}

bool is_witness_monomial(const MonomialOp& op) {
  return op.m >= 0 && op.s >= 0 && op.m < op.n && op.s < op.r && op.m + op.r == op.n + op.s;
}

Complex factorization_residual(const SectorState& state, const MonomialOp& op) {
  if (!is_witness_monomial(op)) {
    throw std::invalid_argument("monomial (" + std::to_string(op.m) + "," + std::to_string(op.n) + "," +
                                std::to_string(op.r) + "," + std::to_string(op.s) +
                                ") is outside the witness family m < n, s < r, m + r = n + s");
  }
  return expectation(state, monomial_matrix(op, state.n_particles()));
}

std::vector<MonomialOp> witness_monomials(int n_particles) {
  std::vector<MonomialOp> ops;
  for (int n = 1; n <= n_particles; ++n) {
    for (int m = 0; m < n; ++m) {
      for (int s = 0; s < n_particles; ++s) {
        const int r = n + s - m;
        if (r <= n_particles) ops.push_back({m, n, r, s});
      }
    }
  }
  return ops;
}

SpinSqueezingResult spin_squeezing_witness(const SectorState& state) {
  require_valid(state);
  const SectorState spatial = transform_state(state, ModeFrame::spatial());
  const auto j = schwinger(spatial.n_particles());
  const double jx = expectation(spatial, j.jx.matrix).real();
  const double jy = expectation(spatial, j.jy.matrix).real();
  const double jz = expectation(spatial, j.jz.matrix).real();
  const double jz2 = expectation(spatial, j.jz.matrix * j.jz.matrix).real();

  SpinSqueezingResult out;
  out.lhs = spatial.n_particles() * (jz2 - jz * jz);
  out.rhs = jx * jx + jy * jy;
  out.violated = out.lhs < out.rhs - 1e-10;
  return out;
}

}  // namespace modefisher
