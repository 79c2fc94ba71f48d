#pragma once

#include <string_view>
#include <vector>

#include "modefisher/collective.hpp"
#include "modefisher/fock.hpp"

namespace modefisher {

// Pairs with lambda_i + lambda_j below this are dropped from the spectral sum.
inline constexpr double kSpectralCutoff = 1e-12;

enum class Classification { zero, at_or_below_shot_noise, sub_shot_noise, heisenberg_saturating };

std::string_view to_string(Classification c);

struct QfiReport {
  double fisher = 0.0;
  double phase_bound = 0.0;  // 1/sqrt(F); +inf for classification zero
  int n_particles = 0;
  Classification classification = Classification::zero;
  double heisenberg_fraction = 0.0;  // F / N^2
};

/// F = 2 sum_{ij} (l_i - l_j)^2 / (l_i + l_j) |<i|A|j>|^2 over the spectrum of rho.
/// Throws std::invalid_argument for invalid states or mismatched dimension/frame.
double qfi_spectral(const SectorState& state, const CollectiveObservable& generator);

/// Closed form for rho = sum_k p_k |k,N-k><k,N-k| and generator J_n.
/// Throws std::invalid_argument on an invalid probability vector.
double qfi_diagonal_closed_form(const std::vector<double>& p, int n_particles, const Direction& n);

/// (nx^2 + ny^2) (N + 2k(N-k)).
double qfi_pure_fock(int k, int n_particles, const Direction& n);

struct VarianceBound {
  double fisher = 0.0;
  double four_variance = 0.0;
  double gap = 0.0;  // four_variance - fisher, >= 0 up to rounding
};

VarianceBound variance_bound(const SectorState& state, const CollectiveObservable& generator);

/// Throws std::domain_error for F < 0 or F above N^2 (beyond rounding).
QfiReport classify(double fisher, int n_particles);

}  // namespace modefisher
