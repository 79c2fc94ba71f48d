#pragma once

#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "modefisher/collective.hpp"
#include "modefisher/fock.hpp"

namespace modefisher {

/// Counter-based uniform generator.  Draw number `i` of stream `s` under key
/// `seed` is
///   key  = splitmix64(seed ^ splitmix64(s))
///   bits = splitmix64(key + (i + 1) * 0x9E3779B97F4A7C15)
///   u    = (bits >> 11) * 2^-53
/// where splitmix64 is the standard SplitMix64 finalizer.  Any draw can be
/// recomputed independently of the others.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  double uniform_at(std::uint64_t counter) const;
  double next() { return uniform_at(counter_++); }

  static std::uint64_t splitmix64(std::uint64_t z);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Number-counting readout after the rotation exp(i theta J_n).  J_n is
/// diagonalized once; p_m(theta) then costs O(N^2) for pure inputs.
class PhaseModel {
 public:
  PhaseModel(const SectorState& state, const Direction& n);

  int n_particles() const { return n_particles_; }
  std::vector<double> probabilities(double theta) const;
  SectorState rotated(double theta) const;

 private:
  Vector phases(double theta) const;

  int n_particles_;
  ModeFrame frame_;
  bool pure_;
  Matrix eigvecs_;
  RealVector eigvals_;
  Vector coeffs_;  // W^dag psi (pure)
  Matrix sigma_;   // W^dag rho W (mixed)
};

/// rho -> U rho U^dag with U = exp(i theta J_n); J_n is taken in the state's frame.
SectorState rotate(const SectorState& state, const Direction& n, double theta);

/// p_m(theta) = <m, N-m| U rho U^dag |m, N-m> in the state's frame.
std::vector<double> measurement_probabilities(const SectorState& state, const Direction& n,
                                              double theta);

/// Fisher information of the counting distribution by central differences.
/// Outcomes with p_m <= 1e-12 are skipped.
double classical_fisher(const SectorState& state, const Direction& n, double theta,
                        double dtheta = 1e-5);

class NonIdentifiableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EstimationConfig {
  int trials = 200;
  int shots = 10000;
  std::uint64_t seed = 42;
  double window_lo = 0.0;
  double window_hi = std::numbers::pi / 2;
  int grid_points = 512;
  double refine_tol = 1e-8;
};

struct EstimationRun {
  double theta_true = 0.0;
  Direction n = Direction::x();
  int trials = 0;
  int shots_per_trial = 0;
  std::vector<double> estimates;
  double empirical_std = 0.0;
  double fisher = 0.0;
  double classical_fisher = 0.0;
  double qcrb = 0.0;  // 1/sqrt(S F)
  double ccrb = 0.0;  // 1/sqrt(S F_cl)
  std::uint64_t seed = 0;
};

/// Maximum-likelihood estimate of a single integer count histogram: grid scan
/// over the window, then golden-section refinement around the best cell.
double maximum_likelihood_phase(const PhaseModel& model, const std::vector<long>& counts,
                                const EstimationConfig& config);

/// Monte-Carlo phase estimation.  Trial t draws its shots from stream t of the
/// counter generator, so results depend only on (inputs, seed).
/// Throws NonIdentifiableError when p(theta) is flat across the window and
/// std::domain_error for theta outside the window or M, S < 1.
EstimationRun monte_carlo_estimate(const SectorState& state, const Direction& n, double theta_true,
                                   const EstimationConfig& config = {});

}  // namespace modefisher
