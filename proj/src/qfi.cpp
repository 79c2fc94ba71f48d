#include "modefisher/qfi.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace modefisher {
namespace {

constexpr double kZeroFisher = 1e-12;
constexpr double kProbabilityTol = 1e-10;

void check_compatible(const SectorState& state, const CollectiveObservable& generator) {
  if (generator.matrix.rows() != state.dimension() || generator.matrix.cols() != state.dimension()) {
    std::ostringstream msg;
    msg << "dimension mismatch: state has dimension " << state.dimension() << ", generator is "
        << generator.matrix.rows() << "x" << generator.matrix.cols();
    throw std::invalid_argument(msg.str());
  }
  if (!state.frame().same_as(generator.frame)) {
    throw std::invalid_argument("frame mismatch: state is in " + state.frame().label() +
                                ", generator in " + generator.frame.label());
  }
}

// Tolerance used when comparing F against the N and N^2 thresholds.
double threshold_slack(int n_particles) {
  const double n2 = static_cast<double>(n_particles) * n_particles;
  return 1e-9 * std::max(1.0, n2);
}

}  // namespace

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::zero:
      return "zero";
    case Classification::at_or_below_shot_noise:
      return "at-or-below-shot-noise";
    case Classification::sub_shot_noise:
      return "sub-shot-noise";
    case Classification::heisenberg_saturating:
      return "heisenberg-saturating";
  }
  return "zero";
}

double qfi_spectral(const SectorState& state, const CollectiveObservable& generator) {
  require_valid(state);
  check_compatible(state, generator);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(state.density_matrix());
  const Matrix& w = eig.eigenvectors();
  const Matrix a = w.adjoint() * generator.matrix * w;
  const Eigen::Index dim = state.dimension();

  RealVector lambda = eig.eigenvalues().cwiseMax(0.0);
  double fisher = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double sum = lambda(i) + lambda(j);
      if (i == j || sum <= kSpectralCutoff) continue;
      const double diff = lambda(i) - lambda(j);
      fisher += diff * diff / sum * std::norm(a(i, j));
    }
  }
  return 2.0 * fisher;
}

double qfi_diagonal_closed_form(const std::vector<double>& p, int n_particles, const Direction& n) {
  if (n_particles < 0 || p.size() != static_cast<std::size_t>(n_particles) + 1) {
    throw std::invalid_argument("probability vector must have N+1 entries");
  }
  double total = 0.0;
  for (double pk : p) {
    if (!std::isfinite(pk) || pk < 0.0) throw std::invalid_argument("probabilities must be nonnegative");
    total += pk;
  }
  if (!(std::abs(total - 1.0) <= kProbabilityTol)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probabilities sum to " << total << ", not 1";
    throw std::invalid_argument(msg.str());
  }

  const double weight = n.transverse_weight();
  if (weight == 0.0) return 0.0;

  const double big_n = n_particles;
  double occupation = 0.0;
  double coherence = 0.0;
  for (int k = 0; k <= n_particles; ++k) {
    occupation += p[k] * k * (big_n - k);
    if (k == n_particles) continue;
    const double pair = p[k] + p[k + 1];
    // 0/0 from two empty neighbours is taken as 0.
    if (pair <= 0.0) continue;
    coherence += p[k] * p[k + 1] / pair * (k + 1.0) * (big_n - k);
  }
  return weight * (big_n + 2.0 * occupation - 4.0 * coherence);
}

double qfi_pure_fock(int k, int n_particles, const Direction& n) {
  if (k < 0 || k > n_particles) {
    throw std::domain_error("qfi_pure_fock: k = " + std::to_string(k) + " outside 0..N = " +
                            std::to_string(n_particles));
  }
  const double big_n = n_particles;
  return n.transverse_weight() * (big_n + 2.0 * k * (big_n - k));
}

VarianceBound variance_bound(const SectorState& state, const CollectiveObservable& generator) {
  VarianceBound out;
  out.fisher = qfi_spectral(state, generator);
  const double mean = expectation(state, generator.matrix).real();
  const double second = expectation(state, generator.matrix * generator.matrix).real();
  out.four_variance = 4.0 * (second - mean * mean);
  out.gap = out.four_variance - out.fisher;
  return out;
}

QfiReport classify(double fisher, int n_particles) {
  if (n_particles < 0) throw std::domain_error("classify: N must be nonnegative");
  if (!std::isfinite(fisher) || fisher < 0.0) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "classify: Fisher information must be nonnegative, got " << fisher;
    throw std::domain_error(msg.str());
  }
  const double n = n_particles;
  const double n2 = n * n;
  const double slack = threshold_slack(n_particles);
  if (fisher > n2 + slack) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "classify: F = " << fisher << " exceeds the bound N^2 = " << n2;
    throw std::domain_error(msg.str());
  }

  QfiReport r;
  r.fisher = fisher;
  r.n_particles = n_particles;
  r.heisenberg_fraction = n2 > 0.0 ? fisher / n2 : 0.0;
  if (fisher <= kZeroFisher) {
    r.classification = Classification::zero;
    r.phase_bound = std::numeric_limits<double>::infinity();
    return r;
  }
  r.phase_bound = 1.0 / std::sqrt(fisher);
  if (fisher <= n + slack) {
    r.classification = Classification::at_or_below_shot_noise;
  } else if (fisher < n2 - slack) {
    r.classification = Classification::sub_shot_noise;
  } else {
    r.classification = Classification::heisenberg_saturating;
  }
  return r;
}

}  // namespace modefisher
