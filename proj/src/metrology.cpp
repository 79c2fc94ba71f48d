#include "modefisher/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "modefisher/qfi.hpp"

namespace modefisher {
namespace {

constexpr double kNegligibleProbability = 1e-12;
constexpr double kFlatLikelihood = 1e-12;

double log_likelihood(const std::vector<double>& p, const std::vector<long>& counts) {
  double ll = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    if (counts[m] == 0) continue;
    if (p[m] <= 0.0) return -std::numeric_limits<double>::infinity();
    ll += static_cast<double>(counts[m]) * std::log(p[m]);
  }
  return ll;
}

// Log-probabilities tabulated on the estimation grid, shared by all trials.
struct LikelihoodGrid {
  std::vector<double> thetas;
  std::vector<std::vector<double>> probabilities;

  LikelihoodGrid(const PhaseModel& model, const EstimationConfig& config) {
    const int g = std::max(config.grid_points, 2);
    thetas.resize(g);
    probabilities.resize(g);
    for (int i = 0; i < g; ++i) {
      thetas[i] = config.window_lo + (config.window_hi - config.window_lo) * i / (g - 1);
      probabilities[i] = model.probabilities(thetas[i]);
    }
  }

  bool flat() const {
    double spread = 0.0;
    for (const auto& p : probabilities) {
      for (std::size_t m = 0; m < p.size(); ++m) {
        spread = std::max(spread, std::abs(p[m] - probabilities.front()[m]));
      }
    }
    return spread <= kFlatLikelihood;
  }
};

double refine(const PhaseModel& model, const std::vector<long>& counts, const EstimationConfig& config,
              const LikelihoodGrid& grid) {
  std::size_t best = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.thetas.size(); ++i) {
    const double ll = log_likelihood(grid.probabilities[i], counts);
    if (ll > best_ll) {
      best_ll = ll;
      best = i;
    }
  }
  double lo = grid.thetas[best == 0 ? 0 : best - 1];
  double hi = grid.thetas[std::min(best + 1, grid.thetas.size() - 1)];

  const auto f = [&](double t) { return log_likelihood(model.probabilities(t), counts); };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > config.refine_tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  const double theta = 0.5 * (lo + hi);
  return f(theta) >= best_ll ? theta : grid.thetas[best];
}

double classical_fisher_from(const PhaseModel& model, double theta, double dtheta) {
  if (!(dtheta > 0.0)) throw std::domain_error("classical_fisher: dtheta must be positive");
  const auto p = model.probabilities(theta);
  const auto up = model.probabilities(theta + dtheta);
  const auto down = model.probabilities(theta - dtheta);
  double fisher = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    if (p[m] <= kNegligibleProbability) continue;
    const double deriv = (up[m] - down[m]) / (2.0 * dtheta);
    fisher += deriv * deriv / p[m];
  }
  return fisher;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix64(seed ^ splitmix64(stream))) {}

std::uint64_t CounterRng::splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double CounterRng::uniform_at(std::uint64_t counter) const {
  const std::uint64_t bits = splitmix64(key_ + (counter + 1) * 0x9E3779B97F4A7C15ull);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

PhaseModel::PhaseModel(const SectorState& state, const Direction& n)
    : n_particles_(state.n_particles()), frame_(state.frame()), pure_(state.is_pure()) {
  require_valid(state);
  const auto generator = direction_generator(n_particles_, n).in_frame(frame_);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(generator.matrix);
  eigvecs_ = eig.eigenvectors();
  eigvals_ = eig.eigenvalues();
  if (pure_) {
    coeffs_ = eigvecs_.adjoint() * state.amplitudes();
  } else {
    sigma_ = eigvecs_.adjoint() * state.density_matrix() * eigvecs_;
  }
}

Vector PhaseModel::phases(double theta) const {
  Vector d(eigvals_.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::polar(1.0, theta * eigvals_(i));
  return d;
}

std::vector<double> PhaseModel::probabilities(double theta) const {
  const Vector d = phases(theta);
  std::vector<double> p(n_particles_ + 1);
  if (pure_) {
    const Vector amp = eigvecs_ * d.cwiseProduct(coeffs_);
    for (int m = 0; m <= n_particles_; ++m) p[m] = std::norm(amp(m));
    return p;
  }
  const Matrix b = eigvecs_ * d.asDiagonal();
  const Matrix bs = b * sigma_;
  for (int m = 0; m <= n_particles_; ++m) {
    p[m] = std::max(0.0, bs.row(m).dot(b.row(m)).real());
  }
  return p;
}

SectorState PhaseModel::rotated(double theta) const {
  const Vector d = phases(theta);
  if (pure_) return SectorState::pure(eigvecs_ * d.cwiseProduct(coeffs_), frame_);
  const Matrix b = eigvecs_ * d.asDiagonal();
  return SectorState::density(b * sigma_ * b.adjoint(), frame_);
}

SectorState rotate(const SectorState& state, const Direction& n, double theta) {
  return PhaseModel(state, n).rotated(theta);
}

std::vector<double> measurement_probabilities(const SectorState& state, const Direction& n, double theta) {
  return PhaseModel(state, n).probabilities(theta);
}

double classical_fisher(const SectorState& state, const Direction& n, double theta, double dtheta) {
  return classical_fisher_from(PhaseModel(state, n), theta, dtheta);
}

double maximum_likelihood_phase(const PhaseModel& model, const std::vector<long>& counts,
                                const EstimationConfig& config) {
  if (counts.size() != static_cast<std::size_t>(model.n_particles()) + 1) {
    throw std::invalid_argument("count histogram must have N+1 entries");
  }
  return refine(model, counts, config, LikelihoodGrid(model, config));
}

EstimationRun monte_carlo_estimate(const SectorState& state, const Direction& n, double theta_true,
                                   const EstimationConfig& config) {
  if (config.trials < 1) throw std::domain_error("monte_carlo_estimate: trials must be >= 1");
  if (config.shots < 1) throw std::domain_error("monte_carlo_estimate: shots must be >= 1");
  if (!(config.window_lo < config.window_hi)) throw std::domain_error("estimation window is empty");
  if (!(theta_true > config.window_lo && theta_true < config.window_hi)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "theta_true = " << theta_true << " outside the estimation window (" << config.window_lo << ", "
        << config.window_hi << ")";
    throw std::domain_error(msg.str());
  }

  const PhaseModel model(state, n);
  const LikelihoodGrid grid(model, config);
  if (grid.flat()) {
    throw NonIdentifiableError("non-identifiable configuration: outcome probabilities do not depend on theta "
                               "across the estimation window");
  }

  const auto p_true = model.probabilities(theta_true);
  std::vector<double> cdf(p_true.size());
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t m = 0; m < p_true.size(); ++m) {
    acc += p_true[m];
    cdf[m] = acc;
    if (p_true[m] > 0.0) last_positive = m;
  }

  EstimationRun run;
  run.theta_true = theta_true;
  run.n = n;
  run.trials = config.trials;
  run.shots_per_trial = config.shots;
  run.seed = config.seed;
  run.estimates.reserve(config.trials);

  std::vector<long> counts(p_true.size());
  for (int t = 0; t < config.trials; ++t) {
    CounterRng rng(config.seed, static_cast<std::uint64_t>(t));
    std::fill(counts.begin(), counts.end(), 0L);
    for (int shot = 0; shot < config.shots; ++shot) {
      const double u = rng.next();
      auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      ++counts[std::min(idx, last_positive)];
    }
    run.estimates.push_back(refine(model, counts, config, grid));
  }

  double mean = 0.0;
  for (double e : run.estimates) mean += e;
  mean /= run.trials;
  double ss = 0.0;
  for (double e : run.estimates) ss += (e - mean) * (e - mean);
  run.empirical_std = run.trials > 1 ? std::sqrt(ss / (run.trials - 1)) : 0.0;

  const auto generator = direction_generator(state.n_particles(), n).in_frame(state.frame());
  run.fisher = qfi_spectral(state, generator);
  run.classical_fisher = classical_fisher_from(model, theta_true, 1e-5);
  const double shots = config.shots;
  const double inf = std::numeric_limits<double>::infinity();
  run.qcrb = run.fisher > 0.0 ? 1.0 / std::sqrt(shots * run.fisher) : inf;
  run.ccrb = run.classical_fisher > 0.0 ? 1.0 / std::sqrt(shots * run.classical_fisher) : inf;
  return run;
}

}  // namespace modefisher
