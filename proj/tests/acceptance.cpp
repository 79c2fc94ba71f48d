// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "modefisher/collective.hpp"
#include "modefisher/frames.hpp"
#include "modefisher/metrology.hpp"
#include "modefisher/qfi.hpp"
#include "modefisher/separability.hpp"
#include "test_support.hpp"

using namespace modefisher;
namespace mt = modefisher::testing;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

Outcome twin_fock() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int n = 2; n <= 100; n += 2) {
    const double expected = n * n / 2.0 + n;
    std::vector<double> p(n + 1, 0.0);
    p[n / 2] = 1.0;
    const double closed = qfi_diagonal_closed_form(p, n, Direction::x());
    const double spectral = qfi_spectral(make_fock_state(n / 2, n), direction_generator(n, Direction::x()));
    worst = std::max({worst, std::abs(closed - expected) / expected, std::abs(spectral - expected) / expected});
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-9 && secs < 5.0, fmt("max rel err %.3g, %.2f s", worst, secs)};
}

Outcome pure_fock() {
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int n = 0; n <= 60; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto axis = mt::random_in_plane(rng);
      const auto state = make_fock_state(k, n);
      const auto gen = direction_generator(n, axis);
      const double expected = n + 2.0 * k * (n - k);
      const auto vb = variance_bound(state, gen);
      worst = std::max({worst, std::abs(vb.fisher - expected), std::abs(vb.fisher - vb.four_variance)});
    }
  }
  return {worst <= 1e-8, fmt("max abs err %.3g", worst)};
}

Outcome closed_vs_spectral() {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  double worst_z = 0.0;
  for (int n = 2; n <= 40; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = mt::random_simplex(rng, n);
      const auto axis = mt::random_direction(rng);
      const double closed = qfi_diagonal_closed_form(p, n, axis);
      const double spectral = qfi_spectral(SectorState::diagonal(p), direction_generator(n, axis));
      worst = std::max(worst, std::abs(closed - spectral) / std::max(1.0, spectral));
      worst_z = std::max(worst_z, std::abs(qfi_diagonal_closed_form(p, n, Direction::z())));
    }
  }
  return {worst <= 1e-8 && worst_z == 0.0, fmt("max scaled err %.3g, n=z max %.3g", worst, worst_z)};
}

Outcome algebra() {
  double comm = 0.0, cas = 0.0;
  for (int n = 0; n <= 50; ++n) {
    comm = std::max(comm, commutator_residual(n));
    cas = std::max(cas, casimir_residual(n));
  }
  return {comm <= 1e-12 && cas <= 1e-10, fmt("commutator %.3g, casimir %.3g", comm, cas)};
}

SectorState random_state(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> kind(0, 3);
  switch (kind(rng)) {
    case 0:
      return SectorState::diagonal(mt::random_simplex(rng, n));
    case 1: {
      const auto p = mt::random_simplex(rng, n);
      Matrix rho = SectorState::diagonal(p).density_matrix();
      std::uniform_int_distribution<int> idx(0, n);
      const int a = idx(rng), b = idx(rng);
      if (a != b) {
        const double c = 0.5 * std::sqrt(p[a] * p[b]);
        rho(a, b) = std::polar(c, 1.1);
        rho(b, a) = std::polar(c, -1.1);
      }
      return SectorState::density(rho);
    }
    case 2:
      return SectorState::pure(mt::random_pure(rng, n));
    default:
      return SectorState::density(mt::random_density(rng, n, 3));
  }
}

Outcome separability() {
  std::mt19937_64 rng(5);
  int disagreements = 0, separable = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 8;
    const auto state = random_state(rng, n);
    const bool diagonal = is_separable(state, ModeFrame::spatial(), 1e-10).separable;
    bool all_zero = true;
    for (const auto& op : witness_monomials(n)) {
      if (std::abs(factorization_residual(state, op)) > 1e-10) {
        all_zero = false;
        break;
      }
    }
    separable += diagonal ? 1 : 0;
    disagreements += diagonal != all_zero ? 1 : 0;
  }
  return {disagreements == 0, fmt("%.0f disagreements, %.0f of 500 separable", disagreements, separable)};
}

Outcome bipartition_relativity() {
  int failures = 0;
  for (int n = 1; n <= 12; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto fock = make_fock_state(k, n);
      if (!is_separable(fock, ModeFrame::spatial()).separable) ++failures;
      for (int i = 0; i < 16; ++i) {
        if (is_separable(fock, bogolubov_frame(2.0 * std::numbers::pi * i / 16)).separable) ++failures;
      }
    }
  }
  const ModeFrame energy = bogolubov_frame(0.0);
  Vector expected = Vector::Zero(3);
  expected(2) = 1.0 / std::sqrt(2.0);
  expected(0) = -1.0 / std::sqrt(2.0);
  const Matrix got = transform_state(make_fock_state(1, 2), energy).density_matrix();
  const double dist = mt::max_abs(got - expected * expected.adjoint());
  return {failures == 0 && dist <= 1e-10, fmt("%.0f misclassified, |1,1> distance %.3g", failures, dist)};
}

Outcome frame_invariance() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 20;
    const auto state = trial % 2 == 0 ? SectorState::pure(mt::random_pure(rng, n))
                                      : SectorState::density(mt::random_density(rng, n, 3));
    const auto frame = mt::random_frame(rng);
    const auto axis = mt::random_direction(rng);
    const auto gen = direction_generator(n, axis);
    const double before = qfi_spectral(state, gen);
    const double after = qfi_spectral(transform_state(state, frame), gen.in_frame(frame));
    worst = std::max(worst, std::abs(before - after));
  }
  return {worst <= 1e-8, fmt("max abs err %.3g", worst)};
}

Outcome locality() {
  double worst = 0.0;
  for (int n = 1; n <= 30; ++n) {
    for (double theta : {0.3, 1.7, 2.9}) {
      worst = std::max(worst, max_offdiagonal(unitary_exponential(schwinger(n).jz.matrix, theta)));
      for (int i = 0; i < 8; ++i) {
        const double phi = 2.0 * std::numbers::pi * i / 8;
        const Matrix u = unitary_exponential(direction_generator(n, Direction::in_plane(phi)).matrix, theta);
        worst = std::max(worst, max_offdiagonal(transport_matrix(u, n, ModeFrame::spatial(), bogolubov_frame(phi))));
      }
    }
  }
  return {worst <= 1e-10, fmt("max off-diagonal %.3g", worst)};
}

Outcome metrology() {
  const auto start = std::chrono::steady_clock::now();
  EstimationConfig config;
  config.trials = 200;
  config.shots = 10000;
  config.seed = 42;
  const auto run = monte_carlo_estimate(make_fock_state(2, 4), Direction::x(), 0.3, config);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double ratio = run.empirical_std / run.ccrb;
  const bool ok = run.classical_fisher <= run.fisher + 1e-6 &&
                  run.empirical_std >= run.qcrb * (1.0 - 3.0 / std::sqrt(200.0)) && ratio >= 0.8 && ratio <= 1.5 &&
                  secs < 60.0;
  char buf[256];
  std::snprintf(buf, sizeof buf, "F=%.6g F_cl=%.6g std=%.4g qcrb=%.4g ccrb=%.4g std/ccrb=%.3f, %.1f s", run.fisher,
                run.classical_fisher, run.empirical_std, run.qcrb, run.ccrb, ratio, secs);
  return {ok, buf};
}

Outcome bose_hubbard_structure() {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  for (int n = 0; n <= 30; ++n) {
    const auto h0 = bose_hubbard(n, {u(rng), u(rng), u(rng), 0.0});
    worst = std::max(worst, max_offdiagonal(h0.matrix));
    const double eps = u(rng);
    const auto h1 = bose_hubbard(n, {eps, eps, 0.0, u(rng)});
    worst = std::max(worst, max_offdiagonal(h1.in_frame(bogolubov_frame(0.0)).matrix));
  }
  return {worst <= 1e-10, fmt("max off-diagonal %.3g", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"twin Fock QFI", twin_fock},
      {"pure Fock QFI", pure_fock},
      {"closed form vs spectral", closed_vs_spectral},
      {"su(2) and Casimir", algebra},
      {"separability characterization", separability},
      {"bipartition relativity", bipartition_relativity},
      {"frame invariance of QFI", frame_invariance},
      {"locality of exponentials", locality},
      {"metrology property suite", metrology},
      {"Bose-Hubbard structure", bose_hubbard_structure},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.passed ? 0 : 1;
    std::printf("[%s] AC%zu %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
