#include "modefisher/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "modefisher/collective.hpp"
#include "modefisher/frames.hpp"
#include "modefisher/qfi.hpp"
#include "modefisher/separability.hpp"

namespace modefisher {
namespace {

std::string describe(double value) {
  std::ostringstream s;
  s.precision(3);
  s << value;
  return s.str();
}

std::vector<double> random_simplex(std::mt19937_64& rng, int n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n + 1);
  double total = 0.0;
  for (double& x : p) total += (x = e(rng));
  for (double& x : p) x /= total;
  return p;
}

ModeFrame random_frame(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double t = std::acos(std::sqrt(unit(rng)));
  const Complex a = std::polar(std::cos(t), angle(rng));
  const Complex b = std::polar(std::sin(t), angle(rng));
  const Complex g = std::polar(1.0, angle(rng));
  Eigen::Matrix2cd u;
  u << a, b, -g * std::conj(b), g * std::conj(a);
  return ModeFrame::custom(u);
}

}  // namespace

int SelftestResult::passed() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.passed; }));
}

int SelftestResult::failed() const { return static_cast<int>(checks.size()) - passed(); }

SelftestResult run_selftest() {
  SelftestResult result;
  const auto add = [&](std::string name, bool ok, std::string detail) {
    result.checks.push_back({std::move(name), ok, std::move(detail)});
  };
  std::mt19937_64 rng(20240611);

  double su2 = 0.0, casimir = 0.0;
  for (int n = 0; n <= 50; ++n) {
    su2 = std::max(su2, commutator_residual(n));
    casimir = std::max(casimir, casimir_residual(n));
  }
  add("su2_commutators", su2 <= 1e-12, "max residual " + describe(su2));
  add("casimir", casimir <= 1e-10, "max residual " + describe(casimir));

  double twin = 0.0;
  for (int n = 2; n <= 100; n += 2) {
    const double expected = n * n / 2.0 + n;
    const double spectral = qfi_spectral(make_fock_state(n / 2, n), direction_generator(n, Direction::x()));
    twin = std::max(twin, std::abs(spectral - expected) / expected);
  }
  add("twin_fock_qfi", twin <= 1e-9, "max relative error " + describe(twin));

  double oracle = 0.0;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int n = 2; n <= 40; n += 2) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto p = random_simplex(rng, n);
      const double x = gauss(rng), y = gauss(rng), z = gauss(rng);
      const double norm = std::sqrt(x * x + y * y + z * z);
      const Direction dir(x / norm, y / norm, z / norm);
      const double closed = qfi_diagonal_closed_form(p, n, dir);
      const double spectral = qfi_spectral(SectorState::diagonal(p), direction_generator(n, dir));
      oracle = std::max(oracle, std::abs(closed - spectral) / std::max(1.0, closed));
    }
  }
  add("closed_form_vs_spectral", oracle <= 1e-8, "max scaled difference " + describe(oracle));

  double invariance = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial;
    const auto p = random_simplex(rng, n);
    const SectorState state = SectorState::diagonal(p);
    const ModeFrame frame = random_frame(rng);
    const auto generator = direction_generator(n, Direction::in_plane(0.4 * trial));
    const double before = qfi_spectral(state, generator);
    const double after = qfi_spectral(transform_state(state, frame), generator.in_frame(frame));
    invariance = std::max(invariance, std::abs(before - after));
  }
  add("frame_invariance", invariance <= 1e-8, "max difference " + describe(invariance));

  int relativity_failures = 0;
  for (int n = 1; n <= 12; ++n) {
    for (int k = 0; k <= n; ++k) {
      const SectorState fock = make_fock_state(k, n);
      if (!is_separable(fock, ModeFrame::spatial()).separable) ++relativity_failures;
      for (int i = 0; i < 16; ++i) {
        if (is_separable(fock, bogolubov_frame(2.0 * std::numbers::pi * i / 16)).separable) ++relativity_failures;
      }
    }
  }
  add("bipartition_relativity", relativity_failures == 0, std::to_string(relativity_failures) + " failures");

  double locality = 0.0;
  for (int n = 1; n <= 20; ++n) {
    const double phi = 0.37 * n;
    const auto u = unitary_exponential(direction_generator(n, Direction::in_plane(phi)).matrix, 0.7);
    locality = std::max(locality, max_offdiagonal(transport_matrix(u, n, ModeFrame::spatial(), bogolubov_frame(phi))));
    locality = std::max(locality, max_offdiagonal(unitary_exponential(schwinger(n).jz.matrix, 0.7)));
  }
  add("exponential_locality", locality <= 1e-10, "max off-diagonal " + describe(locality));

  return result;
}

}  // namespace modefisher
