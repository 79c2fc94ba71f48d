#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "modefisher/collective.hpp"
#include "modefisher/metrology.hpp"
#include "modefisher/qfi.hpp"
#include "test_support.hpp"

using namespace modefisher;
namespace mt = modefisher::testing;

namespace {

double density_distance(const SectorState& a, const SectorState& b) {
  return mt::max_abs(a.density_matrix() - b.density_matrix());
}

}  // namespace

TEST_CASE("z rotation only attaches phases to Fock states") {
  const int n = 6;
  const double theta = 0.37;
  for (int k = 0; k <= n; ++k) {
    const auto rotated = rotate(make_fock_state(k, n), Direction::z(), theta);
    REQUIRE(rotated.is_pure());
    const Vector& c = rotated.amplitudes();
    const Complex expected = std::polar(1.0, theta * (2.0 * k - n) / 2.0);
    CHECK(std::abs(c(k) - expected) <= 1e-12);
    CHECK(std::abs(c.norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("theta = 0 is the identity") {
  std::mt19937_64 rng(2);
  const auto s = SectorState::density(mt::random_density(rng, 5, 3));
  CHECK(density_distance(rotate(s, mt::random_direction(rng), 0.0), s) <= 1e-12);
}

TEST_CASE("x rotation by pi swaps the poles") {
  for (int n = 1; n <= 8; ++n) {
    const auto r = rotate(make_fock_state(n, n), Direction::x(), std::numbers::pi);
    CHECK(std::abs(std::abs(r.amplitudes()(0)) - 1.0) <= 1e-10);
  }
}

TEST_CASE("rotations about a fixed axis compose") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial;
    const auto s = SectorState::pure(mt::random_pure(rng, n));
    const auto axis = mt::random_direction(rng);
    const double a = 0.4 + 0.1 * trial, b = 1.1 - 0.05 * trial;
    CHECK(density_distance(rotate(rotate(s, axis, a), axis, b), rotate(s, axis, a + b)) <= 1e-10);
  }
}

TEST_CASE("pure and mixed paths in the phase model agree") {
  std::mt19937_64 rng(5);
  const auto psi = mt::random_pure(rng, 7);
  const auto pure = SectorState::pure(psi);
  const auto mixed = SectorState::density(psi * psi.adjoint());
  const auto axis = mt::random_direction(rng);
  const auto p1 = measurement_probabilities(pure, axis, 0.8);
  const auto p2 = measurement_probabilities(mixed, axis, 0.8);
  for (std::size_t m = 0; m < p1.size(); ++m) CHECK(std::abs(p1[m] - p2[m]) <= 1e-12);
  CHECK(density_distance(rotate(pure, axis, 0.8), rotate(mixed, axis, 0.8)) <= 1e-12);
}

TEST_CASE("counting probabilities examples") {
  const auto pz = measurement_probabilities(make_fock_state(2, 4), Direction::z(), 1.3);
  for (int m = 0; m <= 4; ++m) CHECK(pz[m] == doctest::Approx(m == 2 ? 1.0 : 0.0));

  // |1,0> under exp(i theta Jx): cos^2(theta/2), sin^2(theta/2)
  const double theta = 0.9;
  const auto p1 = measurement_probabilities(make_fock_state(1, 1), Direction::x(), theta);
  CHECK(std::abs(p1[1] - std::pow(std::cos(theta / 2), 2)) <= 1e-12);
  CHECK(std::abs(p1[0] - std::pow(std::sin(theta / 2), 2)) <= 1e-12);

  // |1,1> under exp(i pi/2 Jx): the middle outcome is suppressed
  const auto p2 = measurement_probabilities(make_fock_state(1, 2), Direction::x(), std::numbers::pi / 2);
  CHECK(std::abs(p2[0] - 0.5) <= 1e-12);
  CHECK(std::abs(p2[1]) <= 1e-12);
  CHECK(std::abs(p2[2] - 0.5) <= 1e-12);
}

TEST_CASE("counting probabilities against a direct matrix exponential") {
  // spin-1 Jx in the ascending basis, exponentiated by a Taylor series
  const double s = 1.0 / std::sqrt(2.0);
  Matrix jx = Matrix::Zero(3, 3);
  jx(0, 1) = jx(1, 0) = jx(1, 2) = jx(2, 1) = s;
  const double theta = 0.65;
  Matrix u = Matrix::Identity(3, 3);
  Matrix term = Matrix::Identity(3, 3);
  for (int i = 1; i < 40; ++i) {
    term = term * jx * Complex(0.0, theta) / static_cast<double>(i);
    u += term;
  }
  std::mt19937_64 rng(6);
  const Vector psi = mt::random_pure(rng, 2);
  const Vector out = u * psi;
  const auto p = measurement_probabilities(SectorState::pure(psi), Direction::x(), theta);
  for (int m = 0; m <= 2; ++m) CHECK(std::abs(p[m] - std::norm(out(m))) <= 1e-12);
}

TEST_CASE("classical Fisher information") {
  CHECK(std::abs(classical_fisher(make_fock_state(2, 4), Direction::z(), 0.3)) <= 1e-12);
  CHECK(classical_fisher(make_fock_state(0, 1), Direction::x(), 0.7) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(classical_fisher(make_fock_state(0, 1), Direction::x(), 0.7, 0.0), std::domain_error);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 10;
    const auto state = trial % 2 == 0 ? SectorState::pure(mt::random_pure(rng, n))
                                      : SectorState::density(mt::random_density(rng, n, 2));
    const auto axis = mt::random_direction(rng);
    const double f = qfi_spectral(state, direction_generator(n, axis));
    CHECK(classical_fisher(state, axis, 0.2 + 0.03 * trial) <= f + 1e-6);
  }
}

TEST_CASE("twin Fock counting saturates the quantum bound away from theta = 0") {
  const int n = 4;
  const double f = qfi_spectral(make_fock_state(2, 4), direction_generator(n, Direction::x()));
  const double fcl = classical_fisher(make_fock_state(2, 4), Direction::x(), 0.3);
  CHECK(fcl <= f + 1e-6);
  CHECK(fcl > 0.5 * f);
}

TEST_CASE("counter generator") {
  CHECK(CounterRng::splitmix64(0) == 0xE220A8397B1DCDAFull);
  CounterRng a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const double u = a.next();
    CHECK(u == b.uniform_at(i));
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u != c.uniform_at(i));
    CHECK(u != d.uniform_at(i));
  }
  double mean = 0.0;
  CounterRng e(1, 0);
  for (int i = 0; i < 100000; ++i) mean += e.next();
  CHECK(mean / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("maximum likelihood recovers the phase from exact histograms") {
  const PhaseModel model(make_fock_state(2, 4), Direction::x());
  const double theta = 0.6;
  const auto p = model.probabilities(theta);
  std::vector<long> counts(p.size());
  for (std::size_t m = 0; m < p.size(); ++m) counts[m] = std::lround(p[m] * 1e9);
  CHECK(std::abs(maximum_likelihood_phase(model, counts, {}) - theta) <= 1e-6);
  CHECK_THROWS_AS(maximum_likelihood_phase(model, {1, 2}, {}), std::invalid_argument);
}

TEST_CASE("Monte-Carlo estimation is deterministic and near the bound") {
  EstimationConfig config;
  config.trials = 40;
  config.shots = 2000;
  const auto twin = make_fock_state(2, 4);
  const auto a = monte_carlo_estimate(twin, Direction::x(), 0.3, config);
  const auto b = monte_carlo_estimate(twin, Direction::x(), 0.3, config);
  REQUIRE(a.estimates.size() == 40);
  CHECK(a.estimates == b.estimates);
  CHECK(a.empirical_std == b.empirical_std);
  CHECK(a.fisher == doctest::Approx(12.0));
  CHECK(a.qcrb == doctest::Approx(1.0 / std::sqrt(2000 * 12.0)));
  CHECK(a.empirical_std > 0.5 * a.ccrb);
  CHECK(a.empirical_std < 2.0 * a.ccrb);

  config.seed = 7;
  const auto c = monte_carlo_estimate(twin, Direction::x(), 0.3, config);
  CHECK(c.estimates != a.estimates);
}

TEST_CASE("Monte-Carlo error paths") {
  const auto twin = make_fock_state(2, 4);
  EstimationConfig config;
  config.trials = 2;
  config.shots = 10;
  CHECK_THROWS_AS(monte_carlo_estimate(twin, Direction::z(), 0.3, config), NonIdentifiableError);
  CHECK_THROWS_AS(monte_carlo_estimate(twin, Direction::x(), 0.0, config), std::domain_error);
  CHECK_THROWS_AS(monte_carlo_estimate(twin, Direction::x(), 2.0, config), std::domain_error);
  auto bad = config;
  bad.trials = 0;
  CHECK_THROWS_AS(monte_carlo_estimate(twin, Direction::x(), 0.3, bad), std::domain_error);
  bad = config;
  bad.shots = 0;
  CHECK_THROWS_AS(monte_carlo_estimate(twin, Direction::x(), 0.3, bad), std::domain_error);
}
