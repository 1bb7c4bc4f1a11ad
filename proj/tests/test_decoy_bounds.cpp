#include <stdexcept>
#include <cmath>
#include <random>

#include "doctest.h"
#include "satqkd/qkd_rates.hpp"
#include "support/photon_sim.hpp"

using namespace satqkd;
using doctest::Approx;

namespace {

ProtocolParams wcp() { return default_params(Protocol::DecoyWCP, LinkDirection::Downlink); }

}  // namespace

TEST_CASE("no detections give no key") {
  const DecoyObservations zero;
  const auto k = wcp_key_length(zero, wcp());
  CHECK(k.key.bits == 0.0);
  CHECK(k.key.status == KeyStatus::NoSignal);
}

TEST_CASE("intensity ordering is enforced") {
  DecoyObservations o;
  o.n_X = {100, 10, 1};
  o.n_Z = o.n_X;
  CHECK_THROWS(decoy_bounds(o, {0.15, 0.1, 0.06}, {0.7, 0.2, 0.1}, 1e-9));
  CHECK_THROWS(decoy_bounds(o, {0.5, 0.0, 0.1}, {0.7, 0.2, 0.1}, 1e-9));
  CHECK_NOTHROW(decoy_bounds(o, {0.5, 0.1, 2e-4}, {0.7, 0.2, 0.1}, 1e-9));
}

TEST_CASE("phase error correction closed form") {
  const double a = 1e-9, b = 0.03, c = 1e6, d = 2e6;
  const double expect = std::sqrt((c + d) * (1 - b) * b / (c * d * std::log(2.0)) *
                                  std::log2((c + d) / (c * d * (1 - b) * b) * 441.0 / (a * a)));
  CHECK(phase_error_correction(a, b, c, d) == Approx(expect).epsilon(1e-14));
}

TEST_CASE("noiseless large blocks approach the single-photon share") {
  auto p = wcp();
  LinkScenario s;
  const Channel ch{0.0, 0.0};
  const double eta = 1.0, eta_sys = system_efficiency(s, eta);
  const auto o = expected_observations(eta, ch, s, p, 1e15);
  const auto key = wcp_key_length(o.decoy, p);
  REQUIRE(key.key.status == KeyStatus::Ok);

  std::mt19937_64 rng(2718);
  const auto sim = testing::simulate_wcp(1e7, p.intensities, p.intensity_probs, p.basis_prob,
                                         eta_sys, 0.0, 0.0, rng);
  const double share = sim.true_single_X / sim.obs.total_X();
  // Analytic share from the Poisson photon-number model.
  double single = 0.0, all = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double mu = p.intensities[k];
    single += p.intensity_probs[k] * mu * std::exp(-mu) * eta_sys;
    all += p.intensity_probs[k] * -std::expm1(-mu * eta_sys);
  }
  CHECK(share == Approx(single / all).epsilon(0.01));
  const double n_X = o.decoy.total_X();
  CHECK(key.bounds.s_X1 / n_X == Approx(share).epsilon(0.05));
  CHECK(key.key.bits / n_X == Approx(share).epsilon(0.05));
  CHECK(key.bounds.s_X1 <= single / all * n_X * (1 + 1e-12));
}

TEST_CASE("single-photon lower bound holds in simulation") {
  auto p = wcp();
  std::mt19937_64 rng(31415);
  int valid = 0, informative = 0;
  constexpr int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const auto sim = testing::simulate_wcp(2e8, p.intensities, p.intensity_probs, p.basis_prob,
                                           0.02, 1e-5, 0.02, rng);
    const auto b = decoy_bounds(sim.obs, p.intensities, p.intensity_probs, p.eps_sec);
    valid += b.s_X1 <= sim.true_single_X;
    informative += b.s_X1 > 0.5 * sim.true_single_X;
  }
  CHECK(valid >= 999);
  CHECK(informative == trials);
}

TEST_CASE("heavy background saturates the phase error") {
  auto p = wcp();
  LinkScenario s;
  const auto o = expected_observations(1e-3, Channel{0.5, 0.02}, s, p, 1e10);
  const auto k = wcp_key_length(o.decoy, p);
  CHECK(k.key.bits == 0.0);
  CHECK(k.key.status != KeyStatus::Ok);
}
