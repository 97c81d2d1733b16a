// Copyright 2026 The seqdisc developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "seqdisc/montecarlo.hpp"
#include "test_helpers.hpp"

using Catch::Approx;
using namespace seqdisc;

TEST_CASE("deterministic given the seed, for any worker count", "[montecarlo]") {
  const auto p = ProtocolParams::equal_weight(0.25, 0.5);
  const auto a = run_trials(p, 200000, 99);
  const auto b = run_trials(p, 200000, 99);
  const auto c = run_trials(p, 200000, 99, 4);
  REQUIRE(a.counts == b.counts);
  REQUIRE(a.counts == c.counts);
  REQUIRE(a.n_trials == 200000);

  std::uint64_t total = 0;
  for (int i = 0; i < 2; ++i)
    for (int kb = 0; kb < 3; ++kb)
      for (int kc = 0; kc < 3; ++kc) total += a.counts[i][kb][kc];
  REQUIRE(total == a.n_trials);

  const auto other_seed = run_trials(p, 200000, 100);
  REQUIRE(a.counts != other_seed.counts);
}

TEST_CASE("von Neumann limit discriminates every trial", "[montecarlo]") {
  const auto p = ProtocolParams::equal_weight(0.0, 0.0);
  const auto stats = run_trials(p, 100000, 5);
  const auto emp = empirical_probs(stats);
  REQUIRE(emp.p_b == 1.0);
  REQUIRE(emp.p_c == 1.0);
  REQUIRE(emp.p_bc == 1.0);
  REQUIRE(verify_unambiguity(stats).ok);
}

TEST_CASE("empirical probabilities track the analytic values", "[montecarlo]") {
  const auto p = ProtocolParams::equal_weight(0.25, 0.5);
  const auto stats = run_trials(p, 1000000, 42);
  const auto emp = empirical_probs(stats);

  const double sigma_b = std::sqrt(0.5 * 0.5 / 1e6);
  REQUIRE(std::abs(emp.p_b - 0.5) < 3.0 * sigma_b);
  REQUIRE(std::abs(emp.p_c - 0.5) < 3.0 * sigma_b);
  const double sigma_bc = std::sqrt(0.25 * 0.75 / 1e6);
  REQUIRE(std::abs(emp.p_bc - 0.25) < 3.0 * sigma_bc);

  REQUIRE(verify_unambiguity(stats).ok);
}

TEST_CASE("collapse lands on phi_i for every branch", "[montecarlo]") {
  std::mt19937 rng(61);
  for (int k = 0; k < 10; ++k) {
    const auto p = test_helpers::random_valid_params(rng);
    auto [phi1, phi2] = prepare_pair(p.t);
    for (int prepared : {1, 2}) {
      const auto& phi = prepared == 1 ? phi1 : phi2;
      for (const auto& branch : bob_measurement_branches(p, prepared)) {
        const double fidelity = std::abs(branch.post_state.inner(phi));
        REQUIRE(fidelity == Approx(1.0).margin(1e-10));
      }
    }
  }
}

TEST_CASE("measurement branch probabilities match the failure weights", "[montecarlo]") {
  const auto p = ProtocolParams::equal_weight(0.25, 0.5);
  const auto branches = bob_measurement_branches(p, 1);
  REQUIRE(branches.size() == 2);  // outcomes 0 and 1; outcome 2 has probability zero
  REQUIRE(branches[0].outcome == 0);
  REQUIRE(branches[0].prob == Approx(p.q1b).margin(1e-12));
  REQUIRE(branches[1].outcome == 1);
  REQUIRE(branches[1].prob == Approx(1.0 - p.q1b).margin(1e-12));
}

TEST_CASE("empirical_probs bookkeeping", "[montecarlo]") {
  SECTION("all-conclusive table") {
    TrialStats stats;
    stats.counts[0][1][1] = 500;
    stats.counts[1][2][2] = 500;
    stats.n_trials = 1000;
    const auto emp = empirical_probs(stats);
    REQUIRE(emp.p_b == 1.0);
    REQUIRE(emp.p_c == 1.0);
    REQUIRE(emp.p_bc == 1.0);
  }
  SECTION("hand-built table with half successes") {
    TrialStats stats;
    stats.counts[0][1][1] = 250;
    stats.counts[0][0][0] = 250;
    stats.counts[1][2][2] = 250;
    stats.counts[1][0][0] = 250;
    stats.n_trials = 1000;
    const auto emp = empirical_probs(stats);
    REQUIRE(emp.p_b == Approx(0.5).margin(1e-15));
    REQUIRE(emp.p_c == Approx(0.5).margin(1e-15));
    REQUIRE(emp.p_bc == Approx(0.5).margin(1e-15));
    REQUIRE(emp.se_b == Approx(std::sqrt(0.25 / 1000)).margin(1e-15));
  }
  SECTION("empty stats are rejected") {
    REQUIRE_THROWS_AS(empirical_probs(TrialStats{}), std::invalid_argument);
  }
}

TEST_CASE("verify_unambiguity", "[montecarlo]") {
  SECTION("empty stats pass") {
    REQUIRE(verify_unambiguity(TrialStats{}).ok);
  }
  SECTION("corrupted table is flagged") {
    TrialStats stats;
    stats.counts[0][2][0] = 1;  // prepared 1, Bob reports 2
    stats.n_trials = 1;
    const auto check = verify_unambiguity(stats);
    REQUIRE_FALSE(check.ok);
    REQUIRE(check.violations == 1);
  }
  SECTION("charlie misidentification is flagged") {
    TrialStats stats;
    stats.counts[1][2][1] = 3;  // prepared 2, Charlie reports 1
    stats.n_trials = 3;
    REQUIRE(verify_unambiguity(stats).violations == 3);
  }
  SECTION("simulated runs never misidentify") {
    std::mt19937 rng(67);
    for (int k = 0; k < 5; ++k) {
      const auto p = test_helpers::random_valid_params(rng);
      REQUIRE(verify_unambiguity(run_trials(p, 50000, 1000 + k)).ok);
    }
  }
}

TEST_CASE("unequal failure weights reproduce the analytic joint probability", "[montecarlo]") {
  // the symmetry-broken optimum at s=0.5: one prepared state is ignored
  const double s = 0.5;
  const ProtocolParams p{s, std::sqrt(s), s, 1.0, s, 1.0};
  const std::uint64_t n = 400000;
  const auto emp = empirical_probs(run_trials(p, n, 83));

  const double ana_b = success_prob_bob(p);      // 1 - (q1b + q2b)/2 = 0.25
  const double ana_c = success_prob_charlie(p);  // 0.25
  const double ana_bc = joint_success_prob(p);   // (1-q1b)(1-q1c)/2 = 0.125
  auto sigma = [n](double prob) { return std::sqrt(prob * (1.0 - prob) / n); };
  REQUIRE(std::abs(emp.p_b - ana_b) < 4.0 * sigma(ana_b));
  REQUIRE(std::abs(emp.p_c - ana_c) < 4.0 * sigma(ana_c));
  REQUIRE(std::abs(emp.p_bc - ana_bc) < 4.0 * sigma(ana_bc));
}

TEST_CASE("statistical acceptance at several parameter points", "[montecarlo]") {
  struct Point {
    double s, t;
    std::uint64_t seed;
  };
  const Point points[] = {
      {0.25, 0.5, 11}, {0.09, 0.3, 12}, {0.5, 0.8, 13}, {0.04, 0.2, 14}, {0.36, 0.6, 15}};
  const std::uint64_t n = 1000000;
  for (const auto& pt : points) {
    const auto p = ProtocolParams::equal_weight(pt.s, pt.t);
    const auto stats = run_trials(p, n, pt.seed, 2);
    const auto emp = empirical_probs(stats);
    const double r = p.r();
    const double ana_b = 1.0 - r, ana_c = 1.0 - pt.t, ana_bc = (1.0 - r) * (1.0 - pt.t);
    auto sigma = [n](double prob) { return std::sqrt(prob * (1.0 - prob) / n); };
    REQUIRE(std::abs(emp.p_b - ana_b) < 4.0 * sigma(ana_b));
    REQUIRE(std::abs(emp.p_c - ana_c) < 4.0 * sigma(ana_c));
    REQUIRE(std::abs(emp.p_bc - ana_bc) < 4.0 * sigma(ana_bc));
    REQUIRE(verify_unambiguity(stats).ok);
  }
}
