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

#include "seqdisc/correlations.hpp"
#include "test_helpers.hpp"

using Catch::Approx;
using namespace seqdisc;

TEST_CASE("tangles", "[correlations]") {
  SECTION("product pure state at r=t=1") {
    const auto ts = tangles(1.0, 1.0);
    REQUIRE(ts.tau_abd == 0.0);
    REQUIRE(ts.tau_a == 0.0);
    REQUIRE(ts.tau_b == 0.0);
    REQUIRE(ts.tau_d == 0.0);
  }
  SECTION("fully orthogonal point r=t=0") {
    const auto ts = tangles(0.0, 0.0);
    REQUIRE(ts.tau_abd == 1.0);
    REQUIRE(ts.tau_a == 1.0);
    REQUIRE(ts.tau_b == 1.0);
    REQUIRE(ts.tau_d == 1.0);
  }
  SECTION("values at r=0.5, t=0.6") {
    const auto ts = tangles(0.5, 0.6);
    REQUIRE(ts.tau_abd == Approx(0.48).margin(1e-15));
    REQUIRE(ts.tau_a == Approx(0.64).margin(1e-15));
    REQUIRE(ts.tau_b == Approx(0.75).margin(1e-15));
    REQUIRE(ts.tau_d == Approx(0.91).margin(1e-15));
  }
  SECTION("three-tangle factorization across a grid") {
    for (int i = 0; i <= 10; ++i)
      for (int j = 0; j <= 10; ++j) {
        const auto ts = tangles(i / 10.0, j / 10.0);
        REQUIRE(std::abs(ts.tau_abd - ts.tau_a * ts.tau_b) < 1e-12);
        REQUIRE(ts.tau_a - ts.tau_abd >= -1e-15);
        REQUIRE(ts.tau_a - ts.tau_abd <= 1.0 + 1e-15);
        REQUIRE(ts.tau_b - ts.tau_abd >= -1e-15);
      }
  }
  REQUIRE_THROWS_AS(tangles(-0.1, 0.5), std::invalid_argument);
  REQUIRE_THROWS_AS(tangles(0.5, 1.1), std::invalid_argument);
}

TEST_CASE("closed-form discords", "[correlations]") {
  SECTION("frozen values at r=0.5, t=0.6") {
    REQUIRE(right_discord_closed(0.5, 0.6) == Approx(0.1274349806947127).margin(1e-12));
    REQUIRE(left_discord_closed(0.5, 0.6) == Approx(0.1641462319725523).margin(1e-12));
  }
  SECTION("one-sided zeroing is exact") {
    for (double x : {0.0, 0.2, 0.5, 0.8, 1.0}) {
      REQUIRE(right_discord_closed(0.0, x) == 0.0);
      REQUIRE(right_discord_closed(1.0, x) == 0.0);
      REQUIRE(left_discord_closed(x, 0.0) == 0.0);
      REQUIRE(left_discord_closed(x, 1.0) == 0.0);
    }
  }
  SECTION("left discord is the argument swap of right discord") {
    for (double r : {0.1, 0.4, 0.8})
      for (double t : {0.2, 0.6, 0.9}) {
        REQUIRE(left_discord_closed(r, t) == right_discord_closed(t, r));
      }
  }
  SECTION("non-negative across a grid") {
    for (int i = 0; i <= 20; ++i)
      for (int j = 0; j <= 20; ++j) {
        REQUIRE(right_discord_closed(i / 20.0, j / 20.0) >= 0.0);
      }
  }
}

TEST_CASE("relative difference and symmetrized discord", "[correlations]") {
  SECTION("vanishes on the diagonal") {
    const auto d = relative_difference(0.7, 0.7);
    REQUIRE(d.has_value());
    REQUIRE(*d == Approx(0.0).margin(1e-12));
  }
  SECTION("frozen value at r=0.5, t=0.6") {
    REQUIRE(*relative_difference(0.5, 0.6) == Approx(0.1259040352498028).margin(1e-12));
    REQUIRE(symmetrized_discord(0.5, 0.6) == Approx(0.1446304667161523).margin(1e-12));
  }
  SECTION("only the left discord survives as r -> 0") {
    REQUIRE(*relative_difference(1e-9, 0.5) == Approx(1.0).margin(1e-6));
  }
  SECTION("undefined when both discords vanish") {
    REQUIRE_FALSE(relative_difference(1.0, 1.0).has_value());
    REQUIRE_FALSE(relative_difference(1.0, 0.3).has_value());
  }
  SECTION("symmetrized discord swap symmetry") {
    REQUIRE(symmetrized_discord(1.0, 0.3) == 0.0);
    for (double r : {0.15, 0.5, 0.85})
      for (double t : {0.25, 0.6, 0.95}) {
        REQUIRE(std::abs(symmetrized_discord(r, t) - symmetrized_discord(t, r)) < 1e-12);
      }
  }
  SECTION("fixed s: value at t equals value at s/t") {
    const double s = 0.3;
    for (double t : {0.6, 0.75, 0.9}) {
      const double at_t = symmetrized_discord(s / t, t);
      const double swapped = symmetrized_discord(t, s / t);
      REQUIRE(std::abs(at_t - swapped) < 1e-10);
    }
  }
}

TEST_CASE("tripartite purification", "[correlations]") {
  SECTION("normalized for all overlaps") {
    for (double r : {0.0, 0.3, 1.0})
      for (double t : {0.0, 0.6, 1.0}) {
        const auto psi = purification_tripartite(r, t);
        REQUIRE(std::abs(psi.amplitudes().squaredNorm() - 1.0) < 1e-12);
      }
  }
  SECTION("tracing out D reproduces rho_AB") {
    const double r = 0.5, t = 0.6;
    const auto psi = purification_tripartite(r, t);
    const auto rho_ab = partial_trace(DensityOperator::from_pure(psi), {0, 1});
    const auto direct = joint_state_rho_ab(params_from_overlaps(r, t));
    REQUIRE((rho_ab.matrix() - direct.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("product state at r=t=1") {
    const auto psi = purification_tripartite(1.0, 1.0);
    const auto rho_a = partial_trace(DensityOperator::from_pure(psi), 0);
    REQUIRE(von_neumann_entropy(rho_a) < 1e-10);
  }
}

TEST_CASE("mutual information", "[correlations]") {
  SECTION("zero on product states") {
    std::mt19937 rng(47);
    const auto a = test_helpers::random_density(rng, 2);
    const auto b = test_helpers::random_density(rng, 3);
    REQUIRE(mutual_information(tensor_product(a, b)) == Approx(0.0).margin(1e-10));
  }
  SECTION("two bits for a Bell pair") {
    Vec bell(4);
    bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
    REQUIRE(mutual_information(DensityOperator::from_pure(StateVector(bell, {2, 2}))) ==
            Approx(2.0).margin(1e-10));
  }
  SECTION("entropy combination on rho_AB(0.5, 0.6)") {
    const auto rho = joint_state_rho_ab(params_from_overlaps(0.5, 0.6));
    const double expected = von_neumann_entropy(partial_trace(rho, 0)) +
                            von_neumann_entropy(partial_trace(rho, 1)) - von_neumann_entropy(rho);
    REQUIRE(mutual_information(rho) == Approx(expected).margin(1e-12));
    REQUIRE(mutual_information(rho) >= -1e-10);
  }
}

TEST_CASE("Wootters concurrence and entanglement of formation", "[correlations]") {
  SECTION("maximally entangled pair") {
    Vec bell(4);
    bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
    const auto [c, e] = concurrence_ef(DensityOperator::from_pure(StateVector(bell, {2, 2})));
    REQUIRE(c == Approx(1.0).margin(1e-10));
    REQUIRE(e == Approx(1.0).margin(1e-10));
  }
  SECTION("product state") {
    std::mt19937 rng(53);
    const auto a = test_helpers::random_density(rng, 2);
    const auto b = test_helpers::random_density(rng, 2);
    const auto [c, e] = concurrence_ef(tensor_product(a, b));
    REQUIRE(c == Approx(0.0).margin(1e-8));
    REQUIRE(e == Approx(0.0).margin(1e-7));
  }
  SECTION("rho_AD of the purification at (0.5, 0.6)") {
    const auto psi = purification_tripartite(0.5, 0.6);
    const auto rho_ad = partial_trace(DensityOperator::from_pure(psi), {0, 2});
    const auto [c, e] = concurrence_ef(rho_ad);
    REQUIRE(c * c == Approx(0.16).margin(1e-8));  // tau_A - tau_ABD
    REQUIRE(c == Approx(0.4).margin(1e-8));
  }
}

TEST_CASE("Koashi-Winter route matches the closed form", "[correlations]") {
  for (double r : {0.1, 0.5, 0.9})
    for (double t : {0.2, 0.6, 0.95}) {
      const auto psi = purification_tripartite(r, t);
      const auto rho = DensityOperator::from_pure(psi);
      const auto rho_ab = partial_trace(rho, {0, 1});
      const double s_b = von_neumann_entropy(partial_trace(rho, 1));
      const double s_d = von_neumann_entropy(partial_trace(rho, 2));
      const double s_ab = von_neumann_entropy(rho_ab);
      const auto [c, eof] = concurrence_ef(partial_trace(rho, {0, 2}));

      const double via_kw = s_b - s_d + eof;
      REQUIRE(via_kw == Approx(right_discord_closed(r, t)).margin(1e-8));
      // S(rho_AB) equals S(rho_D) for a purification
      REQUIRE(s_ab == Approx(s_d).margin(1e-10));
      const auto ts = tangles(r, t);
      REQUIRE(c * c == Approx(ts.tau_a - ts.tau_abd).margin(1e-8));
    }
}

TEST_CASE("definition-based discord oracle", "[correlations]") {
  SECTION("product state has zero discord on both sides") {
    std::mt19937 rng(59);
    const auto a = test_helpers::random_density(rng, 2);
    Vec u1(3), u2(3);
    u1 << 1.0, 0.0, 0.0;
    u2 << 0.0, 1.0, 0.0;
    const Mat b = 0.7 * u1 * u1.adjoint() + 0.3 * u2 * u2.adjoint();
    const auto rho = tensor_product(a, DensityOperator(b, {3}));
    REQUIRE(discord_by_definition(rho, MeasuredSide::B).bits == Approx(0.0).margin(1e-6));
    REQUIRE(discord_by_definition(rho, MeasuredSide::A).bits == Approx(0.0).margin(1e-6));
  }
  SECTION("classical-classical state embedded in 2x3") {
    Mat rho = Mat::Zero(6, 6);
    rho(0, 0) = 0.5;  // |0>|0>
    rho(4, 4) = 0.5;  // |1>|1>
    const DensityOperator cc(rho, {2, 3});
    REQUIRE(discord_by_definition(cc, MeasuredSide::B).bits == Approx(0.0).margin(1e-6));
    REQUIRE(discord_by_definition(cc, MeasuredSide::A).bits == Approx(0.0).margin(1e-6));
  }
  SECTION("matches the closed forms at (0.5, 0.6)") {
    const auto rho = joint_state_rho_ab(params_from_overlaps(0.5, 0.6));
    const auto right = discord_by_definition(rho, MeasuredSide::B);
    const auto left = discord_by_definition(rho, MeasuredSide::A);
    REQUIRE(right.bits == Approx(0.1274349806947127).margin(1e-3));
    REQUIRE(left.bits == Approx(0.1641462319725523).margin(1e-3));
    REQUIRE(right.converged);
    REQUIRE(left.converged);
  }
  SECTION("oracle report agrees with the closed-form report") {
    bool converged = false;
    const auto oracle = discord_report_oracle(0.3, 0.7, &converged);
    const auto closed = discord_report_closed(0.3, 0.7);
    REQUIRE(converged);
    REQUIRE(oracle.d_right == Approx(closed.d_right).margin(1e-3));
    REQUIRE(oracle.d_left == Approx(closed.d_left).margin(1e-3));
    REQUIRE(oracle.d_symm == Approx(closed.d_symm).margin(1e-3));
  }
}

TEST_CASE("stationarity of the symmetrized discord at t = sqrt(s)", "[correlations]") {
  for (double s : {0.1, 0.3, 0.5}) {
    double best_t = s, best = -1.0;
    const int n = 200;
    for (int i = 0; i <= n; ++i) {
      const double t = s + (1.0 - s) * i / n;
      if (t <= 0.0) continue;
      const double v = symmetrized_discord(s / t, t);
      if (v > best) {
        best = v;
        best_t = t;
      }
    }
    REQUIRE(std::abs(best_t - std::sqrt(s)) <= (1.0 - s) / n + 1e-12);
  }
}

TEST_CASE("relative difference grows with Bob's success probability", "[correlations]") {
  for (double pc : {0.1, 0.5, 0.9}) {
    const double t = 1.0 - pc;
    double prev = -2.0;
    for (int k = 0; k < 50; ++k) {
      const double pb = (k + 0.5) / 50;
      const auto d = relative_difference(1.0 - pb, t);
      REQUIRE(d.has_value());
      REQUIRE(*d >= prev - 1e-12);
      prev = *d;
    }
  }
}
