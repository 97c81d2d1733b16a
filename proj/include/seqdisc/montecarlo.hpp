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

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "seqdisc/protocol.hpp"
#include "seqdisc/qmath.hpp"

namespace seqdisc {

/// Outcome counts of a simulated run, indexed by
/// (prepared in {1,2}, bob outcome in {0,1,2}, charlie outcome in {0,1,2}).
struct TrialStats {
  std::array<std::array<std::array<std::uint64_t, 3>, 3>, 2> counts{};
  std::uint64_t n_trials = 0;
  std::uint64_t seed = 0;

  std::uint64_t count(int prepared, int bob_outcome, int charlie_outcome) const {
    return counts[prepared - 1][bob_outcome][charlie_outcome];
  }

  TrialStats& merge(const TrialStats& other) {
    for (int i = 0; i < 2; ++i)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) counts[i][b][c] += other.counts[i][b][c];
    n_trials += other.n_trials;
    return *this;
  }
};

namespace detail {

// Stateless 64-bit mixer (splitmix64 finalizer), used to derive independent
// per-block streams from (seed, block index).
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Trials are partitioned into fixed-size blocks; each block gets its own
// derived stream so results are identical for any worker count.
inline constexpr std::uint64_t kTrialBlock = 1 << 16;

}  // namespace detail

/// One branch of an ancilla-coupled measurement: the ancilla outcome, its
/// probability, and the collapsed principal-qubit state. Probabilities below
/// tol::kProbFloor are dropped so no branch can appear by rounding alone.
struct MeasurementBranch {
  int outcome;
  double prob;
  StateVector post_state;
};

/// Applies a qubit x qutrit unitary to |qubit>|0> and projects on the ancilla
/// basis; returns the branches with non-zero probability (renormalized).
inline std::vector<MeasurementBranch> measure_with_ancilla(const UnitaryOperator& u,
                                                           const StateVector& qubit) {
  if (u.factors() != std::vector<int>{2, 3} || qubit.dim() != 2) {
    throw std::invalid_argument("measure_with_ancilla: expects qubit and [2,3] unitary");
  }
  const Vec joint = u.matrix() * detail::kron(qubit.amplitudes(), detail::basis_vec(3, 0));

  std::array<double, 3> probs{};
  double total = 0.0;
  for (int k = 0; k < 3; ++k) {
    probs[k] = std::norm(joint(k)) + std::norm(joint(3 + k));
    if (probs[k] < tol::kProbFloor) probs[k] = 0.0;
    total += probs[k];
  }

  std::vector<MeasurementBranch> branches;
  for (int k = 0; k < 3; ++k) {
    if (probs[k] == 0.0) continue;
    Vec collapsed(2);
    collapsed << joint(k), joint(3 + k);
    collapsed /= collapsed.norm();
    branches.push_back({k, probs[k] / total, StateVector(collapsed)});
  }
  return branches;
}

/// Bob's outcome distribution and collapsed states for prepared index 1 or 2.
inline std::vector<MeasurementBranch> bob_measurement_branches(const ProtocolParams& params,
                                                               int prepared) {
  if (prepared != 1 && prepared != 2) {
    throw std::invalid_argument("bob_measurement_branches: prepared index must be 1 or 2");
  }
  auto [psi1, psi2] = prepare_pair(params.s);
  return measure_with_ancilla(build_bob_unitary(params), prepared == 1 ? psi1 : psi2);
}

namespace detail {

// Cumulative outcome table for one prepared index: Bob's three branches and,
// per Bob branch, Charlie's three branches on the collapsed qubit.
struct TrialTable {
  std::array<double, 3> bob_cdf{};                  // inverse-CDF thresholds
  std::array<int, 3> bob_outcome{};                 // outcome per CDF slot
  int bob_branches = 0;
  std::array<std::array<double, 3>, 3> charlie_cdf{};  // indexed by bob outcome
  std::array<std::array<int, 3>, 3> charlie_outcome{};
  std::array<int, 3> charlie_branches{};
};

inline TrialTable build_trial_table(const ProtocolParams& params, const UnitaryOperator& uc,
                                    int prepared) {
  TrialTable table;
  const auto bob = bob_measurement_branches(params, prepared);
  double acc = 0.0;
  for (const auto& branch : bob) {
    acc += branch.prob;
    table.bob_cdf[table.bob_branches] = acc;
    table.bob_outcome[table.bob_branches] = branch.outcome;
    ++table.bob_branches;

    const auto charlie = measure_with_ancilla(uc, branch.post_state);
    double cacc = 0.0;
    int n = 0;
    for (const auto& cb : charlie) {
      cacc += cb.prob;
      table.charlie_cdf[branch.outcome][n] = cacc;
      table.charlie_outcome[branch.outcome][n] = cb.outcome;
      ++n;
    }
    table.charlie_branches[branch.outcome] = n;
  }
  return table;
}

inline int sample_from(const double* cdf, const int* outcome, int n, double u) {
  for (int i = 0; i < n; ++i) {
    if (u < cdf[i]) return outcome[i];
  }
  return outcome[n - 1];
}

}  // namespace detail

/// Simulates the full protocol: uniform preparation, Bob's joint unitary and
/// ancilla readout with collapse, then Charlie's. Deterministic given the
/// seed, independent of the worker count.
inline TrialStats run_trials(const ProtocolParams& params, std::uint64_t n_trials,
                             std::uint64_t seed, int threads = 1) {
  if (n_trials < 1) throw std::invalid_argument("run_trials: n_trials must be >= 1");
  params.validate();
  const UnitaryOperator uc = build_charlie_unitary(params);
  const std::array<detail::TrialTable, 2> tables{detail::build_trial_table(params, uc, 1),
                                                 detail::build_trial_table(params, uc, 2)};

  const std::uint64_t n_blocks = (n_trials + detail::kTrialBlock - 1) / detail::kTrialBlock;
  std::vector<TrialStats> block_stats(n_blocks);

  auto run_block = [&](std::uint64_t block) {
    const std::uint64_t begin = block * detail::kTrialBlock;
    const std::uint64_t end = std::min(n_trials, begin + detail::kTrialBlock);
    std::mt19937_64 rng(detail::mix64(seed ^ detail::mix64(block)));
    TrialStats local;
    for (std::uint64_t i = begin; i < end; ++i) {
      const int prepared = detail::uniform01(rng) < 0.5 ? 1 : 2;
      const auto& table = tables[prepared - 1];
      const int kb = detail::sample_from(table.bob_cdf.data(), table.bob_outcome.data(),
                                         table.bob_branches, detail::uniform01(rng));
      const int kc =
          detail::sample_from(table.charlie_cdf[kb].data(), table.charlie_outcome[kb].data(),
                              table.charlie_branches[kb], detail::uniform01(rng));
      ++local.counts[prepared - 1][kb][kc];
      ++local.n_trials;
    }
    block_stats[block] = local;
  };

  const int workers = std::max(1, threads);
  if (workers == 1 || n_blocks == 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1)) {
          run_block(b);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  TrialStats stats;
  stats.seed = seed;
  for (const auto& bs : block_stats) stats.merge(bs);
  return stats;
}

/// Empirical success probabilities with binomial standard errors.
struct EmpiricalProbs {
  double p_b, p_c, p_bc;
  double se_b, se_c, se_bc;
};

inline EmpiricalProbs empirical_probs(const TrialStats& stats) {
  if (stats.n_trials == 0) throw std::invalid_argument("empirical_probs: empty stats");
  std::uint64_t bob = 0, charlie = 0, both = 0;
  for (int i = 0; i < 2; ++i) {
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const std::uint64_t n = stats.counts[i][b][c];
        if (b == i + 1) bob += n;
        if (c == i + 1) charlie += n;
        if (b == i + 1 && c == i + 1) both += n;
      }
  }
  const double n = static_cast<double>(stats.n_trials);
  auto se = [n](double p) { return std::sqrt(p * (1.0 - p) / n); };
  EmpiricalProbs out;
  out.p_b = bob / n;
  out.p_c = charlie / n;
  out.p_bc = both / n;
  out.se_b = se(out.p_b);
  out.se_c = se(out.p_c);
  out.se_bc = se(out.p_bc);
  return out;
}

struct UnambiguityCheck {
  bool ok;
  std::uint64_t violations;
};

/// True iff no misidentification cell is populated: Bob's outcome is never
/// the wrong index, and neither is Charlie's.
inline UnambiguityCheck verify_unambiguity(const TrialStats& stats) {
  std::uint64_t violations = 0;
  for (int i = 0; i < 2; ++i) {
    const int wrong = 2 - i;  // the other conclusive outcome (index base 1)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        if (b == wrong || c == wrong) violations += stats.counts[i][b][c];
      }
  }
  return {violations == 0, violations};
}

}  // namespace seqdisc
