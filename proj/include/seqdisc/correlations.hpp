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
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "seqdisc/protocol.hpp"
#include "seqdisc/qmath.hpp"

namespace seqdisc {

/// Tangles of the tripartite purification at overlaps (r, t).
/// tau_abd is the residual three-tangle; tau_x the tangle between x and the rest.
struct TangleSet {
  double tau_abd;
  double tau_a;
  double tau_b;
  double tau_d;
};

namespace detail {

inline void check_overlap_range(double r, double t) {
  if (r < 0.0 || r > 1.0 || t < 0.0 || t > 1.0) {
    throw std::invalid_argument("overlaps must lie in [0,1]");
  }
}

}  // namespace detail

inline TangleSet tangles(double r, double t) {
  detail::check_overlap_range(r, t);
  TangleSet ts;
  ts.tau_a = 1.0 - t * t;
  ts.tau_b = 1.0 - r * r;
  ts.tau_d = 1.0 - t * t * r * r;
  ts.tau_abd = ts.tau_a * ts.tau_b;
  return ts;
}

/// Right discord (measurement on the ancilla B) in bits:
/// H(tau_B) - H(tau_D) + H(tau_A - tau_ABD).
///
/// Each side vanishes only in its own limits: the right discord at r = 0 or
/// r = 1 (any t), the left discord at t = 0 or t = 1 (any r). At r = 0 with
/// 0 < t < 1 the left discord stays positive, since the A-side pair is still
/// nonorthogonal even though the ancilla flags are perfectly distinguishable;
/// the definitional minimization confirms this.
inline double right_discord_closed(double r, double t) {
  const TangleSet ts = tangles(r, t);
  const double d =
      tangle_entropy_H(ts.tau_b) - tangle_entropy_H(ts.tau_d) + tangle_entropy_H(ts.tau_a - ts.tau_abd);
  return std::max(d, 0.0);
}

/// Left discord (measurement on the qubit A): right discord with r and t swapped.
inline double left_discord_closed(double r, double t) { return right_discord_closed(t, r); }

/// D_delta = (D_left - D_right)/(D_left + D_right); absent when both vanish.
inline std::optional<double> relative_difference(double r, double t) {
  const double dl = left_discord_closed(r, t);
  const double dr = right_discord_closed(r, t);
  if (dl + dr <= tol::kSpectrumFloor) return std::nullopt;
  return (dl - dr) / (dl + dr);
}

/// D_symm = sqrt(D_left * D_right); symmetric under r <-> t.
inline double symmetrized_discord(double r, double t) {
  const double dl = left_discord_closed(r, t);
  const double dr = right_discord_closed(r, t);
  return std::sqrt(std::max(dl * dr, 0.0));
}

/// Tripartite pure state |Psi> = (|phi1>|eta1>|0>_d + |phi2>|eta2>|1>_d)/sqrt(2)
/// on factors [2,3,2]; tracing out the fictitious qubit D reproduces rho_AB
/// at equal weights q^b = r.
inline StateVector purification_tripartite(double r, double t) {
  detail::check_overlap_range(r, t);
  auto [phi1, phi2] = prepare_pair(t);
  Vec eta1(3), eta2(3);
  eta1 << std::sqrt(r), std::sqrt(1.0 - r), 0.0;
  eta2 << std::sqrt(r), 0.0, std::sqrt(1.0 - r);
  const Vec d0 = detail::basis_vec(2, 0);
  const Vec d1 = detail::basis_vec(2, 1);
  Vec psi = (detail::kron(detail::kron(phi1.amplitudes(), eta1), d0) +
             detail::kron(detail::kron(phi2.amplitudes(), eta2), d1)) /
            std::sqrt(2.0);
  return StateVector(psi, {2, 3, 2});
}

/// I(rho) = S(rho_A) + S(rho_B) - S(rho_AB) in bits.
inline double mutual_information(const DensityOperator& rho) {
  if (rho.factors().size() != 2) {
    throw std::invalid_argument("mutual_information: bipartite state required");
  }
  const auto& dims = rho.factors();
  const Mat ra = detail::ptrace_raw(rho.matrix(), dims, {0});
  const Mat rb = detail::ptrace_raw(rho.matrix(), dims, {1});
  return detail::entropy_raw(ra) + detail::entropy_raw(rb) - detail::entropy_raw(rho.matrix());
}

struct ConcurrenceEof {
  double concurrence;
  double eof_bits;
};

/// Wootters concurrence and entanglement of formation of a two-qubit state.
/// The spin-flip eigenvalues are taken from the Hermitian form
/// sqrt(rho) rho_tilde sqrt(rho); eigenvalues below the spectrum floor are
/// exact zeros of the state family and would otherwise leak sqrt(eps) noise
/// into the concurrence.
inline ConcurrenceEof concurrence_ef(const DensityOperator& rho) {
  if (rho.dim() != 4) throw std::invalid_argument("concurrence_ef: 4x4 state required");
  Mat sy(2, 2);
  sy << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  const Mat yy = detail::kron(sy, sy);
  const Mat rho_tilde = yy * rho.matrix().conjugate() * yy;

  Eigen::SelfAdjointEigenSolver<Mat> rho_solver(rho.matrix());
  if (rho_solver.info() != Eigen::Success) {
    throw std::runtime_error("concurrence_ef: eigensolver failed");
  }
  Eigen::VectorXd sqrt_lambda = rho_solver.eigenvalues();
  for (int i = 0; i < 4; ++i) sqrt_lambda(i) = std::sqrt(std::max(sqrt_lambda(i), 0.0));
  const Mat sqrt_rho = rho_solver.eigenvectors() * sqrt_lambda.asDiagonal() *
                       rho_solver.eigenvectors().adjoint();

  const Eigen::VectorXd mu = detail::hermitian_eigenvalues(sqrt_rho * rho_tilde * sqrt_rho);
  std::vector<double> roots;
  for (int i = 0; i < 4; ++i) {
    roots.push_back(mu(i) > tol::kSpectrumFloor ? std::sqrt(mu(i)) : 0.0);
  }
  std::sort(roots.begin(), roots.end(), std::greater<double>());
  const double c = std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
  return {c, tangle_entropy_H(c * c)};
}

enum class MeasuredSide { A, B };

/// Result of the definition-based discord minimization.
struct DefinitionDiscord {
  double bits;
  bool converged;
};

namespace detail {

// Entropy of a 2x2 Hermitian PSD matrix with trace p > 0, scaled as p*S(M/p).
inline double scaled_entropy_2x2(const Mat& m, double p) {
  const double a = m(0, 0).real(), b = m(1, 1).real();
  const double disc = std::sqrt(std::max(0.25 * (a - b) * (a - b) + std::norm(m(0, 1)), 0.0));
  const double l1 = std::max((a + b) * 0.5 + disc, 0.0) / p;
  const double l2 = std::max((a + b) * 0.5 - disc, 0.0) / p;
  double s = 0.0;
  if (l1 > tol::kSpectrumFloor) s -= l1 * std::log2(l1);
  if (l2 > tol::kSpectrumFloor) s -= l2 * std::log2(l2);
  return p * s;
}

// Coarse grid over (theta, phi) followed by coordinate-wise golden-section
// refinement; returns the minimum value and a convergence flag.
template <class F>
std::pair<double, bool> minimize_two_angles(F&& f, int grid_density, int refine_steps,
                                            double stop_tol) {
  const int g = std::max(grid_density, 2);
  double best_theta = 0.0, best_phi = 0.0;
  double best = f(0.0, 0.0);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < g; ++i) {
    const double theta = pi * i / (g - 1);
    for (int j = 0; j < g; ++j) {
      const double phi = 2.0 * pi * j / g;
      const double v = f(theta, phi);
      if (v < best) {
        best = v;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }

  double w_theta = pi / (g - 1), w_phi = 2.0 * pi / g;
  bool converged = false;
  for (int pass = 0; pass < refine_steps; ++pass) {
    const double before = best;
    auto [th, fv1] = golden_section_min(
        [&](double x) { return f(x, best_phi); }, std::max(0.0, best_theta - w_theta),
        std::min(pi, best_theta + w_theta));
    if (fv1 < best) {
      best = fv1;
      best_theta = th;
    }
    auto [ph, fv2] = golden_section_min([&](double x) { return f(best_theta, x); },
                                        best_phi - w_phi, best_phi + w_phi);
    if (fv2 < best) {
      best = fv2;
      best_phi = ph;
    }
    w_theta *= 0.5;
    w_phi *= 0.5;
    if (before - best < stop_tol) {
      converged = true;
      break;
    }
  }
  return {best, converged};
}

}  // namespace detail

/// D = I(rho) - sup over rank-1 von Neumann measurements on `side` of
/// [S(rho_other) - sum_k p_k S(rho_other|k)]. The B-side search runs inside
/// the 2-dimensional support of rho_B, with the kernel projector as a
/// zero-probability third outcome.
inline DefinitionDiscord discord_by_definition(const DensityOperator& rho, MeasuredSide side,
                                               int grid_density = 64, int refine_steps = 100) {
  const auto& dims = rho.factors();
  if (dims.size() != 2) {
    throw std::invalid_argument("discord_by_definition: bipartite state required");
  }
  const int da = dims[0], db = dims[1];
  const Mat& m = rho.matrix();
  const double info = mutual_information(rho);

  if (side == MeasuredSide::A) {
    if (da != 2) {
      throw std::invalid_argument("discord_by_definition: measured side A must be a qubit");
    }
    const Mat rb = detail::ptrace_raw(m, dims, {1});
    const double s_b = detail::entropy_raw(rb);

    // conditional state on B given outcome vector v on A:
    // M[a,b] = sum_{i,j} conj(v_i) rho[(i,a),(j,b)] v_j
    auto conditional = [&](const Vec& v) {
      Mat cond = Mat::Zero(db, db);
      for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) {
          const Complex w = std::conj(v(i)) * v(j);
          if (w == Complex(0, 0)) continue;
          cond += w * m.block(i * db, j * db, db, db);
        }
      return cond;
    };
    auto cond_entropy = [&](double theta, double phi) {
      const Complex e = std::polar(1.0, phi);
      Vec v1(2), v2(2);
      v1 << std::cos(theta / 2), e * std::sin(theta / 2);
      v2 << std::sin(theta / 2), -e * std::cos(theta / 2);
      double total = 0.0;
      for (const Vec& v : {v1, v2}) {
        const Mat cond = conditional(v);
        const double p = cond.trace().real();
        if (p > tol::kProbFloor) total += p * detail::entropy_raw(cond / p);
      }
      return total;
    };
    auto [min_cond, converged] =
        detail::minimize_two_angles(cond_entropy, grid_density, refine_steps, 1e-9);
    return {info - (s_b - min_cond), converged};
  }

  // side B: measure inside the support of rho_B
  const Mat rb = detail::ptrace_raw(m, dims, {1});
  const Mat ra = detail::ptrace_raw(m, dims, {0});
  const double s_a = detail::entropy_raw(ra);

  Eigen::SelfAdjointEigenSolver<Mat> solver(rb);
  std::vector<Vec> support;
  for (int i = 0; i < db; ++i) {
    if (solver.eigenvalues()(i) > tol::kSpectrumFloor) support.push_back(solver.eigenvectors().col(i));
  }
  if (support.size() > 2) {
    throw std::invalid_argument("discord_by_definition: side-B support rank exceeds 2");
  }
  if (support.size() <= 1) {
    // Measurement has a single non-trivial outcome; no classical correlation
    // beyond S(rho_A) - S(rho_A) = 0 can be extracted.
    return {info, true};
  }
  const Vec u1 = support[0], u2 = support[1];

  // conditional state on A given outcome vector v on B:
  // M[i,j] = sum_{a,b} conj(v_a) rho[(i,a),(j,b)] v_b
  auto conditional = [&](const Vec& v) {
    Mat cond = Mat::Zero(da, da);
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j) {
        Complex acc(0, 0);
        for (int a = 0; a < db; ++a)
          for (int b = 0; b < db; ++b) acc += std::conj(v(a)) * m(i * db + a, j * db + b) * v(b);
        cond(i, j) = acc;
      }
    return cond;
  };
  auto cond_entropy = [&](double theta, double phi) {
    const Complex e = std::polar(1.0, phi);
    const Vec v1 = std::cos(theta / 2) * u1 + e * std::sin(theta / 2) * u2;
    const Vec v2 = std::sin(theta / 2) * u1 - e * std::cos(theta / 2) * u2;
    double total = 0.0;
    for (const Vec& v : {v1, v2}) {
      const Mat cond = conditional(v);
      const double p = cond.trace().real();
      if (p > tol::kProbFloor) total += detail::scaled_entropy_2x2(cond, p);
    }
    return total;
  };
  auto [min_cond, converged] =
      detail::minimize_two_angles(cond_entropy, grid_density, refine_steps, 1e-9);
  return {info - (s_a - min_cond), converged};
}

enum class DiscordMethod { closed_form, oracle };

/// Tangles, both discords, D_delta and D_symm for one (r, t) point.
struct DiscordReport {
  double r = 0.0;
  double t = 0.0;
  double d_right = 0.0;
  double d_left = 0.0;
  std::optional<double> d_delta;
  double d_symm = 0.0;
  DiscordMethod method = DiscordMethod::closed_form;
};

inline DiscordReport discord_report_closed(double r, double t) {
  DiscordReport rep;
  rep.r = r;
  rep.t = t;
  rep.d_right = right_discord_closed(r, t);
  rep.d_left = left_discord_closed(r, t);
  rep.d_delta = relative_difference(r, t);
  rep.d_symm = symmetrized_discord(r, t);
  rep.method = DiscordMethod::closed_form;
  return rep;
}

/// Protocol parameters of the (r, t) state family: equal failure weights
/// q^b = r and q^c = t, so the ancilla flag overlap is exactly r.
inline ProtocolParams params_from_overlaps(double r, double t) {
  detail::check_overlap_range(r, t);
  ProtocolParams p;
  p.s = r * t;
  p.t = t;
  p.q1b = p.q2b = r;
  p.q1c = p.q2c = t;
  p.validate();
  return p;
}

/// Same quantities evaluated through the measurement-minimization oracle on
/// rho_AB(r, t); `converged` reports whether both refinements settled.
inline DiscordReport discord_report_oracle(double r, double t, bool* converged = nullptr,
                                           int grid_density = 64, int refine_steps = 100) {
  const DensityOperator rho = joint_state_rho_ab(params_from_overlaps(r, t));
  const DefinitionDiscord right = discord_by_definition(rho, MeasuredSide::B, grid_density, refine_steps);
  const DefinitionDiscord left = discord_by_definition(rho, MeasuredSide::A, grid_density, refine_steps);
  DiscordReport rep;
  rep.r = r;
  rep.t = t;
  rep.d_right = right.bits;
  rep.d_left = left.bits;
  if (rep.d_left + rep.d_right > tol::kSpectrumFloor) {
    rep.d_delta = (rep.d_left - rep.d_right) / (rep.d_left + rep.d_right);
  }
  rep.d_symm = std::sqrt(std::max(rep.d_left * rep.d_right, 0.0));
  rep.method = DiscordMethod::oracle;
  if (converged != nullptr) *converged = right.converged && left.converged;
  return rep;
}

}  // namespace seqdisc
