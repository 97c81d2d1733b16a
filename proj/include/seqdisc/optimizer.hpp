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
#include <stdexcept>
#include <utility>

#include "seqdisc/protocol.hpp"
#include "seqdisc/qmath.hpp"

namespace seqdisc {

enum class Regime { symmetric, symmetry_broken };

inline const char* regime_name(Regime r) {
  return r == Regime::symmetric ? "symmetric" : "symmetry-broken";
}

/// Boundary overlap between the two optimal regimes: 3 - 2 sqrt(2).
inline double regime_boundary() { return 3.0 - 2.0 * std::sqrt(2.0); }

enum class OptimumMethod { closed_form, numeric };

struct OptimumReport {
  double s = 0.0;
  double pbc_max = 0.0;
  ProtocolParams argmax;
  Regime regime = Regime::symmetric;
  OptimumMethod method = OptimumMethod::closed_form;
  int grid_ties = 1;  // grid-level argmax degeneracy (numeric method only)
};

/// Closed-form maximum of the joint success probability:
///   s <  3-2sqrt(2):  (1-sqrt(s))^2   at q1b=q2b=q1c=q2c=t=sqrt(s)
///   s >= 3-2sqrt(2):  (1-s)^2 / 2     at q1b=q1c=s, q2b=q2c=1, t=sqrt(s)
inline OptimumReport pbc_closed_max(double s) {
  if (s < 0.0 || s > 1.0) throw std::invalid_argument("pbc_closed_max: s outside [0,1]");
  const double root = std::sqrt(s);
  OptimumReport rep;
  rep.s = s;
  rep.method = OptimumMethod::closed_form;
  if (s < regime_boundary()) {
    rep.regime = Regime::symmetric;
    rep.pbc_max = (1.0 - root) * (1.0 - root);
    rep.argmax = ProtocolParams{s, root, root, root, root, root};
  } else {
    rep.regime = Regime::symmetry_broken;
    rep.pbc_max = 0.5 * (1.0 - s) * (1.0 - s);
    rep.argmax = ProtocolParams{s, root, s, 1.0, s, 1.0};
  }
  rep.argmax.validate();
  return rep;
}

namespace detail {

// Joint success probability over the feasible manifold, parametrized by
// (t, a, b) in [s,1] x [0,1]^2 with
//   q1b = r^2 + a (1 - r^2),  q2b = r^2 / q1b   (so sqrt(q1b q2b) t = s)
//   q1c = t^2 + b (1 - t^2),  q2c = t^2 / q1c   (so sqrt(q1c q2c) = t)
// Since the objective decreases in q2b and q2c, the equality choices are
// optimal for any feasible point.
struct PbcObjective {
  double s;

  ProtocolParams params(double t, double a, double b) const {
    const double r = t > 0.0 ? s / t : 0.0;
    ProtocolParams p;
    p.s = s;
    p.t = t;
    p.q1b = r * r + a * (1.0 - r * r);
    p.q2b = p.q1b > 0.0 ? (r * r) / p.q1b : 0.0;
    p.q1c = t * t + b * (1.0 - t * t);
    p.q2c = p.q1c > 0.0 ? (t * t) / p.q1c : 0.0;
    return p;
  }

  double operator()(double t, double a, double b) const {
    const ProtocolParams p = params(t, a, b);
    return 0.5 * ((1.0 - p.q1b) * (1.0 - p.q1c) + (1.0 - p.q2b) * (1.0 - p.q2c));
  }
};

}  // namespace detail

/// Grid search plus coordinate-wise golden-section refinement of the joint
/// success probability; the independent check of pbc_closed_max.
inline OptimumReport pbc_numeric_max(double s, int grid_density = 64, int refine_iters = 200) {
  if (s < 0.0 || s >= 1.0) throw std::invalid_argument("pbc_numeric_max: s outside [0,1)");
  const detail::PbcObjective objective{s};
  const int g = std::max(grid_density, 2);

  double best = -1.0, bt = s, ba = 0.0, bb = 0.0;
  auto sweep = [&](auto&& visit) {
    for (int i = 0; i < g; ++i) {
      const double t = s + (1.0 - s) * i / (g - 1);
      for (int j = 0; j < g; ++j) {
        const double a = static_cast<double>(j) / (g - 1);
        for (int k = 0; k < g; ++k) {
          const double b = static_cast<double>(k) / (g - 1);
          visit(t, a, b, objective(t, a, b));
        }
      }
    }
  };
  sweep([&](double t, double a, double b, double v) {
    if (v > best) {
      best = v;
      bt = t;
      ba = a;
      bb = b;
    }
  });
  int ties = 0;
  sweep([&](double, double, double, double v) {
    if (v >= best - 1e-12) ++ties;
  });

  double wt = (1.0 - s) / (g - 1), wa = 1.0 / (g - 1), wb = wa;
  for (int pass = 0; pass < refine_iters; ++pass) {
    const double before = best;
    auto [t_new, ft] = detail::golden_section_min(
        [&](double x) { return -objective(x, ba, bb); }, std::max(s, bt - wt),
        std::min(1.0, bt + wt));
    if (-ft > best) {
      best = -ft;
      bt = t_new;
    }
    auto [a_new, fa] = detail::golden_section_min(
        [&](double x) { return -objective(bt, x, bb); }, std::max(0.0, ba - wa),
        std::min(1.0, ba + wa));
    if (-fa > best) {
      best = -fa;
      ba = a_new;
    }
    auto [b_new, fb] = detail::golden_section_min(
        [&](double x) { return -objective(bt, ba, x); }, std::max(0.0, bb - wb),
        std::min(1.0, bb + wb));
    if (-fb > best) {
      best = -fb;
      bb = b_new;
    }
    wt *= 0.5;
    wa *= 0.5;
    wb *= 0.5;
    if (best - before < 1e-9 && pass >= 2) break;
  }

  OptimumReport rep;
  rep.s = s;
  rep.method = OptimumMethod::numeric;
  rep.pbc_max = best;
  rep.argmax = objective.params(bt, ba, bb);
  if (rep.argmax.q1b > rep.argmax.q2b) {  // canonical ordering among swap-degenerate maxima
    std::swap(rep.argmax.q1b, rep.argmax.q2b);
    std::swap(rep.argmax.q1c, rep.argmax.q2c);
  }
  rep.argmax.validate();
  rep.regime = s < regime_boundary() ? Regime::symmetric : Regime::symmetry_broken;
  rep.grid_ties = ties;
  return rep;
}

}  // namespace seqdisc
