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

#include <random>

#include "seqdisc/protocol.hpp"
#include "seqdisc/qmath.hpp"

namespace test_helpers {

inline seqdisc::Vec random_unit_vec(std::mt19937& rng, int dim) {
  std::normal_distribution<double> normal;
  seqdisc::Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = seqdisc::Complex(normal(rng), normal(rng));
  return v / v.norm();
}

inline seqdisc::StateVector random_state(std::mt19937& rng, int dim) {
  return seqdisc::StateVector(random_unit_vec(rng, dim));
}

inline seqdisc::DensityOperator random_density(std::mt19937& rng, int dim) {
  std::normal_distribution<double> normal;
  seqdisc::Mat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = seqdisc::Complex(normal(rng), normal(rng));
  seqdisc::Mat rho = m * m.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + seqdisc::Mat(rho.adjoint()));
  return seqdisc::DensityOperator(rho, {dim});
}

// Random parameter set on the feasible manifold: q2b fixed by the equality
// constraint, q2c by saturating Charlie's bound.
inline seqdisc::ProtocolParams random_valid_params(std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  seqdisc::ProtocolParams p;
  p.t = 0.05 + 0.95 * uni(rng);
  p.s = p.t * uni(rng);
  const double r = p.s / p.t;
  p.q1b = r * r + (1.0 - r * r) * uni(rng);
  p.q2b = p.q1b > 0.0 ? r * r / p.q1b : 0.0;
  p.q1c = p.t * p.t + (1.0 - p.t * p.t) * uni(rng);
  p.q2c = p.q1c > 0.0 ? p.t * p.t / p.q1c : 0.0;
  p.validate();
  return p;
}

}  // namespace test_helpers
