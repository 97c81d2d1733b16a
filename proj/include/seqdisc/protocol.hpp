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
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "seqdisc/qmath.hpp"

namespace seqdisc {

/// Scalar knobs for one run of the sequential discrimination protocol.
///
/// s = <psi1|psi2> is the overlap of the prepared pair, t = <phi1|phi2> the
/// overlap of the pair Bob leaves for Charlie, and q1b..q2c the failure
/// weights of the two observers. The ratio r = s/t is the overlap of Bob's
/// ancilla flag states.
struct ProtocolParams {
  double s = 0.0;
  double t = 0.0;
  double q1b = 0.0;
  double q2b = 0.0;
  double q1c = 0.0;
  double q2c = 0.0;

  static constexpr double kConstraintTol = 1e-10;

  double r() const { return t > 0.0 ? s / t : 0.0; }

  /// Equal-weight instantiation: q^b = s/t (r), q^c = t. These are the
  /// weights that maximize each observer's individual success probability.
  static ProtocolParams equal_weight(double s, double t) {
    ProtocolParams p;
    p.s = s;
    p.t = t;
    const double r = t > 0.0 ? s / t : 0.0;
    p.q1b = p.q2b = r;
    p.q1c = p.q2c = t;
    p.validate();
    return p;
  }

  /// Throws std::invalid_argument unless the parameter set is realizable by
  /// joint unitaries for both observers:
  ///   sqrt(q1b q2b) t = s   (Bob leaves the pair with overlap t)
  ///   sqrt(q1c q2c) >= t    (Charlie's failure-state overlap t/sqrt(q1c q2c) <= 1)
  void validate() const {
    auto in_unit = [](double x) { return x >= -kConstraintTol && x <= 1.0 + kConstraintTol; };
    if (!in_unit(s) || !in_unit(t) || !in_unit(q1b) || !in_unit(q2b) || !in_unit(q1c) ||
        !in_unit(q2c)) {
      throw std::invalid_argument("ProtocolParams: values must lie in [0,1]");
    }
    if (s > t + kConstraintTol) {
      throw std::invalid_argument("ProtocolParams: s must not exceed t");
    }
    if (std::abs(std::sqrt(std::max(q1b * q2b, 0.0)) * t - s) > kConstraintTol) {
      throw std::invalid_argument("ProtocolParams: sqrt(q1b q2b) t != s");
    }
    if (std::sqrt(std::max(q1c * q2c, 0.0)) < t - kConstraintTol) {
      throw std::invalid_argument("ProtocolParams: sqrt(q1c q2c) < t");
    }
  }
};

/// Canonical real embedding of a pair with the given overlap, symmetric about
/// |0>: psi1 = (cos th, sin th), psi2 = (cos th, -sin th), th = acos(overlap)/2.
inline std::pair<StateVector, StateVector> prepare_pair(double overlap) {
  if (overlap < 0.0 || overlap > 1.0) {
    throw std::invalid_argument("prepare_pair: overlap outside [0,1]");
  }
  const double theta = 0.5 * std::acos(overlap);
  Vec a(2), b(2);
  a << std::cos(theta), std::sin(theta);
  b << std::cos(theta), -std::sin(theta);
  return {StateVector(a), StateVector(b)};
}

namespace detail {

inline Vec basis_vec(int dim, int index) {
  Vec v = Vec::Zero(dim);
  v(index) = 1.0;
  return v;
}

}  // namespace detail

/// Unitary sending in1 -> out1 and in2 -> out2. The two pairs must have equal
/// Gram matrices (<in1|in2> = <out1|out2>); the block outside the input span
/// is filled by deterministic orthonormal completion.
inline UnitaryOperator unitary_mapping_pair(const StateVector& in1, const StateVector& in2,
                                            const StateVector& out1, const StateVector& out2,
                                            std::vector<int> factors = {}) {
  const int dim = in1.dim();
  if (in2.dim() != dim || out1.dim() != dim || out2.dim() != dim) {
    throw std::invalid_argument("unitary_mapping_pair: dimension mismatch");
  }
  const Complex g_in = in1.inner(in2);
  const Complex g_out = out1.inner(out2);
  if (std::abs(g_in - g_out) > tol::kUnitary) {
    throw std::invalid_argument("unitary_mapping_pair: Gram matrices differ");
  }

  std::vector<Vec> in_cols{in1.amplitudes()};
  std::vector<Vec> out_cols{out1.amplitudes()};
  Vec in_res = in2.amplitudes() - g_in * in1.amplitudes();
  Vec out_res = out2.amplitudes() - g_out * out1.amplitudes();
  if (in_res.norm() >= tol::kGsResidual) {
    in_cols.push_back(in_res / in_res.norm());
    out_cols.push_back(out_res / out_res.norm());
  }
  const Mat e = detail::complete_isometry_raw(in_cols, dim);
  const Mat f = detail::complete_isometry_raw(out_cols, dim);
  if (factors.empty()) factors = {dim};
  return UnitaryOperator(f * e.adjoint(), std::move(factors));
}

/// Bob's ancilla flag states eta_i = sqrt(q_i^b)|0> + sqrt(1-q_i^b)|i>.
inline std::pair<StateVector, StateVector> bob_ancilla_states(const ProtocolParams& p) {
  Vec e1(3), e2(3);
  e1 << std::sqrt(p.q1b), std::sqrt(1.0 - p.q1b), 0.0;
  e2 << std::sqrt(p.q2b), 0.0, std::sqrt(1.0 - p.q2b);
  return {StateVector(e1), StateVector(e2)};
}

/// Joint unitary on qubit x qutrit sending |psi_i>|0>_b to |phi_i>|eta_i>_b.
inline UnitaryOperator build_bob_unitary(const ProtocolParams& p) {
  p.validate();
  auto [psi1, psi2] = prepare_pair(p.s);
  auto [phi1, phi2] = prepare_pair(p.t);
  auto [eta1, eta2] = bob_ancilla_states(p);
  const StateVector anc0(detail::basis_vec(3, 0));
  return unitary_mapping_pair(tensor_product(psi1, anc0), tensor_product(psi2, anc0),
                              tensor_product(phi1, eta1), tensor_product(phi2, eta2), {2, 3});
}

/// Joint unitary on qubit x qutrit sending
///   |phi_i>|0>_c -> sqrt(q_i^c)|chi_i>|0>_c + sqrt(1-q_i^c)|phi_i>|i>_c,
/// with the failure-state pair chi_i chosen with overlap t/sqrt(q1c q2c)
/// (the common state (|phi1>+|phi2>)/norm when the overlap is 1).
inline UnitaryOperator build_charlie_unitary(const ProtocolParams& p) {
  p.validate();
  auto [phi1, phi2] = prepare_pair(p.t);
  const double qprod = std::sqrt(std::max(p.q1c * p.q2c, 0.0));
  const double chi_overlap = qprod > tol::kProbFloor ? std::clamp(p.t / qprod, 0.0, 1.0) : 1.0;
  auto [chi1, chi2] = prepare_pair(chi_overlap);

  const StateVector anc0(detail::basis_vec(3, 0));
  auto out_state = [&](const StateVector& chi, const StateVector& phi, double q, int flag) {
    Vec v = std::sqrt(q) * detail::kron(chi.amplitudes(), detail::basis_vec(3, 0)) +
            std::sqrt(1.0 - q) * detail::kron(phi.amplitudes(), detail::basis_vec(3, flag));
    return StateVector(v, {2, 3});
  };
  return unitary_mapping_pair(tensor_product(phi1, anc0), tensor_product(phi2, anc0),
                              out_state(chi1, phi1, p.q1c, 1), out_state(chi2, phi2, p.q2c, 2),
                              {2, 3});
}

/// The three effective measurement operators induced on the principal qubit.
struct PovmSet {
  std::array<Mat, 3> elements;  // Pi_0 (inconclusive), Pi_1, Pi_2
};

/// Extracts Pi_k = A_k† A_k with A_k = <k|U|0> from a qubit x qutrit unitary.
inline PovmSet povm_elements(const UnitaryOperator& u) {
  if (u.factors() != std::vector<int>{2, 3}) {
    throw std::invalid_argument("povm_elements: unitary must act on factors [2,3]");
  }
  PovmSet set;
  Mat completeness = Mat::Zero(2, 2);
  for (int k = 0; k < 3; ++k) {
    Mat a(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) a(i, j) = u.matrix()(i * 3 + k, j * 3 + 0);
    set.elements[k] = a.adjoint() * a;
    completeness += set.elements[k];

    if (!detail::is_hermitian(set.elements[k], tol::kUnitary)) {
      throw std::runtime_error("povm_elements: element not Hermitian");
    }
    if (detail::hermitian_eigenvalues(set.elements[k]).minCoeff() < tol::kPsdFloor) {
      throw std::runtime_error("povm_elements: element not PSD");
    }
  }
  if ((completeness - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() > tol::kUnitary) {
    throw std::runtime_error("povm_elements: completeness defect too large");
  }
  return set;
}

/// P_b = 1 - (q1b + q2b)/2; equals 1 - s/t at the equal-weight optimum.
inline double success_prob_bob(const ProtocolParams& p) {
  p.validate();
  return 1.0 - 0.5 * (p.q1b + p.q2b);
}

/// P_c = 1 - (q1c + q2c)/2; equals 1 - t at the equal-weight optimum.
inline double success_prob_charlie(const ProtocolParams& p) {
  p.validate();
  return 1.0 - 0.5 * (p.q1c + p.q2c);
}

/// Probability that both observers identify the state:
/// P_bc = [(1-q1b)(1-q1c) + (1-q2b)(1-q2c)] / 2.
inline double joint_success_prob(const ProtocolParams& p) {
  p.validate();
  return 0.5 * ((1.0 - p.q1b) * (1.0 - p.q1c) + (1.0 - p.q2b) * (1.0 - p.q2c));
}

/// Post-measurement system-ancilla state
/// rho_AB = (|phi1><phi1| x |eta1><eta1| + |phi2><phi2| x |eta2><eta2|) / 2.
inline DensityOperator joint_state_rho_ab(const ProtocolParams& p) {
  p.validate();
  auto [phi1, phi2] = prepare_pair(p.t);
  auto [eta1, eta2] = bob_ancilla_states(p);
  const Vec v1 = detail::kron(phi1.amplitudes(), eta1.amplitudes());
  const Vec v2 = detail::kron(phi2.amplitudes(), eta2.amplitudes());
  return DensityOperator(0.5 * (v1 * v1.adjoint() + v2 * v2.adjoint()), {2, 3});
}

}  // namespace seqdisc
