// Copyright 2026 The nucresp Authors
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

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "nucresp/error.hpp"
#include "nucresp/linalg.hpp"
#include "nucresp/pauli.hpp"

namespace nucresp {

/// Number of qubits of the mapped lattice model (T1..T4 are qubits 0..3).
inline constexpr int kModelQubits = 4;

/// Couplings of the two-species Hubbard model on the periodic 2x2 lattice.
struct ModelParams {
  double t = 1.0;  ///< hopping energy
  double U = 2.0;  ///< two-body on-site energy
  double V = 3.0;  ///< three-body on-site energy (fermionic reference only)
  double e_A = 1.0;
  double e_B = 1.0;
  /// Coefficient c of the -c * sum ZZZ term. Defaults to U/4.
  std::optional<double> three_body_coeff;

  double c3() const { return three_body_coeff.value_or(U / 4.0); }

  void validate() const {
    const bool ok = std::isfinite(t) && std::isfinite(U) && std::isfinite(V) && std::isfinite(e_A) &&
                    std::isfinite(e_B) && (!three_body_coeff || std::isfinite(*three_body_coeff));
    detail::require(ok, "ModelParams: couplings and charges must be finite");
  }
};

/// Reciprocal-lattice coordinates of a momentum transfer on the 2x2 lattice.
struct MomentumVector {
  int m = 0;
  int n = 0;

  void validate() const {
    detail::require((m == 0 || m == 1) && (n == 0 || n == 1), "MomentumVector: components must be 0 or 1");
  }
  std::string tag() const { return std::to_string(m) + std::to_string(n); }
  friend bool operator==(const MomentumVector&, const MomentumVector&) = default;
};

/// One contribution w * <P_left(tau) P_right> to the correlator.
struct CorrelatorTerm {
  double weight = 0.0;
  PauliString left;
  PauliString right;
};

namespace model {

inline PauliString z(std::initializer_list<int> qubits) { return PauliString::z_string(kModelQubits, qubits); }
inline PauliString x(int q) { return PauliString::single(kModelQubits, q, 'X'); }

inline constexpr std::array<std::array<int, 3>, 4> kTriples{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};

/// -2t * sum_k X_k
inline QubitOperator one_body(const ModelParams& p) {
  QubitOperator h(kModelQubits);
  for (int q = 0; q < kModelQubits; ++q) h.add(x(q), -2.0 * p.t);
  return h;
}

/// -(U/4) (Z1 Z4 + Z2 Z3)
inline QubitOperator two_body(const ModelParams& p) {
  QubitOperator h(kModelQubits);
  h.add(z({0, 3}), -p.U / 4.0);
  h.add(z({1, 2}), -p.U / 4.0);
  return h;
}

/// -c3 * sum_{i<j<k} Z_i Z_j Z_k
inline QubitOperator three_body(const ModelParams& p) {
  QubitOperator h(kModelQubits);
  for (const auto& tr : kTriples) h.add(z({tr[0], tr[1], tr[2]}), -p.c3());
  return h;
}

/// -2t (X_i + X_j) - (U/4) Z_i Z_j for the pair (i, j) in {(0,3), (1,2)}.
inline QubitOperator pair_block(const ModelParams& p, int i, int j) {
  QubitOperator h(kModelQubits);
  h.add(x(i), -2.0 * p.t);
  h.add(x(j), -2.0 * p.t);
  h.add(z({i, j}), -p.U / 4.0);
  return h;
}

inline double constant_shift(const ModelParams& p) { return 8.0 * p.t + p.U / 2.0; }

}  // namespace model

/// (8t + U/2) I - 2t sum X - (U/4)(Z1Z4 + Z2Z3) - c3 sum ZZZ on four qubits.
inline QubitOperator build_qubit_hamiltonian(const ModelParams& p) {
  p.validate();
  QubitOperator h = QubitOperator::identity(kModelQubits, model::constant_shift(p));
  h += model::one_body(p);
  h += model::two_body(p);
  h += model::three_body(p);
  return h;
}

/// Density excitation rho(q) with species charges e_A (T1 T2) and e_B (T3 T4).
inline QubitOperator build_excitation(const MomentumVector& q, const ModelParams& p) {
  q.validate();
  p.validate();
  QubitOperator rho(kModelQubits);
  // Site (b1 b2) picks up (-1)^(m b2 + n b1); the first qubit of each pair is b1.
  if (q.m == 0 && q.n == 0) {
    rho.add(PauliString(kModelQubits), p.e_A + p.e_B);
  } else if (q.m == 0) {
    rho.add(model::z({0}), p.e_A);
    rho.add(model::z({2}), p.e_B);
  } else if (q.n == 0) {
    rho.add(model::z({1}), p.e_A);
    rho.add(model::z({3}), p.e_B);
  } else {
    rho.add(model::z({0, 1}), p.e_A);
    rho.add(model::z({2, 3}), p.e_B);
  }
  return rho;
}

/// All ordered pairs (P_left, P_right) of the excitation with weights a_left * a_right.
inline std::vector<CorrelatorTerm> correlator_terms(const MomentumVector& q, const ModelParams& p) {
  const auto terms = build_excitation(q, p).term_list();
  std::vector<CorrelatorTerm> out;
  out.reserve(terms.size() * terms.size());
  for (const auto& [pl, al] : terms)
    for (const auto& [pr, ar] : terms) out.push_back({al.real() * ar.real(), pl, pr});
  return out;
}

/// Qubit basis index of the site-pair state (site_A, site_B), sites 0..3.
///
/// Site s of a particle is the two-bit number (b1 b2) with b1 on the first
/// qubit of its pair.
inline std::uint64_t site_pair_to_qubit_index(int site_a, int site_b) {
  detail::require(site_a >= 0 && site_a < 4 && site_b >= 0 && site_b < 4, "site index out of range");
  const auto bits = [](int s) -> std::uint64_t { return static_cast<std::uint64_t>(((s >> 1) & 1) | ((s & 1) << 1)); };
  return bits(site_a) | (bits(site_b) << 2);
}

/// Permutation matrix P with P(site-pair index, qubit index) = 1.
inline CMatrix site_pair_permutation() {
  CMatrix perm = CMatrix::Zero(16, 16);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) perm(4 * a + b, static_cast<Eigen::Index>(site_pair_to_qubit_index(a, b))) = 1.0;
  return perm;
}

/// Two-species Hamiltonian restricted to one particle per species.
///
/// Basis index 4 * site_A + site_B. Sites are numbered 0..3 as x*2 + y on the
/// periodic 2x2 lattice, so every neighbouring pair is connected by two bonds.
/// Site 0 carries the static one-body U and three-body V terms.
inline CMatrix build_fermionic_reference(const ModelParams& p) {
  p.validate();
  CMatrix h = CMatrix::Zero(16, 16);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const int row = 4 * a + b;
      double diag = 0.0;
      if (a == b) diag += p.U;
      if (a == 0) diag += p.U;
      if (b == 0) diag += p.U;
      if (a == 0 && b == 0) diag += p.V;
      h(row, row) = diag;
      for (int bit : {1, 2}) {
        h(4 * (a ^ bit) + b, row) += -2.0 * p.t;
        h(4 * a + (b ^ bit), row) += -2.0 * p.t;
      }
    }
  }
  return h;
}

}  // namespace nucresp
