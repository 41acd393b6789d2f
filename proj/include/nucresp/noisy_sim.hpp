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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "nucresp/circuits.hpp"
#include "nucresp/error.hpp"
#include "nucresp/gates.hpp"
#include "nucresp/linalg.hpp"
#include "nucresp/state.hpp"

namespace nucresp {

/// Depolarizing gate noise plus per-qubit readout confusion.
struct NoiseModel {
  double p1 = 0.0;  ///< after every single-qubit gate
  double p2 = 0.0;  ///< after every two-qubit gate
  /// Row = true bit, column = reported bit. Empty means perfect readout; a
  /// single entry applies to every qubit.
  std::vector<Eigen::Matrix2d> readout;

  static NoiseModel ideal() { return {}; }

  static Eigen::Matrix2d flip_confusion(double p0to1, double p1to0) {
    Eigen::Matrix2d m;
    m << 1.0 - p0to1, p0to1, p1to0, 1.0 - p1to0;
    return m;
  }

  /// p1 = 0.001, p2 = 0.01, symmetric readout flip 0.02.
  static NoiseModel defaults() { return {0.001, 0.01, {flip_confusion(0.02, 0.02)}}; }

  Eigen::Matrix2d confusion(int qubit) const {
    if (readout.empty()) return Eigen::Matrix2d::Identity();
    if (readout.size() == 1) return readout.front();
    detail::require(qubit >= 0 && static_cast<std::size_t>(qubit) < readout.size(), "NoiseModel: no confusion for qubit");
    return readout[static_cast<std::size_t>(qubit)];
  }

  bool has_gate_noise() const { return p1 > 0.0 || p2 > 0.0; }

  void validate() const {
    detail::require(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0, "NoiseModel: probabilities must lie in [0, 1]");
    for (const auto& m : readout) {
      detail::require((m.array() >= 0.0).all() && (m.array() <= 1.0).all(), "NoiseModel: confusion entries out of range");
      detail::require(std::abs(m.row(0).sum() - 1.0) < 1e-12 && std::abs(m.row(1).sum() - 1.0) < 1e-12,
                      "NoiseModel: confusion rows must sum to 1");
    }
  }
};

/// Outcome counts of one measured qubit.
struct ShotRecord {
  std::uint64_t shots = 0;
  std::map<std::string, std::uint64_t> counts;  ///< keys "0" and "1"

  std::uint64_t count(const std::string& k) const {
    auto it = counts.find(k);
    return it == counts.end() ? 0 : it->second;
  }
  double frequency(const std::string& k) const { return static_cast<double>(count(k)) / static_cast<double>(shots); }
  /// Raw estimate of the measured Pauli, (n0 - n1) / M.
  double mean() const { return frequency("0") - frequency("1"); }
};

inline StateVector run_ideal(const Circuit& c, const StateVector& init) {
  detail::require(init.n_qubits() == c.n_qubits(), "run_ideal: state size differs from circuit");
  CVector v = init.amplitudes();
  apply_circuit(c, v);
  return StateVector(std::move(v));
}

namespace detail {

/// rho -> (1 - p) rho + p Tr_S(rho) (x) I / 2^|S| for the wires in mask.
inline void depolarize(CMatrix& rho, std::uint64_t mask, double p) {
  if (p <= 0.0) return;
  const auto dim = static_cast<std::uint64_t>(rho.rows());
  const double inv_d = 1.0 / static_cast<double>(1ULL << popcount(mask));
  CMatrix mixed = CMatrix::Zero(rho.rows(), rho.cols());
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & mask) continue;
    for (std::uint64_t j = 0; j < dim; ++j) {
      if (j & mask) continue;
      cplx acc = 0.0;
      for (std::uint64_t s = mask;; s = (s - 1) & mask) {
        acc += rho(static_cast<Eigen::Index>(i | s), static_cast<Eigen::Index>(j | s));
        if (s == 0) break;
      }
      acc *= inv_d;
      for (std::uint64_t s = mask;; s = (s - 1) & mask) {
        mixed(static_cast<Eigen::Index>(i | s), static_cast<Eigen::Index>(j | s)) = acc;
        if (s == 0) break;
      }
    }
  }
  rho = (1.0 - p) * rho + p * mixed;
}

inline void apply_unitary_channel(const Gate& g, CMatrix& rho) {
  const auto dim = rho.rows();
  for (Eigen::Index col = 0; col < dim; ++col) kernel::apply(g, rho.col(col).data(), dim);
  // Right multiplication by U^dagger: act with conj(U) on the rows.
  const CMatrix m = g.matrix().conjugate();
  for (Eigen::Index row = 0; row < dim; ++row) {
    if (g.arity() == 1) kernel::apply_1q(m, g.q[0], rho.row(row).data(), dim, rho.outerStride());
    else kernel::apply_2q(m, g.q[0], g.q[1], rho.row(row).data(), dim, rho.outerStride());
  }
}

}  // namespace detail

/// Gate-by-gate density-matrix evolution with depolarizing noise after each gate.
///
/// A SWAP is charged as three CNOTs: p = 1 - (1 - p2)^3.
inline DensityMatrix run_noisy(const Circuit& c, const DensityMatrix& init, const NoiseModel& noise) {
  noise.validate();
  detail::require(init.n_qubits() == c.n_qubits(), "run_noisy: state size differs from circuit");
  CMatrix rho = init.matrix();
  for (const auto& g : c.gates()) {
    detail::apply_unitary_channel(g, rho);
    if (g.arity() == 1) {
      detail::depolarize(rho, 1ULL << g.q[0], noise.p1);
    } else {
      const double p = g.kind == GateKind::SWAP ? 1.0 - std::pow(1.0 - noise.p2, 3) : noise.p2;
      detail::depolarize(rho, (1ULL << g.q[0]) | (1ULL << g.q[1]), p);
    }
  }
  DensityMatrix out = DensityMatrix::unchecked(std::move(rho));
  const std::string bad = out.invariant_violation(1e-8);
  detail::ensure(bad.empty(), "run_noisy: " + bad);
  return out;
}

/// Reduced 2x2 state of one wire.
inline Eigen::Matrix2cd reduced_qubit(const CMatrix& rho, int wire) {
  Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
  const auto bit = std::uint64_t{1} << wire;
  const auto dim = static_cast<std::uint64_t>(rho.rows());
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(i | bit);
    r(0, 0) += rho(a, a);
    r(0, 1) += rho(a, b);
    r(1, 0) += rho(b, a);
    r(1, 1) += rho(b, b);
  }
  return r;
}

inline Eigen::Matrix2cd reduced_qubit(const StateVector& psi, int wire) {
  Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
  const auto bit = std::uint64_t{1} << wire;
  const CVector& v = psi.amplitudes();
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(v.size()); ++i) {
    if (i & bit) continue;
    const cplx a = v(static_cast<Eigen::Index>(i)), b = v(static_cast<Eigen::Index>(i | bit));
    r(0, 0) += std::norm(a);
    r(0, 1) += a * std::conj(b);
    r(1, 0) += b * std::conj(a);
    r(1, 1) += std::norm(b);
  }
  return r;
}

/// Exact <sigma> of a single-qubit Pauli on a reduced state.
inline double pauli_expectation(const Eigen::Matrix2cd& r, MeasureBasis basis) {
  switch (basis) {
    case MeasureBasis::X: return 2.0 * r(0, 1).real();
    case MeasureBasis::Y: return -2.0 * r(0, 1).imag();
    default: return (r(0, 0) - r(1, 1)).real();
  }
}

/// Probability of reporting 1 after readout confusion, given <sigma> before readout.
inline double reported_one_probability(double expectation, const Eigen::Matrix2d& confusion) {
  const double p1 = std::clamp((1.0 - expectation) / 2.0, 0.0, 1.0);
  return std::clamp((1.0 - p1) * confusion(0, 1) + p1 * confusion(1, 1), 0.0, 1.0);
}

/// Binomial draw of M readouts of a qubit whose reported-1 probability is p.
inline ShotRecord sample_bernoulli(double p_one, std::uint64_t shots, std::uint64_t seed) {
  detail::require(shots >= 1, "sample: at least one shot is required");
  std::mt19937_64 rng(seed);
  std::binomial_distribution<std::uint64_t> dist(shots, std::clamp(p_one, 0.0, 1.0));
  const std::uint64_t ones = dist(rng);
  return {shots, {{"0", shots - ones}, {"1", ones}}};
}

/// Measures one qubit in the given basis with readout confusion and M shots.
inline ShotRecord sample_ancilla(const Eigen::Matrix2cd& reduced, MeasureBasis basis, std::uint64_t shots,
                                 const NoiseModel& noise, std::uint64_t seed, int wire = kAncilla) {
  noise.validate();
  const double e = pauli_expectation(reduced, basis);
  return sample_bernoulli(reported_one_probability(e, noise.confusion(wire)), shots, seed);
}

inline ShotRecord sample_ancilla(const StateVector& psi, MeasureBasis basis, std::uint64_t shots,
                                 const NoiseModel& noise, std::uint64_t seed, int wire = kAncilla) {
  return sample_ancilla(reduced_qubit(psi, wire), basis, shots, noise, seed, wire);
}

inline ShotRecord sample_ancilla(const DensityMatrix& rho, MeasureBasis basis, std::uint64_t shots,
                                 const NoiseModel& noise, std::uint64_t seed, int wire = kAncilla) {
  return sample_ancilla(reduced_qubit(rho.matrix(), wire), basis, shots, noise, seed, wire);
}

}  // namespace nucresp
