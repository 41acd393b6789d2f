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
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "nucresp/error.hpp"
#include "nucresp/linalg.hpp"
#include "nucresp/pauli.hpp"
#include "nucresp/state.hpp"

namespace nucresp {

/// Full spectral decomposition of a Hermitian matrix.
struct EigenSystem {
  RVector energies;  ///< ascending
  CMatrix vectors;   ///< orthonormal columns

  Eigen::Index dim() const { return energies.size(); }
  double ground_energy() const { return energies(0); }
  CVector ground_state() const { return vectors.col(0); }

  /// Amplitudes of psi in the eigenbasis.
  CVector coefficients(const CVector& psi) const { return vectors.adjoint() * psi; }
  /// Operator in the eigenbasis.
  CMatrix to_eigenbasis(const CMatrix& op) const { return vectors.adjoint() * op * vectors; }
};

inline EigenSystem diagonalize(const CMatrix& h) {
  detail::require(h.rows() == h.cols() && h.rows() > 0, "diagonalize: matrix must be square");
  detail::require(h.rows() <= 4096, "diagonalize: dimension exceeds 4096");
  detail::require(hermitian_defect(h) <= 1e-10, "diagonalize: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  detail::ensure(es.info() == Eigen::Success, "diagonalize: eigensolver failed");
  EigenSystem out{es.eigenvalues(), es.eigenvectors()};
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double residual = (h * out.vectors - out.vectors * out.energies.cast<cplx>().asDiagonal())
                              .colwise().norm().maxCoeff();
  detail::ensure(residual < 1e-10 * scale * std::sqrt(static_cast<double>(h.rows())),
                 "diagonalize: residual above tolerance");
  return out;
}

inline EigenSystem diagonalize(const QubitOperator& h) {
  detail::require(h.is_hermitian(1e-10), "diagonalize: operator is not Hermitian");
  return diagonalize(to_matrix(h));
}

namespace detail {

inline void check_state(const EigenSystem& eig, const CVector& psi) {
  require(psi.size() == eig.dim(), "oracle: state dimension mismatch");
  require(std::abs(psi.norm() - 1.0) <= 1e-10, "oracle: state is not normalized");
}

inline CVector phases(const RVector& e, double tau) {
  return (e.cast<cplx>() * cplx(0.0, -tau)).array().exp().matrix();
}

}  // namespace detail

/// <psi| e^{iH tau} A e^{-iH tau} A |psi> evaluated in the eigenbasis of H.
inline cplx exact_correlator(const EigenSystem& eig, const CMatrix& a, const CVector& psi, double tau) {
  detail::check_state(eig, psi);
  detail::require(a.rows() == eig.dim() && a.cols() == eig.dim(), "exact_correlator: operator dimension mismatch");
  const CVector c = eig.coefficients(psi);
  const CMatrix ae = eig.to_eigenbasis(a);
  const CVector d = detail::phases(eig.energies, tau);
  const CVector right = d.asDiagonal() * (ae * c);  // e^{-iE tau} A c
  const CVector left = d.asDiagonal() * c;          // e^{-iE tau} c
  return left.dot(ae * right);
}

inline cplx exact_correlator(const QubitOperator& h, const QubitOperator& a, const StateVector& psi, double tau) {
  return exact_correlator(diagonalize(h), to_matrix(a), psi.amplitudes(), tau);
}

/// One line of a discrete spectrum.
struct SpectralLine {
  double omega = 0.0;
  double weight = 0.0;
};

/// Discrete response lines of A on psi.
///
/// For an eigenstate with energy E_ref the lines sit at E_n - E_ref with weight
/// |<psi|A|n>|^2. Otherwise they are the time-averaged diagonal of the
/// two-time correlator, E_n - E_m with weight |c_m|^2 |A_mn|^2. Lines closer
/// than merge_tol are combined and lines below 1e-14 are dropped.
inline std::vector<SpectralLine> spectral_response(const EigenSystem& eig, const CMatrix& a, const CVector& psi,
                                                   double merge_tol = 1e-8) {
  detail::check_state(eig, psi);
  const CVector c = eig.coefficients(psi);
  const CMatrix ae = eig.to_eigenbasis(a);
  const double e_ref = (c.cwiseAbs2().transpose() * eig.energies)(0);
  const double spread = (c.cwiseAbs2().array() * (eig.energies.array() - e_ref).square()).sum();
  std::vector<SpectralLine> lines;
  if (spread < 1e-18) {
    const CVector amp = ae * c;  // <n|A|psi>
    for (Eigen::Index n = 0; n < eig.dim(); ++n) lines.push_back({eig.energies(n) - e_ref, std::norm(amp(n))});
  } else {
    for (Eigen::Index m = 0; m < eig.dim(); ++m) {
      const double pm = std::norm(c(m));
      if (pm < 1e-16) continue;
      for (Eigen::Index n = 0; n < eig.dim(); ++n)
        lines.push_back({eig.energies(n) - eig.energies(m), pm * std::norm(ae(n, m))});
    }
  }
  std::sort(lines.begin(), lines.end(), [](const auto& l, const auto& r) { return l.omega < r.omega; });
  std::vector<SpectralLine> merged;
  for (const auto& l : lines) {
    if (!merged.empty() && std::abs(l.omega - merged.back().omega) < merge_tol) {
      merged.back().weight += l.weight;
    } else {
      merged.push_back(l);
    }
  }
  std::erase_if(merged, [](const SpectralLine& l) { return l.weight < 1e-14; });
  return merged;
}

/// <psi| A H^m A |psi> for Hermitian A.
inline double sum_rule(const EigenSystem& eig, const CMatrix& a, const CVector& psi, int m) {
  detail::require(m >= 0, "sum_rule: moment order must be non-negative");
  detail::check_state(eig, psi);
  const CVector v = eig.to_eigenbasis(a) * eig.coefficients(psi);
  return (v.cwiseAbs2().array() * eig.energies.array().pow(m)).sum();
}

/// Matrix B with C_E(tau_E) = sum_ij B_ij exp(-(E_i + E_j) tau_E).
inline CMatrix euclidean_coefficients(const EigenSystem& eig, const CMatrix& a, const CVector& psi) {
  detail::check_state(eig, psi);
  const CVector c = eig.coefficients(psi);
  const CMatrix ae = eig.to_eigenbasis(a);
  const CVector ac = ae * c;
  CMatrix b(eig.dim(), eig.dim());
  for (Eigen::Index i = 0; i < eig.dim(); ++i)
    for (Eigen::Index j = 0; j < eig.dim(); ++j) b(i, j) = std::conj(c(i)) * ae(i, j) * ac(j);
  return b;
}

/// <psi| e^{-H tau_E} A e^{-H tau_E} A |psi>. Real for real states and operators.
inline cplx euclidean_correlator(const EigenSystem& eig, const CMatrix& a, const CVector& psi, double tau_e) {
  detail::require(tau_e >= 0.0, "euclidean_correlator: imaginary time must be non-negative");
  const CMatrix b = euclidean_coefficients(eig, a, psi);
  cplx s = 0.0;
  for (Eigen::Index i = 0; i < eig.dim(); ++i)
    for (Eigen::Index j = 0; j < eig.dim(); ++j) s += b(i, j) * std::exp(-(eig.energies(i) + eig.energies(j)) * tau_e);
  return s;
}

/// State written as coefficients over an eigenbasis.
struct ContaminatedState {
  CVector coefficients;
  double fidelity = 1.0;

  CVector state(const EigenSystem& eig) const { return eig.vectors * coefficients; }
};

/// c_0 = sqrt(F); the remaining weight 1 - F is spread over the excited
/// states with uniform random magnitudes and phases.
inline ContaminatedState make_contaminated_state(const EigenSystem& eig, double target_fidelity, std::uint64_t seed) {
  detail::require(target_fidelity > 0.0 && target_fidelity <= 1.0, "make_contaminated_state: fidelity out of (0, 1]");
  const Eigen::Index dim = eig.dim();
  CVector c = CVector::Zero(dim);
  c(0) = std::sqrt(target_fidelity);
  if (target_fidelity < 1.0) {
    detail::require(dim > 1, "make_contaminated_state: no excited states to contaminate with");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    CVector rest(dim - 1);
    for (Eigen::Index i = 0; i < dim - 1; ++i) {
      const double r = mag(rng);
      rest(i) = std::polar(r, phase(rng));
    }
    if (rest.norm() == 0.0) rest(0) = 1.0;
    c.tail(dim - 1) = rest / rest.norm() * std::sqrt(1.0 - target_fidelity);
  }
  ContaminatedState out{c, std::norm(c(0))};
  detail::ensure(std::abs(c.norm() - 1.0) < 1e-12, "make_contaminated_state: normalization failed");
  return out;
}

/// Ground state with a single excited admixture c_m = eps.
inline ContaminatedState single_contamination(const EigenSystem& eig, Eigen::Index m, double eps) {
  detail::require(m > 0 && m < eig.dim(), "single_contamination: bad excited-state index");
  detail::require(eps >= 0.0 && eps <= 1.0, "single_contamination: amplitude out of range");
  CVector c = CVector::Zero(eig.dim());
  c(0) = std::sqrt(1.0 - eps * eps);
  c(m) = eps;
  return {c, 1.0 - eps * eps};
}

}  // namespace nucresp
