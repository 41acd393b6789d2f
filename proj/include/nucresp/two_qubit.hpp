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
#include <random>
#include <vector>

#include "nucresp/error.hpp"
#include "nucresp/gates.hpp"
#include "nucresp/linalg.hpp"

namespace nucresp {

/// Euler angles with U = e^{i phase} Rz(alpha) Ry(beta) Rz(gamma).
struct ZyzAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

inline ZyzAngles zyz_decompose(const CMatrix& u) {
  detail::require(u.rows() == 2 && u.cols() == 2, "zyz_decompose: expected a 2x2 matrix");
  const CMatrix v = u / std::sqrt(u.determinant());
  const double a = std::abs(v(0, 0)), b = std::abs(v(1, 0));
  ZyzAngles z;
  z.beta = 2.0 * std::atan2(b, a);
  const double sum = a > 1e-14 ? -2.0 * std::arg(v(0, 0)) : 0.0;
  const double diff = b > 1e-14 ? 2.0 * std::arg(v(1, 0)) : 0.0;
  z.alpha = (sum + diff) / 2.0;
  z.gamma = (sum - diff) / 2.0;
  return z;
}

/// Rz(gamma), Ry(beta), Rz(alpha) in time order.
inline void append_single_qubit(std::vector<Gate>& out, const CMatrix& u, int qubit) {
  const ZyzAngles z = zyz_decompose(u);
  out.push_back(Gate::rz(qubit, z.gamma));
  out.push_back(Gate::ry(qubit, z.beta));
  out.push_back(Gate::rz(qubit, z.alpha));
}

/// Interaction coefficients of the canonical gate exp(i(a XX + b YY + c ZZ)).
struct CanonicalCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// U = e^{i g} (K1_hi (x) K1_lo) canonical(a, b, c) (K2_hi (x) K2_lo).
struct KakDecomposition {
  CMatrix k1_lo, k1_hi, k2_lo, k2_hi;
  CanonicalCoefficients coeffs;
  double global_phase = 0.0;
};

namespace detail {

inline CMatrix magic_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix b(4, 4);
  b << 1, 0, 0, kI, 0, kI, 1, 0, 0, kI, -1, 0, 1, 0, 0, -kI;
  return b * r;
}

inline CMatrix kron2(const CMatrix& hi, const CMatrix& lo) {
  CMatrix out(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block(2 * i, 2 * j, 2, 2) = hi(i, j) * lo;
  return out;
}

/// Splits a 4x4 tensor product into (hi, lo) with det(lo) = 1.
inline std::pair<CMatrix, CMatrix> split_tensor_product(const CMatrix& k) {
  Eigen::Index r = 0, c = 0;
  k.cwiseAbs().maxCoeff(&r, &c);
  CMatrix lo = k.block((r / 2) * 2, (c / 2) * 2, 2, 2);
  lo /= std::sqrt(lo.determinant());
  CMatrix hi(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) hi(i, j) = (lo.adjoint() * k.block(2 * i, 2 * j, 2, 2)).trace() / 2.0;
  ensure((kron2(hi, lo) - k).cwiseAbs().maxCoeff() < 1e-9, "KAK: local factor is not a tensor product");
  return {hi, lo};
}

}  // namespace detail

/// Cartan decomposition of a two-qubit unitary. Basis index is bit(lo) + 2 bit(hi).
inline KakDecomposition kak_decompose(const CMatrix& u_in) {
  detail::require(u_in.rows() == 4 && u_in.cols() == 4, "kak_decompose: expected a 4x4 matrix");
  detail::require((u_in.adjoint() * u_in - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-9,
                  "kak_decompose: matrix is not unitary");
  const CMatrix b = detail::magic_basis();
  const CMatrix u = u_in / std::pow(u_in.determinant(), 0.25);
  const CMatrix up = b.adjoint() * u * b;
  const CMatrix m2 = up.transpose() * up;

  // Real and imaginary parts of m2 commute, so a generic real combination
  // shares their common orthogonal eigenbasis.
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> dist(0.1, 2.0);
  Eigen::Matrix4d p;
  bool found = false;
  for (int attempt = 0; attempt < 50 && !found; ++attempt) {
    const double r = dist(rng);
    const Eigen::Matrix4d mix = m2.real() + r * m2.imag();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(mix);
    p = es.eigenvectors();
    const CMatrix d = p.transpose().cast<cplx>() * m2 * p.cast<cplx>();
    found = (d - CMatrix(d.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-9;
  }
  detail::ensure(found, "kak_decompose: failed to diagonalize the symmetric square");
  if (p.determinant() < 0) p.col(0) *= -1.0;

  const CMatrix pc = p.cast<cplx>();
  const CVector d = (pc.transpose() * m2 * pc).diagonal();
  Eigen::Vector4d theta;
  for (int k = 0; k < 4; ++k) theta(k) = std::arg(d(k)) / 2.0;
  auto make_o1 = [&] {
    CVector ph(4);
    for (int k = 0; k < 4; ++k) ph(k) = std::polar(1.0, -theta(k));
    return CMatrix(up * pc * ph.asDiagonal());
  };
  CMatrix o1 = make_o1();
  if (o1.determinant().real() < 0) {
    theta(0) += M_PI;
    o1 = make_o1();
  }
  detail::ensure(o1.imag().cwiseAbs().maxCoeff() < 1e-8, "kak_decompose: left factor is not real");

  const CMatrix k1 = b * o1 * b.adjoint();
  const CMatrix k2 = b * pc.transpose() * b.adjoint();

  // Eigenvalues of XX, YY, ZZ on the magic basis columns fix (a, b, c, g).
  const CMatrix xx = detail::kron2(Gate::x(0).matrix(), Gate::x(0).matrix());
  const CMatrix yy = detail::kron2(Gate::one(GateKind::Y, 0).matrix(), Gate::one(GateKind::Y, 0).matrix());
  const CMatrix zz = detail::kron2(Gate::z(0).matrix(), Gate::z(0).matrix());
  Eigen::Matrix4d sys;
  sys.col(0) = (b.adjoint() * xx * b).diagonal().real();
  sys.col(1) = (b.adjoint() * yy * b).diagonal().real();
  sys.col(2) = (b.adjoint() * zz * b).diagonal().real();
  sys.col(3).setOnes();
  const Eigen::Vector4d sol = sys.fullPivLu().solve(theta);

  KakDecomposition out;
  std::tie(out.k1_hi, out.k1_lo) = detail::split_tensor_product(k1);
  std::tie(out.k2_hi, out.k2_lo) = detail::split_tensor_product(k2);
  out.coeffs = {sol(0), sol(1), sol(2)};
  out.global_phase = sol(3);
  return out;
}

/// Three-CNOT circuit for exp(i(a XX + b YY + c ZZ)) on (lo, hi), up to phase.
inline std::vector<Gate> canonical_gate_circuit(const CanonicalCoefficients& k, int lo, int hi) {
  const double h = M_PI / 2.0;
  return {Gate::rz(hi, h),
          Gate::cnot(hi, lo),
          Gate::rz(lo, h - 2.0 * k.c),
          Gate::ry(hi, h - 2.0 * k.a),
          Gate::cnot(lo, hi),
          Gate::ry(hi, 2.0 * k.b - h),
          Gate::cnot(hi, lo),
          Gate::rz(lo, -h)};
}

/// Gate sequence equal to u up to a global phase, always with three CNOTs.
inline std::vector<Gate> synthesize_two_qubit(const CMatrix& u, int lo, int hi) {
  const KakDecomposition kak = kak_decompose(u);
  std::vector<Gate> out;
  append_single_qubit(out, kak.k2_lo, lo);
  append_single_qubit(out, kak.k2_hi, hi);
  for (const auto& g : canonical_gate_circuit(kak.coeffs, lo, hi)) out.push_back(g);
  append_single_qubit(out, kak.k1_lo, lo);
  append_single_qubit(out, kak.k1_hi, hi);
  return out;
}

}  // namespace nucresp
