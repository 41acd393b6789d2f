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

#include <cmath>
#include <string>

#include "nucresp/error.hpp"
#include "nucresp/linalg.hpp"

namespace nucresp {

/// Pure state on n qubits. Qubit k is bit k of the basis index.
class StateVector {
 public:
  StateVector() = default;

  /// |0...0> on n qubits.
  explicit StateVector(int n_qubits) : n_(n_qubits) {
    detail::require(n_qubits >= 0 && n_qubits <= 20, "StateVector: unsupported qubit count");
    amp_ = CVector::Zero(Eigen::Index{1} << n_qubits);
    amp_(0) = 1.0;
  }

  /// Wraps amplitudes. Length must be a power of two and the norm must be 1.
  explicit StateVector(CVector amplitudes) : amp_(std::move(amplitudes)) {
    const auto dim = amp_.size();
    detail::require(dim > 0 && (dim & (dim - 1)) == 0, "StateVector: length is not a power of two");
    n_ = 0;
    while ((Eigen::Index{1} << n_) < dim) ++n_;
    detail::require(std::abs(amp_.norm() - 1.0) <= 1e-10, "StateVector: state is not normalized");
  }

  static StateVector basis(int n_qubits, std::uint64_t index) {
    StateVector s(n_qubits);
    detail::require(index < static_cast<std::uint64_t>(s.dim()), "StateVector: basis index out of range");
    s.amp_(0) = 0.0;
    s.amp_(static_cast<Eigen::Index>(index)) = 1.0;
    return s;
  }

  int n_qubits() const { return n_; }
  Eigen::Index dim() const { return amp_.size(); }
  const CVector& amplitudes() const { return amp_; }
  CVector& mutable_amplitudes() { return amp_; }
  double norm() const { return amp_.norm(); }

  /// Product state with this register on the high bits and `low` below it.
  StateVector tensor_above(const StateVector& low) const {
    CVector out(dim() * low.dim());
    for (Eigen::Index h = 0; h < dim(); ++h)
      out.segment(h * low.dim(), low.dim()) = amp_(h) * low.amp_;
    return StateVector(std::move(out));
  }

 private:
  int n_ = 0;
  CVector amp_;
};

/// Mixed state on n qubits.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  explicit DensityMatrix(const StateVector& psi)
      : n_(psi.n_qubits()), rho_(psi.amplitudes() * psi.amplitudes().adjoint()) {}

  explicit DensityMatrix(CMatrix rho) : rho_(std::move(rho)) {
    const auto dim = rho_.rows();
    detail::require(dim > 0 && dim == rho_.cols() && (dim & (dim - 1)) == 0,
                    "DensityMatrix: matrix must be square with power-of-two side");
    n_ = 0;
    while ((Eigen::Index{1} << n_) < dim) ++n_;
    detail::require(hermitian_defect(rho_) <= 1e-10, "DensityMatrix: not Hermitian");
    detail::require(std::abs(rho_.trace() - cplx(1.0)) <= 1e-10, "DensityMatrix: trace is not 1");
  }

  /// Wraps a matrix without checks; call invariant_violation() afterwards.
  static DensityMatrix unchecked(CMatrix rho) {
    DensityMatrix d;
    d.rho_ = std::move(rho);
    while ((Eigen::Index{1} << d.n_) < d.rho_.rows()) ++d.n_;
    return d;
  }

  int n_qubits() const { return n_; }
  Eigen::Index dim() const { return rho_.rows(); }
  const CMatrix& matrix() const { return rho_; }
  CMatrix& mutable_matrix() { return rho_; }

  /// Checks Hermiticity, unit trace and positivity. Returns a message on failure.
  std::string invariant_violation(double tol = 1e-8) const {
    if (hermitian_defect(rho_) > tol) return "density matrix lost Hermiticity";
    if (std::abs(rho_.trace() - cplx(1.0)) > tol) return "density matrix trace drifted from 1";
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -std::max(tol, 1e-9)) return "density matrix has a negative eigenvalue";
    return {};
  }

 private:
  int n_ = 0;
  CMatrix rho_;
};

}  // namespace nucresp
