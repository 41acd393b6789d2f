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
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nucresp/error.hpp"
#include "nucresp/linalg.hpp"

namespace nucresp {

enum class GateKind : std::uint8_t { H, X, Y, Z, S, Sdg, Rx, Ry, Rz, CNOT, CZ, SWAP };

/// Which part of a composite circuit a gate came from. Used by the optimizer.
enum class Block : std::uint8_t {
  None,
  Init,
  Prep,
  ControlRight,
  Flip,
  OneBody,
  TwoBody,
  ThreeBody,
  PairBlock,
  ControlLeft,
  Measure,
};

inline std::string_view gate_name(GateKind k) {
  static constexpr std::array<std::string_view, 12> kNames{"H",  "X",  "Y",  "Z",    "S",  "SDG",
                                                           "RX", "RY", "RZ", "CNOT", "CZ", "SWAP"};
  return kNames[static_cast<std::size_t>(k)];
}

struct Gate {
  GateKind kind = GateKind::H;
  std::array<int, 2> q{-1, -1};  ///< for CNOT q[0] is the control
  double theta = 0.0;
  Block block = Block::None;

  static Gate one(GateKind k, int a, double th = 0.0) { return {k, {a, -1}, th, Block::None}; }
  static Gate two(GateKind k, int a, int b) { return {k, {a, b}, 0.0, Block::None}; }
  static Gate h(int a) { return one(GateKind::H, a); }
  static Gate x(int a) { return one(GateKind::X, a); }
  static Gate z(int a) { return one(GateKind::Z, a); }
  static Gate s(int a) { return one(GateKind::S, a); }
  static Gate sdg(int a) { return one(GateKind::Sdg, a); }
  static Gate rx(int a, double th) { return one(GateKind::Rx, a, th); }
  static Gate ry(int a, double th) { return one(GateKind::Ry, a, th); }
  static Gate rz(int a, double th) { return one(GateKind::Rz, a, th); }
  static Gate cnot(int c, int t) { return two(GateKind::CNOT, c, t); }
  static Gate cz(int a, int b) { return two(GateKind::CZ, a, b); }
  static Gate swap(int a, int b) { return two(GateKind::SWAP, a, b); }

  int arity() const { return kind >= GateKind::CNOT ? 2 : 1; }
  bool is_two_qubit() const { return arity() == 2; }
  bool is_rotation() const { return kind == GateKind::Rx || kind == GateKind::Ry || kind == GateKind::Rz; }
  bool acts_on(int qubit) const { return q[0] == qubit || (arity() == 2 && q[1] == qubit); }
  bool is_diagonal() const {
    return kind == GateKind::Z || kind == GateKind::S || kind == GateKind::Sdg || kind == GateKind::Rz ||
           kind == GateKind::CZ;
  }

  /// 2x2 or 4x4 matrix. Local basis index is bit(q[0]) + 2 bit(q[1]).
  CMatrix matrix() const {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const double r = 1.0 / std::sqrt(2.0);
    CMatrix m;
    switch (kind) {
      case GateKind::H: m = CMatrix(2, 2); m << r, r, r, -r; break;
      case GateKind::X: m = CMatrix(2, 2); m << 0, 1, 1, 0; break;
      case GateKind::Y: m = CMatrix(2, 2); m << 0, -kI, kI, 0; break;
      case GateKind::Z: m = CMatrix(2, 2); m << 1, 0, 0, -1; break;
      case GateKind::S: m = CMatrix(2, 2); m << 1, 0, 0, kI; break;
      case GateKind::Sdg: m = CMatrix(2, 2); m << 1, 0, 0, -kI; break;
      case GateKind::Rx: m = CMatrix(2, 2); m << c, -kI * s, -kI * s, c; break;
      case GateKind::Ry: m = CMatrix(2, 2); m << c, -s, s, c; break;
      case GateKind::Rz: m = CMatrix(2, 2); m << std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2); break;
      case GateKind::CNOT:
        m = CMatrix::Zero(4, 4);
        m(0, 0) = m(2, 2) = 1.0;
        m(3, 1) = m(1, 3) = 1.0;
        break;
      case GateKind::CZ: m = CMatrix::Identity(4, 4); m(3, 3) = -1.0; break;
      case GateKind::SWAP:
        m = CMatrix::Zero(4, 4);
        m(0, 0) = m(3, 3) = 1.0;
        m(1, 2) = m(2, 1) = 1.0;
        break;
    }
    return m;
  }

  /// True if this followed by o is the identity.
  bool cancels_with(const Gate& o) const {
    if (o.kind != kind && !((kind == GateKind::S && o.kind == GateKind::Sdg) ||
                            (kind == GateKind::Sdg && o.kind == GateKind::S)))
      return false;
    if (arity() == 1) {
      if (o.q[0] != q[0]) return false;
      if (is_rotation()) return theta + o.theta == 0.0;
      return kind != GateKind::S && kind != GateKind::Sdg ? true : o.kind != kind;
    }
    if (kind == GateKind::CNOT) return q == o.q;
    return (q == o.q) || (q[0] == o.q[1] && q[1] == o.q[0]);
  }
};

/// Ordered gate list with an output relabeling.
///
/// `layout[k]` is the wire that holds logical qubit k once the gates have run.
/// It differs from the identity only after SWAP gates were absorbed.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n_qubits) : n_(n_qubits), layout_(static_cast<std::size_t>(n_qubits)) {
    detail::require(n_qubits >= 1 && n_qubits <= 20, "Circuit: unsupported qubit count");
    std::iota(layout_.begin(), layout_.end(), 0);
  }

  int n_qubits() const { return n_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }
  const std::vector<Gate>& gates() const { return gates_; }
  const Gate& operator[](std::size_t i) const { return gates_[i]; }
  const std::vector<int>& layout() const { return layout_; }
  bool has_identity_layout() const {
    for (int k = 0; k < n_; ++k)
      if (layout_[static_cast<std::size_t>(k)] != k) return false;
    return true;
  }

  Circuit& append(Gate g) {
    validate(g);
    gates_.push_back(g);
    return *this;
  }

  Circuit& append(Gate g, Block tag) {
    g.block = tag;
    return append(g);
  }

  /// Appends another circuit, shifting its qubits by offset and optionally retagging.
  Circuit& append(const Circuit& o, int offset = 0, Block tag = Block::None) {
    detail::require(o.has_identity_layout(), "Circuit: cannot append a relabeled circuit");
    detail::require(offset >= 0 && o.n_ + offset <= n_, "Circuit: appended circuit does not fit");
    for (Gate g : o.gates_) {
      g.q[0] += offset;
      if (g.arity() == 2) g.q[1] += offset;
      if (tag != Block::None) g.block = tag;
      append(g);
    }
    return *this;
  }

  void set_gates(std::vector<Gate> gates) {
    for (const auto& g : gates) validate(g);
    gates_ = std::move(gates);
  }

  void set_layout(std::vector<int> layout) {
    detail::require(static_cast<int>(layout.size()) == n_, "Circuit: layout size mismatch");
    std::vector<int> sorted = layout;
    std::sort(sorted.begin(), sorted.end());
    for (int k = 0; k < n_; ++k)
      detail::require(sorted[static_cast<std::size_t>(k)] == k, "Circuit: layout is not a permutation");
    layout_ = std::move(layout);
  }

  bool touches(int qubit) const {
    return std::any_of(gates_.begin(), gates_.end(), [&](const Gate& g) { return g.acts_on(qubit); });
  }

  std::size_t count(GateKind k) const {
    return static_cast<std::size_t>(std::count_if(gates_.begin(), gates_.end(), [&](const Gate& g) { return g.kind == k; }));
  }

  /// One gate per line: `KIND q0 [q1] [theta]`.
  std::string to_text() const {
    std::ostringstream os;
    os << std::setprecision(17);
    for (const auto& g : gates_) {
      os << gate_name(g.kind) << ' ' << g.q[0];
      if (g.arity() == 2) os << ' ' << g.q[1];
      if (g.is_rotation()) os << ' ' << g.theta;
      os << '\n';
    }
    return os.str();
  }

 private:
  void validate(const Gate& g) const {
    detail::require(g.q[0] >= 0 && g.q[0] < n_, "Circuit: gate qubit out of range");
    if (g.arity() == 2) {
      detail::require(g.q[1] >= 0 && g.q[1] < n_, "Circuit: gate qubit out of range");
      detail::require(g.q[0] != g.q[1], "Circuit: two-qubit gate needs distinct qubits");
    }
    detail::require(std::isfinite(g.theta), "Circuit: rotation angle must be finite");
  }

  int n_ = 0;
  std::vector<Gate> gates_;
  std::vector<int> layout_;
};

namespace kernel {

/// Applies a 2x2 matrix to qubit q of the vector stored at data with given stride.
inline void apply_1q(const CMatrix& m, int q, cplx* data, std::int64_t dim, std::int64_t stride = 1) {
  const std::int64_t bit = std::int64_t{1} << q;
  const cplx m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  for (std::int64_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    cplx& a = data[i * stride];
    cplx& b = data[(i | bit) * stride];
    const cplx a0 = a, b0 = b;
    a = m00 * a0 + m01 * b0;
    b = m10 * a0 + m11 * b0;
  }
}

inline void apply_2q(const CMatrix& m, int q0, int q1, cplx* data, std::int64_t dim, std::int64_t stride = 1) {
  const std::int64_t b0 = std::int64_t{1} << q0, b1 = std::int64_t{1} << q1;
  for (std::int64_t i = 0; i < dim; ++i) {
    if ((i & b0) || (i & b1)) continue;
    const std::int64_t idx[4] = {i, i | b0, i | b1, i | b0 | b1};
    cplx v[4];
    for (int k = 0; k < 4; ++k) v[k] = data[idx[k] * stride];
    for (int r = 0; r < 4; ++r) {
      cplx acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += m(r, k) * v[k];
      data[idx[r] * stride] = acc;
    }
  }
}

inline void apply(const Gate& g, cplx* data, std::int64_t dim, std::int64_t stride = 1) {
  const CMatrix m = g.matrix();
  if (g.arity() == 1) apply_1q(m, g.q[0], data, dim, stride);
  else apply_2q(m, g.q[0], g.q[1], data, dim, stride);
}

}  // namespace kernel

/// Applies the gates in order to a state vector of matching size.
inline void apply_circuit(const Circuit& c, CVector& v) {
  detail::require(v.size() == (Eigen::Index{1} << c.n_qubits()), "apply_circuit: dimension mismatch");
  for (const auto& g : c.gates()) kernel::apply(g, v.data(), v.size());
}

/// Product of the gate matrices, ignoring the output layout.
inline CMatrix circuit_unitary(const Circuit& c) {
  detail::require(c.n_qubits() <= 12, "circuit_unitary: limited to 12 qubits");
  const auto dim = Eigen::Index{1} << c.n_qubits();
  CMatrix u = CMatrix::Identity(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col)
    for (const auto& g : c.gates()) kernel::apply(g, u.col(col).data(), dim);
  return u;
}

/// Permutation matrix moving the content of wire layout[k] to wire k.
inline CMatrix layout_permutation(const std::vector<int>& layout) {
  const int n = static_cast<int>(layout.size());
  const auto dim = Eigen::Index{1} << n;
  CMatrix p = CMatrix::Zero(dim, dim);
  for (std::int64_t b = 0; b < dim; ++b) {
    std::int64_t out = 0;
    for (int k = 0; k < n; ++k)
      if ((b >> layout[static_cast<std::size_t>(k)]) & 1) out |= std::int64_t{1} << k;
    p(out, b) = 1.0;
  }
  return p;
}

/// Unitary in logical labels: the gate product followed by undoing the layout.
inline CMatrix logical_unitary(const Circuit& c) { return layout_permutation(c.layout()) * circuit_unitary(c); }

/// Entangling-gate count: CNOT and CZ count 1, SWAP counts 3.
inline int cnot_count(const Circuit& c) {
  int n = 0;
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::CNOT || g.kind == GateKind::CZ) n += 1;
    else if (g.kind == GateKind::SWAP) n += 3;
  }
  return n;
}

}  // namespace nucresp
