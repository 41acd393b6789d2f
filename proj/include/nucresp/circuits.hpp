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
#include <string_view>
#include <vector>

#include "nucresp/error.hpp"
#include "nucresp/gates.hpp"
#include "nucresp/model.hpp"
#include "nucresp/pauli.hpp"
#include "nucresp/two_qubit.hpp"

namespace nucresp {

/// Index of the Hadamard-test ancilla. Target qubit k of the model is wire k + 1.
inline constexpr int kAncilla = 0;
inline constexpr int kTargetOffset = 1;
inline constexpr int kCircuitQubits = kModelQubits + 1;

enum class TrotterOrdering { A1, A2, B1, B2 };
inline constexpr std::array<TrotterOrdering, 4> kAllOrderings{TrotterOrdering::A1, TrotterOrdering::A2,
                                                              TrotterOrdering::B1, TrotterOrdering::B2};

inline std::string to_string(TrotterOrdering o) {
  switch (o) {
    case TrotterOrdering::A1: return "A1";
    case TrotterOrdering::A2: return "A2";
    case TrotterOrdering::B1: return "B1";
    default: return "B2";
  }
}

inline TrotterOrdering parse_ordering(std::string_view s) {
  if (s == "A1") return TrotterOrdering::A1;
  if (s == "A2") return TrotterOrdering::A2;
  if (s == "B1") return TrotterOrdering::B1;
  if (s == "B2") return TrotterOrdering::B2;
  throw std::invalid_argument("unknown Trotter ordering: " + std::string(s));
}

enum class MeasureBasis { X, Y, Z };

/// exp(+i c3 tau sum_{i<j<k} Z_i Z_j Z_k) on four qubits.
///
/// The ladder leaves the register permuted (T1<->T4, T2<->T3); the two
/// closing SWAPs restore the labels. Each rotation angle has magnitude
/// 2 c3 tau, which is tau U / 2 for the default c3 = U / 4.
inline Circuit three_body_propagator(double tau, double c3) {
  constexpr int T1 = 0, T2 = 1, T3 = 2, T4 = 3;
  const double th = -2.0 * c3 * tau;
  Circuit c(kModelQubits);
  for (const Gate& g : {Gate::cnot(T2, T3), Gate::cnot(T3, T4), Gate::rz(T4, th), Gate::cnot(T3, T4),
                        Gate::cnot(T1, T4), Gate::cnot(T2, T3), Gate::cnot(T4, T3), Gate::rz(T3, th),
                        Gate::cnot(T4, T3), Gate::cnot(T4, T1), Gate::swap(T3, T2), Gate::cnot(T3, T4),
                        Gate::rz(T4, th), Gate::cnot(T3, T4), Gate::cnot(T1, T4), Gate::cnot(T2, T3),
                        Gate::cnot(T4, T3), Gate::rz(T3, th), Gate::cnot(T4, T3), Gate::cnot(T2, T3),
                        Gate::swap(T1, T4), Gate::swap(T3, T2)})
    c.append(g, Block::ThreeBody);
  return c;
}

inline Circuit three_body_propagator(double tau, const ModelParams& p) { return three_body_propagator(tau, p.c3()); }

namespace detail {

inline void append_one_body(Circuit& c, double tau, const ModelParams& p) {
  for (int q = 0; q < kModelQubits; ++q) c.append(Gate::rx(q, -4.0 * p.t * tau), Block::OneBody);
}

inline void append_two_body(Circuit& c, double tau, const ModelParams& p) {
  const double th = -p.U * tau / 2.0;
  for (const auto& [i, j] : {std::pair{0, 3}, std::pair{1, 2}}) {
    c.append(Gate::cnot(i, j), Block::TwoBody);
    c.append(Gate::rz(j, th), Block::TwoBody);
    c.append(Gate::cnot(i, j), Block::TwoBody);
  }
}

/// Dense 4x4 propagator of a pair block in the local basis bit(i) + 2 bit(j).
inline CMatrix pair_block_unitary(double tau, const ModelParams& p) {
  QubitOperator h(2);
  h.add(PauliString::single(2, 0, 'X'), -2.0 * p.t);
  h.add(PauliString::single(2, 1, 'X'), -2.0 * p.t);
  h.add(PauliString::z_string(2, {0, 1}), -p.U / 4.0);
  return hermitian_evolution(to_matrix(h), tau);
}

inline void append_pair_block(Circuit& c, double tau, const ModelParams& p, int i, int j) {
  for (const Gate& g : synthesize_two_qubit(pair_block_unitary(tau, p), i, j)) c.append(g, Block::PairBlock);
}

}  // namespace detail

/// One or more Trotter steps of total duration tau on the four target qubits.
///
/// Gate order is time order: A1 runs the diagonal part then the X rotations,
/// A2 the reverse; B1 runs the three-body block then the (2,3) and (1,4)
/// pair blocks, B2 the pair blocks then the three-body block. The constant
/// part of the Hamiltonian is dropped.
inline Circuit trotter_step(TrotterOrdering ordering, double tau, const ModelParams& p, int steps = 1) {
  p.validate();
  detail::require(steps >= 1, "trotter_step: steps must be positive");
  const double dt = tau / steps;
  Circuit c(kModelQubits);
  for (int s = 0; s < steps; ++s) {
    switch (ordering) {
      case TrotterOrdering::A1:
        detail::append_two_body(c, dt, p);
        c.append(three_body_propagator(dt, p));
        detail::append_one_body(c, dt, p);
        break;
      case TrotterOrdering::A2:
        detail::append_one_body(c, dt, p);
        detail::append_two_body(c, dt, p);
        c.append(three_body_propagator(dt, p));
        break;
      case TrotterOrdering::B1:
        c.append(three_body_propagator(dt, p));
        detail::append_pair_block(c, dt, p, 1, 2);
        detail::append_pair_block(c, dt, p, 0, 3);
        break;
      case TrotterOrdering::B2:
        detail::append_pair_block(c, dt, p, 1, 2);
        detail::append_pair_block(c, dt, p, 0, 3);
        c.append(three_body_propagator(dt, p));
        break;
    }
  }
  return c;
}

/// Product of dense exponentials defining each ordering (constant dropped).
inline CMatrix trotter_unitary(TrotterOrdering ordering, double tau, const ModelParams& p, int steps = 1) {
  detail::require(steps >= 1, "trotter_unitary: steps must be positive");
  const double dt = tau / steps;
  auto ev = [dt](const QubitOperator& h) { return hermitian_evolution(to_matrix(h), dt); };
  CMatrix step;
  switch (ordering) {
    case TrotterOrdering::A1:
      step = ev(model::one_body(p)) * ev(model::two_body(p) + model::three_body(p));
      break;
    case TrotterOrdering::A2:
      step = ev(model::two_body(p) + model::three_body(p)) * ev(model::one_body(p));
      break;
    case TrotterOrdering::B1:
      step = ev(model::pair_block(p, 0, 3)) * ev(model::pair_block(p, 1, 2)) * ev(model::three_body(p));
      break;
    case TrotterOrdering::B2:
      step = ev(model::three_body(p)) * ev(model::pair_block(p, 0, 3)) * ev(model::pair_block(p, 1, 2));
      break;
  }
  CMatrix u = CMatrix::Identity(step.rows(), step.cols());
  for (int s = 0; s < steps; ++s) u = step * u;
  return u;
}

/// Controlled version of a target Pauli string with the ancilla as control.
///
/// X and Y factors are rotated to Z, the Z parity is gathered on the lowest
/// support qubit with CNOTs, a CZ couples it to the ancilla, and the
/// gathering is undone. The phase i^k becomes S, Z or Sdg on the ancilla.
inline Circuit controlled_pauli(const PauliString& p, Block tag) {
  const int n = p.n_qubits() + kTargetOffset;
  Circuit c(n);
  auto wire = [](int q) { return q + kTargetOffset; };
  std::vector<int> support;
  for (int q = 0; q < p.n_qubits(); ++q)
    if ((p.support() >> q) & 1U) support.push_back(q);

  std::vector<Gate> pre;
  for (int q : support) {
    const char k = p.pauli_at(q);
    if (k == 'X') pre.push_back(Gate::h(wire(q)));
    if (k == 'Y') {
      pre.push_back(Gate::sdg(wire(q)));
      pre.push_back(Gate::h(wire(q)));
    }
  }
  for (const auto& g : pre) c.append(g, tag);
  if (!support.empty()) {
    const int pivot = wire(support.front());
    for (std::size_t k = 1; k < support.size(); ++k) c.append(Gate::cnot(wire(support[k]), pivot), tag);
    c.append(Gate::cz(kAncilla, pivot), tag);
    for (std::size_t k = support.size(); k-- > 1;) c.append(Gate::cnot(wire(support[k]), pivot), tag);
  }
  for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
    Gate g = *it;
    if (g.kind == GateKind::Sdg) g.kind = GateKind::S;
    c.append(g, tag);
  }
  switch (p.phase()) {
    case 1: c.append(Gate::s(kAncilla), tag); break;
    case 2: c.append(Gate::z(kAncilla), tag); break;
    case 3: c.append(Gate::sdg(kAncilla), tag); break;
    default: break;
  }
  return c;
}

namespace detail {

inline void append_target_circuit(Circuit& out, const Circuit& part, int n_targets, Block tag, const char* what) {
  if (part.n_qubits() == n_targets) {
    out.append(part, kTargetOffset, tag);
  } else {
    require(part.n_qubits() == n_targets + kTargetOffset, std::string("hadamard_test_circuit: ") + what + " has the wrong size");
    require(!part.touches(kAncilla), std::string("hadamard_test_circuit: ") + what + " acts on the ancilla");
    out.append(part, 0, tag);
  }
}

}  // namespace detail

/// Hadamard-test circuit whose ancilla gives <X> - i<Y> = <psi|V^dag P_left V P_right|psi>.
///
/// For a phased (non-Hermitian) P_left the readout gives P_left^dag in that
/// expression.
/// The closing X on the ancilla is folded into the readout. `evolution` and
/// `init` act on the targets only; they may be given on the target register
/// or on the full register provided they leave wire 0 alone.
inline Circuit hadamard_test_circuit(const PauliString& p_right, const PauliString& p_left, const Circuit& evolution,
                                     const Circuit& init, MeasureBasis basis) {
  const int nt = p_right.n_qubits();
  detail::require(p_left.n_qubits() == nt, "hadamard_test_circuit: Pauli sizes differ");
  Circuit c(nt + kTargetOffset);
  if (!init.empty()) detail::append_target_circuit(c, init, nt, Block::Init, "init");
  c.append(Gate::h(kAncilla), Block::Prep);
  c.append(controlled_pauli(p_right, Block::ControlRight));
  c.append(Gate::x(kAncilla), Block::Flip);
  detail::append_target_circuit(c, evolution, nt, Block::None, "evolution");
  c.append(controlled_pauli(p_left, Block::ControlLeft));
  if (basis == MeasureBasis::X) {
    c.append(Gate::h(kAncilla), Block::Measure);
  } else if (basis == MeasureBasis::Y) {
    c.append(Gate::sdg(kAncilla), Block::Measure);
    c.append(Gate::h(kAncilla), Block::Measure);
  }
  return c;
}

struct OptimizeOptions {
  /// Only the ancilla is read out, so trailing target gates can be dropped.
  bool ancilla_readout_only = true;
  /// Also commute diagonal two-body blocks through the last control, not just the three-body block.
  bool commute_all_diagonal_blocks = false;
  /// Drop every gate outside the backward light cone of the ancilla.
  bool prune_light_cone = false;
};

namespace detail {

inline bool is_diagonal_matrix(const CMatrix& m, double tol = 1e-12) {
  return (m - CMatrix(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < tol;
}

/// Removes diagonal blocks that sit right before the last controlled Pauli
/// when nothing but ancilla gates follows it.
inline void drop_commuting_blocks(std::vector<Gate>& g, int n, const OptimizeOptions& opt) {
  for (;;) {
    auto last = std::find_if(g.rbegin(), g.rend(), [](const Gate& x) { return x.block == Block::ControlLeft; });
    if (last == g.rend()) return;
    const std::size_t end = static_cast<std::size_t>(g.rend() - last);  // one past last control gate
    for (std::size_t k = end; k < g.size(); ++k)
      if (!(g[k].arity() == 1 && g[k].q[0] == kAncilla)) return;
    std::size_t start = end - 1;
    while (start > 0 && g[start - 1].block == Block::ControlLeft) --start;
    if (start == 0) return;
    const Block tag = g[start - 1].block;
    const bool eligible = tag == Block::ThreeBody || (opt.commute_all_diagonal_blocks && tag == Block::TwoBody);
    if (!eligible) return;
    std::size_t bstart = start - 1;
    while (bstart > 0 && g[bstart - 1].block == tag) --bstart;

    Circuit block(n), control(n);
    for (std::size_t k = bstart; k < start; ++k) block.append(g[k]);
    for (std::size_t k = start; k < end; ++k) control.append(g[k]);
    if (!is_diagonal_matrix(circuit_unitary(block)) || !is_diagonal_matrix(circuit_unitary(control))) return;
    g.erase(g.begin() + static_cast<std::ptrdiff_t>(bstart), g.begin() + static_cast<std::ptrdiff_t>(start));
  }
}

/// Deletes SWAP gates and relabels everything after them. Returns the new layout.
inline std::vector<int> absorb_swaps(std::vector<Gate>& g, std::vector<int> layout) {
  std::vector<Gate> out;
  out.reserve(g.size());
  // wire_of[w] = wire that now carries what the original circuit has on wire w
  std::vector<int> wire_of(layout.size());
  std::iota(wire_of.begin(), wire_of.end(), 0);
  for (Gate x : g) {
    if (x.kind == GateKind::SWAP) {
      std::swap(wire_of[static_cast<std::size_t>(x.q[0])], wire_of[static_cast<std::size_t>(x.q[1])]);
      continue;
    }
    x.q[0] = wire_of[static_cast<std::size_t>(x.q[0])];
    if (x.arity() == 2) x.q[1] = wire_of[static_cast<std::size_t>(x.q[1])];
    out.push_back(x);
  }
  for (auto& w : layout) w = wire_of[static_cast<std::size_t>(w)];
  g = std::move(out);
  return layout;
}

/// Removes adjacent inverse pairs until none remain. Gates on disjoint wires do not block adjacency.
inline void cancel_inverse_pairs(std::vector<Gate>& g) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < g.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        const bool overlap = g[j].acts_on(g[i].q[0]) || (g[i].arity() == 2 && g[j].acts_on(g[i].q[1]));
        if (!overlap) continue;
        if (g[i].cancels_with(g[j])) {
          g.erase(g.begin() + static_cast<std::ptrdiff_t>(j));
          g.erase(g.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
        }
        break;
      }
    }
  }
}

/// Drops target-only gates after the last entangling gate on the ancilla.
inline void drop_trailing_target_gates(std::vector<Gate>& g, int ancilla_wire) {
  auto last = std::find_if(g.rbegin(), g.rend(), [&](const Gate& x) { return x.is_two_qubit() && x.acts_on(ancilla_wire); });
  const auto first_after = last.base();
  g.erase(std::remove_if(first_after, g.end(), [&](const Gate& x) { return !x.acts_on(ancilla_wire); }), g.end());
}

/// Keeps only gates inside the backward light cone of the ancilla readout.
inline void drop_outside_light_cone(std::vector<Gate>& g, int ancilla_wire) {
  std::uint64_t live = 1ULL << ancilla_wire;
  std::vector<Gate> kept;
  for (auto it = g.rbegin(); it != g.rend(); ++it) {
    std::uint64_t wires = 1ULL << it->q[0];
    if (it->arity() == 2) wires |= 1ULL << it->q[1];
    if ((wires & live) == 0) continue;
    live |= wires;
    kept.push_back(*it);
  }
  g.assign(kept.rbegin(), kept.rend());
}

}  // namespace detail

/// Rewrites a circuit without changing what the readout sees.
///
/// Passes: diagonal blocks in front of the last controlled Pauli are
/// commuted through it and dropped, SWAPs are absorbed into the layout,
/// adjacent inverse pairs cancel, and target gates after the last
/// entangling gate on the ancilla are removed (or, with prune_light_cone,
/// every gate outside the backward light cone of the ancilla). The first and last passes require ancilla-only readout.
inline Circuit optimize(const Circuit& c, const OptimizeOptions& opt = {}) {
  std::vector<Gate> g = c.gates();
  if (opt.ancilla_readout_only) detail::drop_commuting_blocks(g, c.n_qubits(), opt);
  std::vector<int> layout = detail::absorb_swaps(g, c.layout());
  detail::cancel_inverse_pairs(g);
  if (opt.ancilla_readout_only) {
    if (opt.prune_light_cone) detail::drop_outside_light_cone(g, layout[kAncilla]);
    else detail::drop_trailing_target_gates(g, layout[kAncilla]);
  }
  Circuit out(c.n_qubits());
  out.set_gates(std::move(g));
  out.set_layout(std::move(layout));
  return out;
}

/// Replaces every CZ with H CNOT H on its second qubit.
inline Circuit lower_cz(const Circuit& c) {
  Circuit out(c.n_qubits());
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::CZ) {
      out.append(Gate::h(g.q[1]), g.block);
      out.append(Gate::cnot(g.q[0], g.q[1]), g.block);
      out.append(Gate::h(g.q[1]), g.block);
    } else {
      out.append(g);
    }
  }
  out.set_layout(c.layout());
  return out;
}

}  // namespace nucresp
