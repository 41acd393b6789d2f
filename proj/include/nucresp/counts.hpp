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

#include <string>
#include <vector>

#include "nucresp/circuits.hpp"
#include "nucresp/model.hpp"
#include "nucresp/routing.hpp"

namespace nucresp {

/// A correlator <P_left(tau) P_right> whose circuit cost is tabulated.
struct CountStructure {
  std::string name;
  PauliString left;
  PauliString right;
};

/// <Z1(t)Z1>, <Z1(t)Z3>, <Z1Z2(t)Z3Z4>, <Z1Z2(t)Z1Z2>.
inline std::vector<CountStructure> count_structures() {
  return {{"Z1(t)Z1", model::z({0}), model::z({0})},
          {"Z1(t)Z3", model::z({0}), model::z({2})},
          {"Z1Z2(t)Z3Z4", model::z({0, 1}), model::z({2, 3})},
          {"Z1Z2(t)Z1Z2", model::z({0, 1}), model::z({0, 1})}};
}

/// Optimized Hadamard-test circuit for one correlator pair.
inline Circuit correlator_circuit(TrotterOrdering ordering, double tau, const ModelParams& p, const PauliString& left,
                                  const PauliString& right, MeasureBasis basis, const Circuit& init = Circuit(),
                                  int steps = 1, const OptimizeOptions& opt = {}) {
  const Circuit raw = hadamard_test_circuit(right, left, trotter_step(ordering, tau, p, steps), init, basis);
  return optimize(raw, opt);
}

/// Entangling-gate cost of a correlator circuit.
///
/// Logical mode counts the optimized circuit with all-to-all connectivity.
/// T mode routes it onto the five-qubit T layout first.
inline int correlator_cnot_count(TrotterOrdering ordering, const ModelParams& p, const PauliString& left,
                                 const PauliString& right, bool t_connectivity, double tau = 0.1) {
  Circuit c = correlator_circuit(ordering, tau, p, left, right, MeasureBasis::X);
  if (!t_connectivity) return cnot_count(c);
  // Routing works on wire labels, so fold the absorbed relabeling away first.
  Circuit plain(c.n_qubits());
  plain.set_gates(c.gates());
  return cnot_count(route(plain, t_coupling()).physical);
}

}  // namespace nucresp
