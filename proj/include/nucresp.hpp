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

#include "nucresp/circuits.hpp"
#include "nucresp/counts.hpp"
#include "nucresp/error.hpp"
#include "nucresp/estimation.hpp"
#include "nucresp/gates.hpp"
#include "nucresp/linalg.hpp"
#include "nucresp/mitigation.hpp"
#include "nucresp/model.hpp"
#include "nucresp/noisy_sim.hpp"
#include "nucresp/oracle.hpp"
#include "nucresp/parallel.hpp"
#include "nucresp/pauli.hpp"
#include "nucresp/routing.hpp"
#include "nucresp/spectral.hpp"
#include "nucresp/state.hpp"
#include "nucresp/two_qubit.hpp"
