// Copyright 2026 The qfelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Exact density-matrix foundation: states, gates, Pauli masks, measurement,
// teleportation, factored registers, Choi matrices, classical-quantum
// ensembles, and the branch-enumeration driver.

#include "qfe/core/tolerances.hpp"
#include "qfe/core/random.hpp"
#include "qfe/core/enumerate.hpp"
#include "qfe/core/linalg.hpp"
#include "qfe/core/pauli.hpp"
#include "qfe/core/gates.hpp"
#include "qfe/core/density_matrix.hpp"
#include "qfe/core/ops.hpp"
#include "qfe/core/register_state.hpp"
#include "qfe/core/choi.hpp"
#include "qfe/core/cq_state.hpp"
