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

/**
 * Quantum functional encryption: a single-key scheme for one fixed channel
 * (oneqfe.hpp) and, built on it, a single-key scheme for an exponential
 * class of classically described circuits (polyqfe.hpp), each with exact
 * simulators and an explicit security hybrid chain.
 */

#include "qfe/fe/oneqfe.hpp"   // IWYU pragma: export
#include "qfe/fe/polyqfe.hpp"  // IWYU pragma: export
