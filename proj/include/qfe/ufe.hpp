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
 * Unclonable functional encryption: a single-bit scheme whose decryption
 * key is a quantum state (ueq.hpp) and, wrapped around it, a functional
 * encryption scheme whose keys embed anti-cloning traps, together with the
 * mode-1 challenge ciphertext builder and the derived classical encryption
 * scheme with variable keys (scheme.hpp).
 */

#include "qfe/ufe/scheme.hpp"  // IWYU pragma: export
#include "qfe/ufe/ueq.hpp"     // IWYU pragma: export
