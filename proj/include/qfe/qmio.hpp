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
 * Multi-input functional encryption over quantum slots with a dealer
 * reference implementation and the trusted-party oracle of its simulation
 * security definition (qmife.hpp), and the single-use program obfuscation
 * built on top of it (obf.hpp).
 */

#include "qfe/qmio/obf.hpp"    // IWYU pragma: export
#include "qfe/qmio/qmife.hpp"  // IWYU pragma: export
