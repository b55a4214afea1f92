// Copyright 2026 The nll Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Value-map impossibility checks: joint spectra, Kochen-Specker colorings,
 * Mermin's parity argument and expectation-functional reconstruction.
 */

#pragma once

#include "kochen_specker.hpp"
#include "mermin.hpp"
#include "spectrum.hpp"
#include "von_neumann.hpp"
