// Copyright 2026 The CliNR Authors
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

#include "clinr/analytics.hpp"
#include "clinr/circuit.hpp"
#include "clinr/clifford_random.hpp"
#include "clinr/clinr.hpp"
#include "clinr/cznr.hpp"
#include "clinr/experiments.hpp"
#include "clinr/frame_sim.hpp"
#include "clinr/gf2.hpp"
#include "clinr/noise.hpp"
#include "clinr/pauli.hpp"
#include "clinr/propagation.hpp"
#include "clinr/protocol.hpp"
#include "clinr/schedule.hpp"
#include "clinr/segment.hpp"
#include "clinr/tableau.hpp"
#include "clinr/tableau_sim.hpp"
