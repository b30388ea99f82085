// Copyright 2026 The GBDP Authors
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


// Core solver library. The JSON/CSV layer lives in gbdp/io.hpp.

#pragma once

#include "gbdp/ahd.hpp"
#include "gbdp/bellman.hpp"
#include "gbdp/exact.hpp"
#include "gbdp/parallel.hpp"
#include "gbdp/problem.hpp"
#include "gbdp/pwa_value.hpp"
#include "gbdp/rng.hpp"
#include "gbdp/solver.hpp"
#include "gbdp/state.hpp"
#include "gbdp/submodularity.hpp"
