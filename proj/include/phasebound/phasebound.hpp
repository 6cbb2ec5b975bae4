// Copyright 2026 The phasebound Authors
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

#include "phasebound/bounds.hpp"
#include "phasebound/capacity.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/estimation.hpp"
#include "phasebound/fock.hpp"
#include "phasebound/numeric.hpp"
#include "phasebound/parallel.hpp"
#include "phasebound/prior.hpp"
#include "phasebound/rate_distortion.hpp"
#include "phasebound/scenario.hpp"
#include "phasebound/verify.hpp"
