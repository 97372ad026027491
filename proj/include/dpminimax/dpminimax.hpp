// Copyright 2026 The dpminimax Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPMINIMAX_DPMINIMAX_HPP_
#define DPMINIMAX_DPMINIMAX_HPP_

#include "dpminimax/accountant.hpp"
#include "dpminimax/calibration.hpp"
#include "dpminimax/experiment.hpp"
#include "dpminimax/mechanisms.hpp"
#include "dpminimax/optimizers.hpp"
#include "dpminimax/problem.hpp"
#include "dpminimax/problems/auc.hpp"
#include "dpminimax/problems/quadratic.hpp"
#include "dpminimax/problems/td.hpp"
#include "dpminimax/problems/worst_group.hpp"
#include "dpminimax/projection.hpp"
#include "dpminimax/rng.hpp"
#include "dpminimax/schedule.hpp"
#include "dpminimax/types.hpp"
#include "dpminimax/verification.hpp"

#endif  // DPMINIMAX_DPMINIMAX_HPP_
