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

#ifndef DPMINIMAX_PROJECTION_HPP_
#define DPMINIMAX_PROJECTION_HPP_

#include "dpminimax/types.hpp"

namespace dpmm {

// Euclidean projection onto the probability simplex {y >= 0, sum y = 1}
// via the sort-and-threshold algorithm.
Vector project_simplex(const Vector& v);

// Euclidean projection onto the centered l2 ball of the given radius.
Vector project_ball(const Vector& v, double radius);

}  // namespace dpmm

#endif  // DPMINIMAX_PROJECTION_HPP_
