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

#ifndef DPMINIMAX_MECHANISMS_HPP_
#define DPMINIMAX_MECHANISMS_HPP_

#include "dpminimax/rng.hpp"
#include "dpminimax/types.hpp"

namespace dpmm {

// Rescales v to norm at most c: returns min{c/||v||, 1} * v. The zero vector
// is a fixed point (the scale factor is defined as 1 there). c may be
// +infinity, which disables clipping.
Vector clip(const Vector& v, double c);

// v + xi with xi ~ N(0, sigma^2 I), drawn coordinate-wise from rng.
// sigma == 0 returns v exactly and consumes no randomness.
Vector gaussian_perturb(const Vector& v, double sigma, Rng& rng);

}  // namespace dpmm

#endif  // DPMINIMAX_MECHANISMS_HPP_
