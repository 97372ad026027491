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

#include "dpminimax/mechanisms.hpp"

#include <cmath>
#include <stdexcept>

namespace dpmm {

Vector clip(const Vector& v, double c) {
  if (std::isnan(c) || c <= 0.0) {
    throw std::invalid_argument("clip: threshold must be positive");
  }
  if (!v.allFinite()) {
    throw std::invalid_argument("clip: input vector must be finite");
  }
  const double norm = v.norm();
  if (norm <= c) {  // covers the zero vector: scale factor 1
    return v;
  }
  return v * (c / norm);
}

Vector gaussian_perturb(const Vector& v, double sigma, Rng& rng) {
  if (std::isnan(sigma) || sigma < 0.0) {
    throw std::invalid_argument("gaussian_perturb: sigma must be nonnegative");
  }
  if (sigma == 0.0) {
    return v;
  }
  Vector out = v;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out[i] += sigma * rng.normal();
  }
  return out;
}

}  // namespace dpmm
