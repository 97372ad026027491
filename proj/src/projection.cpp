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

#include "dpminimax/projection.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace dpmm {

Vector project_simplex(const Vector& v) {
  if (v.size() == 0) {
    throw std::invalid_argument("project_simplex: empty vector");
  }
  if (!v.allFinite()) {
    throw std::invalid_argument("project_simplex: input must be finite");
  }
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0.0) {
      threshold = candidate;
    }
  }
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[i] = std::max(0.0, v[i] - threshold);
  }
  return out;
}

Vector project_ball(const Vector& v, double radius) {
  if (radius < 0.0) {
    throw std::invalid_argument("project_ball: radius must be nonnegative");
  }
  const double norm = v.norm();
  if (norm <= radius) {
    return v;
  }
  if (norm == 0.0) {
    return v;
  }
  return v * (radius / norm);
}

}  // namespace dpmm
