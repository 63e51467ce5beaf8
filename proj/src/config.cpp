/*
 * Copyright 2026 The PTS Traffic Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pts/config.hpp"

namespace pts {

std::vector<FollowerSpec> ring_followers(std::size_t count, double rho) {
  std::vector<FollowerSpec> out;
  out.reserve(count);
  const double step = count == 0 ? 0.0 : 2.0 * kPi / static_cast<double>(count);
  const double center = 0.5 * (static_cast<double>(count) - 1.0);
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back({rho, angle_normalize(kPi + step * (static_cast<double>(k) - center))});
  }
  return out;
}

}  // namespace pts
