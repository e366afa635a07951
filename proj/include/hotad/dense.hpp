// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include <hotad/errors.hpp>

namespace hotad {

// Minimal row-major dense matrix, 0-based.  Used for oracle results and
// small-scale comparisons, not for anything performance critical.
struct DenseMat {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<double> a;

    DenseMat() = default;
    DenseMat(std::int64_t r, std::int64_t c)
        : rows(r), cols(c), a(static_cast<std::size_t>(r * c), 0.0) {}

    double& operator()(std::int64_t i, std::int64_t j) {
        return a[static_cast<std::size_t>(i * cols + j)];
    }
    double operator()(std::int64_t i, std::int64_t j) const {
        return a[static_cast<std::size_t>(i * cols + j)];
    }
};

} // namespace hotad
