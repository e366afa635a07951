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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <hotad/tape.hpp>

namespace hotad {

struct ProblemSpec {
    std::string name;
    std::int64_t n = 0;
    // Only heavey_band reads this.
    std::int64_t band = 20;
};

struct ProblemInfo {
    std::string_view name;
    // Shape of the Hessian sparsity, for humans.
    std::string_view pattern;
    std::int64_t min_n;
    bool fixed_n;  // problem only exists at n == min_n
    bool even_n;   // problem needs an even n
    // Whether a strictly-off-diagonal Hessian entry (j, k), 1-based, can
    // be structurally nonzero.  Test support.
    bool (*off_diag_in_pattern)(std::int64_t j, std::int64_t k, std::int64_t n,
                                std::int64_t band);
};

std::span<const ProblemInfo> problem_registry();
// nullptr when the name is unknown.
const ProblemInfo* find_problem(std::string_view name);

// Builds the tape for a named scalable test function.  Throws
// UnknownProblemError for an unknown name and ParamError when n (or band)
// is out of range for the family.
Tape make_problem(const ProblemSpec& spec);

// The benchmark evaluation points: x_i = i, or x_i = i/n for a
// better-conditioned variant, and the all-ones direction.
std::vector<double> paper_point(std::int64_t n);
std::vector<double> scaled_point(std::int64_t n);
std::vector<double> unit_direction(std::int64_t n);

struct Density {
    std::int64_t nnz = 0;
    double per_n = 0.0;
};

// Nonzeros of the directional third derivative D^3 f(x) . d at (x, d),
// and that count divided by n.
Density density(const Tape& tape, std::span<const double> x,
                std::span<const double> d);

} // namespace hotad
