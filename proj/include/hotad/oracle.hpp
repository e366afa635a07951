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

#include <span>
#include <vector>

#include <hotad/dense.hpp>
#include <hotad/sparse_sym.hpp>
#include <hotad/tape.hpp>

namespace hotad {

// Finite-difference ground truth for testing the sweeps, plus the glue
// needed to compare sparse results against it.  Everything here is dense
// and O(n) function or gradient evaluations -- test-scale machinery, not
// part of the fast path.

struct FDConfig {
    // Relative tolerance for comparisons against a finite difference.
    double tolerance = 1e-5;

    // Central differences of the value lose about half the digits;
    // differences of an already-exact derivative a third.
    static double step_first(std::span<const double> x);
    static double step_third(std::span<const double> x);
};

// Central difference of eval_forward per coordinate.
std::vector<double> fd_gradient(const Tape& tape, std::span<const double> x);

// Central difference of the reverse-sweep gradient per coordinate.  Not
// symmetrised: any asymmetry is informative in a comparison.
DenseMat fd_hessian(const Tape& tape, std::span<const double> x);

// (H(x + h d) - H(x - h d)) / 2h with exact Hessians at the probes,
// i.e. a direct check value for the directional third derivative.
DenseMat fd_tensor_vec(const Tape& tape, std::span<const double> x,
                       std::span<const double> d);

// |a - b| / (1 + max(|a|, |b|)): relative for large values, absolute near
// zero.
double rel_diff(double a, double b);
double max_rel_diff(std::span<const double> a, std::span<const double> b);
double max_rel_diff(const DenseMat& a, const DenseMat& b);

// Dense view of a symmetric sparse matrix, logical range mapped to
// 0-based.
DenseMat sparse_to_dense(const SymSparseMat& m);

// y = M d for a symmetric sparse matrix over logical 1..n.
std::vector<double> sym_apply(const SymSparseMat& m, std::span<const double> d);

} // namespace hotad
