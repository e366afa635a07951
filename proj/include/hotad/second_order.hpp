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

#include <hotad/first_order.hpp>
#include <hotad/sparse_sym.hpp>
#include <hotad/tape.hpp>

namespace hotad {

struct SweepOptions {
    // When set, the sweeps verify their structural invariants as they go
    // (matrix writes stay strictly below the node being processed, each
    // node's row is dropped once passed, rows stay sorted) and throw
    // InvariantViolation on any breach.  Costs a few percent of runtime.
    bool check_invariants = false;
};

struct HessianResult {
    // Hessian of f restricted to the independents, logical indices 1..n.
    SymSparseMat w;
    std::vector<double> gradient;
};

// One reverse sweep that accumulates the whole (sparse, symmetric)
// Hessian alongside the adjoints.  Each node i, visited last to first,
// first pushes the matrix entries incident to i down onto its
// predecessors through the local first derivatives, then creates the
// contribution of its own curvature, then updates the adjoints.  Row i
// of the matrix is released afterwards: no later iteration can touch it.
HessianResult edge_pushing(const Tape& tape, const ValueTrace& trace,
                           const SweepOptions& opts = {});

// Hessian-vector product H(x) d without forming the Hessian: a forward
// tangent sweep for d followed by one reverse sweep that carries, per
// slot, the directional derivative of its adjoint.
std::vector<double> hessian_vector(const Tape& tape, const ValueTrace& trace,
                                   std::span<const double> d,
                                   const SweepOptions& opts = {});

} // namespace hotad
