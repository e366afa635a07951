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
#include <vector>

#include <hotad/dense.hpp>
#include <hotad/second_order.hpp>

namespace hotad {

struct TensorVecResult {
    // The matrix (D^3 f(x) . d), i.e. the derivative of the Hessian along
    // d, restricted to the independents (logical 1..n).
    SymSparseMat td;
    // The Hessian, computed alongside because the sweep needs it anyway.
    SymSparseMat w;
    std::vector<double> gradient;
};

// One reverse sweep computing gradient, sparse Hessian W and sparse
// directional third derivative Td = D^3 f(x) . d, after a forward tangent
// pass for d.  Per node, in this order: Td entries incident to the node
// are pushed onto its predecessors; the node's curvature couples the
// tangents into Td through the entries of W incident to the node
// (connecting); the node's own third derivative enters Td (creating);
// then W takes its usual pushing + creating step and the adjoints update.
// Reading W strictly before its own update at the node is what makes the
// recurrences consistent.
TensorVecResult rev_hedir(const Tape& tape, const ValueTrace& trace,
                          std::span<const double> d,
                          const SweepOptions& opts = {});

// Dense symmetric third-order tensor over the independents, packed by
// sorted index triples.
class DenseTensor3 {
public:
    explicit DenseTensor3(std::int64_t n);

    std::int64_t dim() const { return n_; }
    static std::int64_t packed_size(std::int64_t n) {
        return n * (n + 1) * (n + 2) / 6;
    }
    // Any index order, 0-based.
    double get(std::int64_t i, std::int64_t j, std::int64_t k) const;
    // i <= j <= k.
    double& at_sorted(std::int64_t i, std::int64_t j, std::int64_t k);

private:
    std::int64_t n_;
    std::vector<double> packed_;
};

// Reference implementation of the whole third derivative tensor: a
// reverse sweep over a dense tensor of every tape slot, stored as one
// entry per unordered index triple so the symmetry of the result is
// structural.  Cubic in n + l and meant for small problems and
// cross-checking only; refuses tapes whose tensor spans more than
// max_entries ordered entries.
DenseTensor3 reverse_tensor_dense(const Tape& tape, const ValueTrace& trace,
                                  std::int64_t max_entries = 10'000'000);

// H_d[i][j] = sum_k T[i][j][k] d[k], the directional contraction that
// rev_hedir computes directly.
DenseMat contract_tensor(const DenseTensor3& t, std::span<const double> d);

} // namespace hotad
