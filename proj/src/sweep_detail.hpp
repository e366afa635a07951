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

// Building blocks shared by the reverse sweeps of second and third
// order.  Internal header, not installed.

#pragma once

#include <cstdint>
#include <span>

#include <hotad/elementals.hpp>
#include <hotad/sparse_sym.hpp>
#include <hotad/tape.hpp>

namespace hotad::detail {

// Everything the per-node update rules need about the current node.
struct NodeCtx {
    std::int32_t ii = -1;      // internal slot of the node
    std::int32_t pred[2] = {-1, -1};
    int arity = 1;
    Op op = Op::Id;
    double param = 0.0;
    PartialTables t;
    // >= 0 enables the write guard: every matrix increment must target a
    // row strictly below this slot.
    std::int32_t guard = -1;
};

template <int Order>
inline void load_ctx(const Tape& tape, std::span<const double> v, std::int64_t i,
                     bool check, NodeCtx& c) {
    const Node& nd = tape.node(i);
    c.ii = static_cast<std::int32_t>(tape.n_independent() - 1 + i);
    c.pred[0] = nd.a;
    c.pred[1] = nd.b;
    c.arity = nd.b >= 0 ? 2 : 1;
    c.op = nd.op;
    c.param = tape.param_of(nd);
    c.guard = check ? c.ii : -1;
    const double a = v[static_cast<std::size_t>(nd.a)];
    const double b = nd.b >= 0 ? v[static_cast<std::size_t>(nd.b)] : 0.0;
    local_partials<Order>(c.op, a, b, c.param, c.t);
}

inline void guarded_increment(SymSparseMat& m, const NodeCtx& c, std::int32_t j,
                              std::int32_t k, double delta) {
    if (c.guard >= 0 && (j >= c.guard || k >= c.guard))
        throw InvariantViolation("matrix write does not descend");
    m.increment_internal(j, k, delta);
}

// Pushing: every stored pair {i, k} of row i moves down onto the
// predecessors.  For k != i the pair becomes {j, k} for each predecessor
// j, doubling into the diagonal when j == k; the diagonal pair {i, i}
// becomes one term per unordered predecessor pair.  Only rows below i are
// written, so the span over row i stays valid throughout.
inline void push_row(SymSparseMat& m, const NodeCtx& c) {
    const double d1a = c.t.d1[0];
    const double d1b = c.t.d1[1];
    for (const SymSparseMat::Entry& e : m.row_internal(c.ii)) {
        if (e.weight == 0.0) continue;
        if (e.col < c.ii) {
            if (c.pred[0] == e.col)
                guarded_increment(m, c, e.col, e.col, 2.0 * d1a * e.weight);
            else
                guarded_increment(m, c, c.pred[0], e.col, d1a * e.weight);
            if (c.arity == 2) {
                if (c.pred[1] == e.col)
                    guarded_increment(m, c, e.col, e.col, 2.0 * d1b * e.weight);
                else
                    guarded_increment(m, c, c.pred[1], e.col, d1b * e.weight);
            }
        } else {
            guarded_increment(m, c, c.pred[0], c.pred[0], d1a * d1a * e.weight);
            if (c.arity == 2) {
                guarded_increment(m, c, c.pred[0], c.pred[1], d1a * d1b * e.weight);
                guarded_increment(m, c, c.pred[1], c.pred[1], d1b * d1b * e.weight);
            }
        }
    }
}

// Creating: the node's own curvature enters the matrix, weighted by its
// adjoint.  Entries are inserted wherever the second derivative is not
// identically zero for this elemental, even if its value at the current
// point happens to be zero; this keeps the stored pattern a function of
// the program alone.
inline void create_second(SymSparseMat& m, const NodeCtx& c, double bar_i) {
    if (c.arity == 1) {
        if (op_d2_structural(c.op, 0, c.param))
            guarded_increment(m, c, c.pred[0], c.pred[0], bar_i * c.t.d2[0]);
        return;
    }
    if (op_d2_structural(c.op, d2_slot(0, 0), c.param))
        guarded_increment(m, c, c.pred[0], c.pred[0], bar_i * c.t.d2[d2_slot(0, 0)]);
    if (op_d2_structural(c.op, d2_slot(0, 1), c.param))
        guarded_increment(m, c, c.pred[0], c.pred[1], bar_i * c.t.d2[d2_slot(0, 1)]);
    if (op_d2_structural(c.op, d2_slot(1, 1), c.param))
        guarded_increment(m, c, c.pred[1], c.pred[1], bar_i * c.t.d2[d2_slot(1, 1)]);
}

inline void adjoint_update(std::span<double> bar, const NodeCtx& c, double bar_i) {
    bar[static_cast<std::size_t>(c.pred[0])] += bar_i * c.t.d1[0];
    if (c.arity == 2) bar[static_cast<std::size_t>(c.pred[1])] += bar_i * c.t.d1[1];
}

inline void check_row_dropped(const SymSparseMat& m, const NodeCtx& c) {
    if (c.guard >= 0 && !m.row_released_internal(c.ii))
        throw InvariantViolation("processed row still holds entries");
}

} // namespace hotad::detail
