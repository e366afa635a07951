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

#include <hotad/second_order.hpp>

#include "sweep_detail.hpp"

namespace hotad {

HessianResult edge_pushing(const Tape& tape, const ValueTrace& trace,
                           const SweepOptions& opts) {
    if (trace.n_independent() != tape.n_independent()
        || trace.size() != tape.n_slots())
        throw ShapeError("trace does not belong to this tape");

    const std::int64_t n = tape.n_independent();
    const std::span<const double> v = trace.raw();
    SymSparseMat w(1 - n, tape.n_nodes());
    std::vector<double> bar(static_cast<std::size_t>(tape.n_slots()), 0.0);
    bar.back() = 1.0;

    detail::NodeCtx c;
    for (std::int64_t i = tape.n_nodes(); i >= 1; --i) {
        detail::load_ctx<2>(tape, v, i, opts.check_invariants, c);
        const double bar_i = bar[static_cast<std::size_t>(c.ii)];
        detail::push_row(w, c);
        detail::create_second(w, c, bar_i);
        detail::adjoint_update(bar, c, bar_i);
        w.release_row_internal(c.ii);
        detail::check_row_dropped(w, c);
    }
    if (opts.check_invariants) w.validate_structure();

    bar.resize(static_cast<std::size_t>(n));
    return HessianResult{std::move(w).restricted_to_independents(), std::move(bar)};
}

std::vector<double> hessian_vector(const Tape& tape, const ValueTrace& trace,
                                   std::span<const double> d,
                                   const SweepOptions& opts) {
    (void)opts;
    const TangentVector dot = forward_tangent(tape, trace, d);
    const std::int64_t n = tape.n_independent();
    const std::span<const double> v = trace.raw();
    const std::span<const double> dv = dot.raw();

    // Reverse sweep carrying two quantities per slot: the adjoint bar_v
    // and its directional derivative w = d(bar_v)/dt along x + t d.  The
    // w of the independents is the Hessian-vector product.
    std::vector<double> bar(static_cast<std::size_t>(tape.n_slots()), 0.0);
    std::vector<double> w(static_cast<std::size_t>(tape.n_slots()), 0.0);
    bar.back() = 1.0;

    detail::NodeCtx c;
    for (std::int64_t i = tape.n_nodes(); i >= 1; --i) {
        detail::load_ctx<2>(tape, v, i, false, c);
        const double bar_i = bar[static_cast<std::size_t>(c.ii)];
        const double w_i = w[static_cast<std::size_t>(c.ii)];
        // Differentiating the adjoint rule bar_j += bar_i * d1_j by t
        // gives one term through bar_i and one through the derivative of
        // d1_j along the tangents of the operands.
        if (c.arity == 1) {
            const double ta = dv[static_cast<std::size_t>(c.pred[0])];
            w[static_cast<std::size_t>(c.pred[0])]
                += w_i * c.t.d1[0] + bar_i * c.t.d2[0] * ta;
        } else {
            const double ta = dv[static_cast<std::size_t>(c.pred[0])];
            const double tb = dv[static_cast<std::size_t>(c.pred[1])];
            w[static_cast<std::size_t>(c.pred[0])]
                += w_i * c.t.d1[0]
                   + bar_i * (c.t.d2[d2_slot(0, 0)] * ta + c.t.d2[d2_slot(0, 1)] * tb);
            w[static_cast<std::size_t>(c.pred[1])]
                += w_i * c.t.d1[1]
                   + bar_i * (c.t.d2[d2_slot(0, 1)] * ta + c.t.d2[d2_slot(1, 1)] * tb);
        }
        detail::adjoint_update(bar, c, bar_i);
    }
    w.resize(static_cast<std::size_t>(n));
    return w;
}

} // namespace hotad
