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

#include <hotad/first_order.hpp>

#include <algorithm>

namespace hotad {

namespace {

void require_matching(const Tape& tape, const ValueTrace& trace) {
    if (trace.n_independent() != tape.n_independent()
        || trace.size() != tape.n_slots())
        throw ShapeError("trace does not belong to this tape");
}

} // namespace

double AdjointVector::at(std::int64_t logical) const {
    const std::int64_t internal = logical + n_ - 1;
    if (internal < 0 || internal >= size())
        throw BoundsError("adjoint index " + std::to_string(logical) + " out of range");
    return v_[static_cast<std::size_t>(internal)];
}

std::vector<double> AdjointVector::gradient() const {
    return std::vector<double>(v_.begin(), v_.begin() + static_cast<std::ptrdiff_t>(n_));
}

double TangentVector::at(std::int64_t logical) const {
    const std::int64_t internal = logical + n_ - 1;
    if (internal < 0 || internal >= size())
        throw BoundsError("tangent index " + std::to_string(logical) + " out of range");
    return v_[static_cast<std::size_t>(internal)];
}

AdjointVector reverse_sweep(const Tape& tape, const ValueTrace& trace, double seed) {
    require_matching(tape, trace);
    const std::int64_t n = tape.n_independent();
    const std::span<const double> v = trace.raw();
    std::vector<double> bar(static_cast<std::size_t>(tape.n_slots()), 0.0);
    bar.back() = seed;

    PartialTables t;
    for (std::int64_t i = tape.n_nodes(); i >= 1; --i) {
        const Node& nd = tape.node(i);
        const double bi = bar[static_cast<std::size_t>(n - 1 + i)];
        const double a = v[static_cast<std::size_t>(nd.a)];
        const double b = nd.b >= 0 ? v[static_cast<std::size_t>(nd.b)] : 0.0;
        local_partials<1>(nd.op, a, b, tape.param_of(nd), t);
        bar[static_cast<std::size_t>(nd.a)] += bi * t.d1[0];
        if (nd.b >= 0) bar[static_cast<std::size_t>(nd.b)] += bi * t.d1[1];
    }
    return AdjointVector(n, std::move(bar));
}

std::vector<double> reverse_gradient(const Tape& tape, const ValueTrace& trace,
                                     double seed) {
    return reverse_sweep(tape, trace, seed).gradient();
}

TangentVector forward_tangent(const Tape& tape, const ValueTrace& trace,
                              std::span<const double> d) {
    require_matching(tape, trace);
    if (static_cast<std::int64_t>(d.size()) != tape.n_independent())
        throw ShapeError("direction has " + std::to_string(d.size())
                         + " entries, tape expects "
                         + std::to_string(tape.n_independent()));
    const std::int64_t n = tape.n_independent();
    const std::span<const double> v = trace.raw();
    std::vector<double> dot(static_cast<std::size_t>(tape.n_slots()), 0.0);
    std::copy(d.begin(), d.end(), dot.begin());

    PartialTables t;
    for (std::int64_t i = 1; i <= tape.n_nodes(); ++i) {
        const Node& nd = tape.node(i);
        const double a = v[static_cast<std::size_t>(nd.a)];
        const double b = nd.b >= 0 ? v[static_cast<std::size_t>(nd.b)] : 0.0;
        local_partials<1>(nd.op, a, b, tape.param_of(nd), t);
        double sum;
        if (nd.b < 0) {
            sum = t.d1[0] * dot[static_cast<std::size_t>(nd.a)];
        } else if (nd.a < nd.b) {
            // Accumulate in ascending predecessor order so the result is
            // bitwise identical to a sweep organised around successor
            // lists instead of predecessor lists.
            sum = t.d1[0] * dot[static_cast<std::size_t>(nd.a)]
                  + t.d1[1] * dot[static_cast<std::size_t>(nd.b)];
        } else {
            sum = t.d1[1] * dot[static_cast<std::size_t>(nd.b)]
                  + t.d1[0] * dot[static_cast<std::size_t>(nd.a)];
        }
        dot[static_cast<std::size_t>(n - 1 + i)] = sum;
    }
    return TangentVector(n, std::move(dot));
}

} // namespace hotad
