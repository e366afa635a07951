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

#include <doctest.h>

#include <cstdint>
#include <vector>

#include <hotad/elementals.hpp>
#include <hotad/errors.hpp>
#include <hotad/first_order.hpp>
#include <hotad/oracle.hpp>

#include "test_support.hpp"

using namespace hotad;
using namespace hotad::test;

TEST_CASE("the example tape produces the documented gradient and adjoints") {
    const Tape t = make_toy_tape();
    const ValueTrace trace = eval_forward(t, kToyX);

    const std::vector<double> g = reverse_gradient(t, trace);
    REQUIRE(g.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CAPTURE(i);
        CHECK(rel_diff(g[i], kToyGradient[i]) < 1e-12);
    }

    const AdjointVector a = reverse_sweep(t, trace);
    CHECK(a.n_independent() == 3);
    CHECK(a.size() == 6);
    CHECK(a.at(3) == 1.0);        // the seed itself
    CHECK(a.at(2) == 2.0);        // d f / d v2 = v1 = x y
    CHECK(a.at(1) == 1.0);        // d f / d v1 = v2 = sin z
    CHECK(a.at(-2) == g[0]);
    CHECK(a.at(-1) == g[1]);
    CHECK(a.at(0) == g[2]);
    CHECK(a.gradient() == g);
    CHECK_THROWS_AS(a.at(4), BoundsError);
}

TEST_CASE("adjoints are linear in the seed") {
    const RandomTape rt = make_random_tape(7);
    const ValueTrace trace = eval_forward(rt.tape, rt.probe);
    const AdjointVector a1 = reverse_sweep(rt.tape, trace, 1.0);
    const AdjointVector a2 = reverse_sweep(rt.tape, trace, 2.0);
    const AdjointVector ah = reverse_sweep(rt.tape, trace, 0.5);
    for (std::int64_t i = 0; i < a1.size(); ++i) {
        const double v = a1.raw()[static_cast<std::size_t>(i)];
        // Scaling by a power of two is exact, so so is the whole sweep.
        CHECK(a2.raw()[static_cast<std::size_t>(i)] == 2.0 * v);
        CHECK(ah.raw()[static_cast<std::size_t>(i)] == 0.5 * v);
    }
}

TEST_CASE("single-node tapes differentiate correctly") {
    TapeBuilder b(1);
    const Tape t = b.seal(b.identity(b.input(0)));
    const ValueTrace trace = eval_forward(t, std::vector<double>{5.0});
    CHECK(reverse_gradient(t, trace) == std::vector<double>{1.0});

    TapeBuilder b2(1);
    const Tape t2 = b2.seal(b2.square(b2.input(0)));
    const ValueTrace trace2 = eval_forward(t2, std::vector<double>{5.0});
    CHECK(reverse_gradient(t2, trace2) == std::vector<double>{10.0});
}

TEST_CASE("random tapes match the finite-difference gradient") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const RandomTape rt = make_random_tape(seed);
        CAPTURE(seed);
        const ValueTrace trace = eval_forward(rt.tape, rt.probe);
        const std::vector<double> g = reverse_gradient(rt.tape, trace);
        const std::vector<double> fd = fd_gradient(rt.tape, rt.probe);
        CHECK(max_rel_diff(g, fd) < 1e-5);
    }
}

TEST_CASE("the example tangent sweep propagates the documented values") {
    const Tape t = make_toy_tape();
    const ValueTrace trace = eval_forward(t, kToyX);
    const TangentVector dot = forward_tangent(t, trace, kToyD);
    CHECK(dot.size() == 6);
    CHECK(dot.at(-2) == 1.0);
    CHECK(dot.at(-1) == 1.0);
    CHECK(dot.at(0) == 1.0);
    CHECK(dot.at(1) == 3.0); // d(x y) = y + x
    CHECK(rel_diff(dot.at(2), 0.0) < 1e-12);
    CHECK(rel_diff(dot.output(), 3.0) < 1e-12); // grad . d
    CHECK_THROWS_AS(dot.at(6), BoundsError);
}

TEST_CASE("tangents are linear in the direction") {
    const RandomTape rt = make_random_tape(11);
    const ValueTrace trace = eval_forward(rt.tape, rt.probe);
    const std::vector<double> d = random_direction(3, rt.tape.n_independent());
    std::vector<double> d2 = d;
    for (double& v : d2) v *= 2.0;
    const TangentVector t1 = forward_tangent(rt.tape, trace, d);
    const TangentVector t2 = forward_tangent(rt.tape, trace, d2);
    for (std::int64_t i = 0; i < t1.size(); ++i)
        CHECK(t2.raw()[static_cast<std::size_t>(i)]
              == 2.0 * t1.raw()[static_cast<std::size_t>(i)]);
}

TEST_CASE("the output tangent equals the gradient dotted with the direction") {
    for (std::uint64_t seed = 50; seed <= 80; ++seed) {
        const RandomTape rt = make_random_tape(seed);
        CAPTURE(seed);
        const ValueTrace trace = eval_forward(rt.tape, rt.probe);
        const std::vector<double> d = random_direction(seed + 1, rt.tape.n_independent());
        const TangentVector dot = forward_tangent(rt.tape, trace, d);
        const std::vector<double> g = reverse_gradient(rt.tape, trace);
        double gd = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) gd += g[i] * d[i];
        CHECK(rel_diff(dot.output(), gd) < 1e-10);
    }
}

TEST_CASE("pulling tangents from predecessors equals pushing along successors") {
    // The sweep accumulates predecessor contributions in ascending slot
    // order, which makes it edge-for-edge identical to a push-style loop
    // over successor lists -- including the floating-point result.
    for (std::uint64_t seed = 90; seed <= 110; ++seed) {
        const RandomTape rt = make_random_tape(seed);
        CAPTURE(seed);
        const Tape& tape = rt.tape;
        const std::int64_t n = tape.n_independent();
        const ValueTrace trace = eval_forward(tape, rt.probe);
        const std::vector<double> d = random_direction(seed, n);

        std::vector<std::vector<std::int64_t>> succ(
            static_cast<std::size_t>(tape.n_slots()));
        for (std::int64_t i = 1; i <= tape.n_nodes(); ++i) {
            const Node& nd = tape.node(i);
            succ[static_cast<std::size_t>(nd.a)].push_back(i);
            if (nd.b >= 0) succ[static_cast<std::size_t>(nd.b)].push_back(i);
        }

        std::vector<double> dot(static_cast<std::size_t>(tape.n_slots()), 0.0);
        std::copy(d.begin(), d.end(), dot.begin());
        for (std::int64_t s = 0; s < tape.n_slots(); ++s)
            for (const std::int64_t i : succ[static_cast<std::size_t>(s)]) {
                const Node& nd = tape.node(i);
                PartialTables t;
                local_partials<1>(nd.op, trace.raw()[static_cast<std::size_t>(nd.a)],
                                  nd.b >= 0 ? trace.raw()[static_cast<std::size_t>(nd.b)]
                                            : 0.0,
                                  tape.param_of(nd), t);
                const double w = s == nd.a ? t.d1[0] : t.d1[1];
                dot[static_cast<std::size_t>(n - 1 + i)]
                    += w * dot[static_cast<std::size_t>(s)];
            }

        const TangentVector pull = forward_tangent(tape, trace, d);
        for (std::int64_t s = 0; s < tape.n_slots(); ++s)
            CHECK(pull.raw()[static_cast<std::size_t>(s)]
                  == dot[static_cast<std::size_t>(s)]);
    }
}

TEST_CASE("first-order sweeps reject mismatched shapes") {
    const Tape toy = make_toy_tape();
    const ValueTrace trace = eval_forward(toy, kToyX);

    TapeBuilder b(2);
    const Tape other = b.seal(b.mul(b.input(0), b.input(1)));
    CHECK_THROWS_AS(reverse_sweep(other, trace), ShapeError);
    CHECK_THROWS_AS(forward_tangent(other, trace, std::vector<double>{1.0, 1.0}),
                    ShapeError);
    CHECK_THROWS_AS(forward_tangent(toy, trace, std::vector<double>{1.0, 1.0}),
                    ShapeError);
}
