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

#include <hotad/errors.hpp>
#include <hotad/oracle.hpp>
#include <hotad/second_order.hpp>

#include "test_support.hpp"

using namespace hotad;
using namespace hotad::test;

TEST_CASE("the example Hessian comes out as documented") {
    const Tape t = make_toy_tape();
    const ValueTrace trace = eval_forward(t, kToyX);
    const HessianResult r = edge_pushing(t, trace);

    CHECK(r.w.lo() == 1);
    CHECK(r.w.hi() == 3);
    CHECK(r.w.get(1, 2) == 1.0);      // d2f/dxdy = sin z, exactly 1 here
    CHECK(r.w.get(2, 1) == 1.0);
    CHECK(r.w.get(3, 3) == -2.0);     // d2f/dz2 = -x y sin z
    CHECK(r.w.get(1, 1) == 0.0);
    CHECK(max_rel_diff(sparse_to_dense(r.w), toy_hessian()) < 1e-12);

    const std::vector<double> g = reverse_gradient(t, trace);
    CHECK(r.gradient == g);
}

TEST_CASE("random tapes match the finite-difference Hessian") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const RandomTape rt = make_random_tape(seed);
        CAPTURE(seed);
        const ValueTrace trace = eval_forward(rt.tape, rt.probe);
        const HessianResult r = edge_pushing(rt.tape, trace);
        CHECK(max_rel_diff(sparse_to_dense(r.w), fd_hessian(rt.tape, rt.probe))
              < 1e-5);
    }
}

TEST_CASE("invariant checking stays silent on healthy sweeps") {
    SweepOptions opts;
    opts.check_invariants = true;
    for (std::uint64_t seed = 31; seed <= 50; ++seed) {
        const RandomTape rt = make_random_tape(seed);
        CAPTURE(seed);
        const ValueTrace trace = eval_forward(rt.tape, rt.probe);
        const HessianResult a = edge_pushing(rt.tape, trace);
        const HessianResult b = edge_pushing(rt.tape, trace, opts);
        // Checking must not change the result.
        CHECK(a.w.dump_csv() == b.w.dump_csv());
        CHECK(a.gradient == b.gradient);
    }
}

TEST_CASE("a hand-built quadratic has the exact analytic Hessian") {
    // f = x1^2 + x2^2 + x1 x2: constant Hessian [[2, 1], [1, 2]].
    TapeBuilder b(2);
    const VarRef s = b.add(b.square(b.input(0)), b.square(b.input(1)));
    const Tape t = b.seal(b.add(s, b.mul(b.input(0), b.input(1))));

    for (const double x0 : {0.0, 1.5, -3.0}) {
        const std::vector<double> x = {x0, 2.0};
        const ValueTrace trace = eval_forward(t, x);
        const HessianResult r = edge_pushing(t, trace);
        CHECK(r.w.get(1, 1) == 2.0);
        CHECK(r.w.get(2, 2) == 2.0);
        CHECK(r.w.get(2, 1) == 1.0);
        CHECK(r.w.nnz() == 4);
    }
}

TEST_CASE("structurally present entries survive a vanishing curvature value") {
    // d2 of u^3 is 6u, which vanishes at u = 0; the entry must still be
    // recorded so that the pattern depends on the program, not the point.
    TapeBuilder b(1);
    const Tape t = b.seal(b.powi(b.input(0), 3));
    const ValueTrace trace = eval_forward(t, std::vector<double>{0.0});
    const HessianResult r = edge_pushing(t, trace);
    CHECK(r.w.stored(1, 1));
    CHECK(r.w.get(1, 1) == 0.0);
    CHECK(r.w.nnz() == 0);
    CHECK(r.w.stored_entries() == 1);

    // Same program away from the crossing: the same single entry, nonzero.
    const ValueTrace t2 = eval_forward(t, std::vector<double>{2.0});
    const HessianResult r2 = edge_pushing(t, t2);
    CHECK(r2.w.get(1, 1) == 12.0);
    CHECK(r2.w.nnz() == 1);
}

TEST_CASE("the example Hessian-vector product is exact") {
    const Tape t = make_toy_tape();
    const ValueTrace trace = eval_forward(t, kToyX);
    const std::vector<double> hd = hessian_vector(t, trace, kToyD);
    REQUIRE(hd.size() == 3);
    CHECK(rel_diff(hd[0], 1.0) < 1e-12);
    CHECK(rel_diff(hd[1], 1.0) < 1e-12);
    CHECK(rel_diff(hd[2], -2.0) < 1e-12);
}

TEST_CASE("Hessian-vector products agree with the assembled Hessian") {
    for (std::uint64_t seed = 60; seed <= 90; ++seed) {
        const RandomTape rt = make_random_tape(seed);
        CAPTURE(seed);
        const ValueTrace trace = eval_forward(rt.tape, rt.probe);
        const std::vector<double> d =
            random_direction(seed + 7, rt.tape.n_independent());
        const std::vector<double> hd = hessian_vector(rt.tape, trace, d);
        const HessianResult r = edge_pushing(rt.tape, trace);
        const std::vector<double> want = sym_apply(r.w, d);
        CHECK(max_rel_diff(hd, want) < 1e-12);
    }
}

TEST_CASE("Hessian-vector products are linear in the direction") {
    const RandomTape rt = make_random_tape(123);
    const ValueTrace trace = eval_forward(rt.tape, rt.probe);
    const std::vector<double> d = random_direction(5, rt.tape.n_independent());
    std::vector<double> d2 = d;
    for (double& v : d2) v *= 2.0;
    const std::vector<double> h1 = hessian_vector(rt.tape, trace, d);
    const std::vector<double> h2 = hessian_vector(rt.tape, trace, d2);
    for (std::size_t i = 0; i < h1.size(); ++i) CHECK(h2[i] == 2.0 * h1[i]);
}

TEST_CASE("second-order sweeps reject mismatched shapes") {
    const Tape toy = make_toy_tape();
    const ValueTrace trace = eval_forward(toy, kToyX);
    TapeBuilder b(2);
    const Tape other = b.seal(b.mul(b.input(0), b.input(1)));
    CHECK_THROWS_AS(edge_pushing(other, trace), ShapeError);
    CHECK_THROWS_AS(hessian_vector(toy, trace, std::vector<double>{1.0}),
                    ShapeError);
}
