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

#include <hotad/problems.hpp>

#include <algorithm>
#include <cstdlib>

#include <hotad/third_order.hpp>

namespace hotad {

namespace {

// f = sum_{i=1}^{n-1} cos(x_i^2 - x_{i+1}/2); tridiagonal Hessian.
Tape build_cosine(std::int64_t n) {
    TapeBuilder b(n);
    VarRef acc{};
    for (std::int64_t i = 0; i + 1 < n; ++i) {
        const VarRef u = b.square(b.input(i));
        const VarRef s = b.scale(b.input(i + 1), -0.5);
        const VarRef term = b.cos(b.add(u, s));
        acc = i == 0 ? term : b.add(acc, term);
    }
    return b.seal(acc);
}

// f = sum_{i=1}^{n-band} sin(x_{i+1} + ... + x_{i+band}); banded Hessian
// of half-width band - 1 (x_1 does not appear).
Tape build_heavey_band(std::int64_t n, std::int64_t band) {
    TapeBuilder b(n);
    VarRef acc{};
    for (std::int64_t t = 0; t < n - band; ++t) {
        VarRef s = b.input(t + 1);
        for (std::int64_t j = 2; j <= band; ++j) s = b.add(s, b.input(t + j));
        const VarRef term = b.sin(s);
        acc = t == 0 ? term : b.add(acc, term);
    }
    return b.seal(acc);
}

// Chained variant of the classic four-variable wood function, blocks
// overlapping in steps of two.
Tape build_chainwood(std::int64_t n) {
    TapeBuilder b(n);
    VarRef acc{};
    bool first = true;
    for (std::int64_t j = 0; j + 3 < n; j += 2) {
        const VarRef xa = b.input(j);
        const VarRef xb = b.input(j + 1);
        const VarRef xc = b.input(j + 2);
        const VarRef xd = b.input(j + 3);
        const VarRef t1 = b.scale(b.square(b.sub(xb, b.square(xa))), 100.0);
        const VarRef t2 = b.square(b.shift(b.neg(xa), 1.0));
        const VarRef t3 = b.scale(b.square(b.sub(xd, b.square(xc))), 90.0);
        const VarRef t4 = b.square(b.shift(b.neg(xc), 1.0));
        const VarRef t5 = b.scale(b.square(b.shift(b.add(xb, xd), -2.0)), 10.0);
        const VarRef t6 = b.scale(b.square(b.sub(xb, xd)), 0.1);
        VarRef block = b.add(b.add(t1, t2), b.add(t3, t4));
        block = b.add(block, b.add(t5, t6));
        acc = first ? block : b.add(acc, block);
        first = false;
    }
    return b.seal(b.shift(acc, 1.0));
}

// f = sum_{i=1}^{n-1} ((x_i^2 + x_n^2)^2 - 4 x_i + 3); arrowhead Hessian.
Tape build_arwhead(std::int64_t n) {
    TapeBuilder b(n);
    const VarRef sqn = b.square(b.input(n - 1));
    VarRef acc{};
    for (std::int64_t i = 0; i + 1 < n; ++i) {
        const VarRef t = b.square(b.add(b.square(b.input(i)), sqn));
        const VarRef term = b.shift(b.add(t, b.scale(b.input(i), -4.0)), 3.0);
        acc = i == 0 ? term : b.add(acc, term);
    }
    return b.seal(acc);
}

// f = (x_1 - 1)^4 + (x_n^2 - x_1^2)^2
//     + sum_{i=2}^{n-1} (sin(x_i - x_n) - x_1^2 + x_i^2)^2;
// diagonal plus dense first and last rows.
Tape build_sinquad(std::int64_t n) {
    TapeBuilder b(n);
    const VarRef x1 = b.input(0);
    const VarRef xn = b.input(n - 1);
    const VarRef sq1 = b.square(x1);
    VarRef acc = b.square(b.square(b.shift(x1, -1.0)));
    for (std::int64_t i = 1; i + 1 < n; ++i) {
        const VarRef xi = b.input(i);
        const VarRef r = b.sin(b.sub(xi, xn));
        const VarRef q = b.add(r, b.sub(b.square(xi), sq1));
        acc = b.add(acc, b.square(q));
    }
    return b.seal(b.add(acc, b.square(b.sub(b.square(xn), sq1))));
}

// Broyden banded residuals r_i = x_i (2 + 5 x_i^2) + 1
// - sum_{j in J_i} x_j (1 + x_j), J_i = [max(1, i-5), min(n, i+1)] \ {i};
// f = sum r_i^2.  Hessian band of half-width 6.
Tape build_brybnd(std::int64_t n) {
    TapeBuilder b(n);
    std::vector<VarRef> sq(static_cast<std::size_t>(n));
    std::vector<VarRef> g(static_cast<std::size_t>(n));
    for (std::int64_t j = 0; j < n; ++j) {
        sq[static_cast<std::size_t>(j)] = b.square(b.input(j));
        g[static_cast<std::size_t>(j)] = b.add(b.input(j), sq[static_cast<std::size_t>(j)]);
    }
    VarRef acc{};
    for (std::int64_t i = 0; i < n; ++i) {
        const VarRef cube = b.mul(sq[static_cast<std::size_t>(i)], b.input(i));
        VarRef r = b.add(b.scale(b.input(i), 2.0), b.scale(cube, 5.0));
        const std::int64_t jlo = std::max<std::int64_t>(0, i - 5);
        const std::int64_t jhi = std::min<std::int64_t>(n - 1, i + 1);
        for (std::int64_t j = jlo; j <= jhi; ++j) {
            if (j == i) continue;
            r = b.sub(r, g[static_cast<std::size_t>(j)]);
        }
        const VarRef term = b.square(b.shift(r, 1.0));
        acc = i == 0 ? term : b.add(acc, term);
    }
    return b.seal(acc);
}

// f = sum_i x_i^2 + sum_{i<n} x_i x_{i+1}: quadratic, so the third
// derivative vanishes identically.
Tape build_quadratic(std::int64_t n) {
    TapeBuilder b(n);
    VarRef acc = b.square(b.input(0));
    for (std::int64_t i = 1; i < n; ++i) acc = b.add(acc, b.square(b.input(i)));
    for (std::int64_t i = 0; i + 1 < n; ++i)
        acc = b.add(acc, b.mul(b.input(i), b.input(i + 1)));
    return b.seal(acc);
}

// f = x y sin(z): three variables, every derivative writable by hand.
Tape build_toy_xysinz() {
    TapeBuilder b(3);
    const VarRef v1 = b.mul(b.input(0), b.input(1));
    const VarRef v2 = b.sin(b.input(2));
    return b.seal(b.mul(v2, v1));
}

bool pattern_band1(std::int64_t j, std::int64_t k, std::int64_t, std::int64_t) {
    return std::abs(j - k) <= 1;
}

bool pattern_band(std::int64_t j, std::int64_t k, std::int64_t, std::int64_t band) {
    return std::abs(j - k) <= band - 1;
}

bool pattern_band6(std::int64_t j, std::int64_t k, std::int64_t, std::int64_t) {
    return std::abs(j - k) <= 6;
}

bool pattern_chainwood(std::int64_t j, std::int64_t k, std::int64_t, std::int64_t) {
    const std::int64_t a = std::min(j, k);
    const std::int64_t b = std::max(j, k);
    return (b == a + 1 && a % 2 == 1) || (b == a + 2 && a % 2 == 0);
}

bool pattern_arrow(std::int64_t j, std::int64_t k, std::int64_t n, std::int64_t) {
    return std::max(j, k) == n;
}

bool pattern_frame(std::int64_t j, std::int64_t k, std::int64_t n, std::int64_t) {
    return std::min(j, k) == 1 || std::max(j, k) == n;
}

bool pattern_full(std::int64_t, std::int64_t, std::int64_t, std::int64_t) {
    return true;
}

constexpr ProblemInfo kRegistry[] = {
    {"cosine", "tridiagonal", 2, false, false, pattern_band1},
    {"heavey_band", "band of half-width band-1", 2, false, false, pattern_band},
    {"chainwood", "overlapping 2x2 blocks", 4, false, true, pattern_chainwood},
    {"arwhead", "arrowhead", 2, false, false, pattern_arrow},
    {"sinquad", "frame plus diagonal", 3, false, false, pattern_frame},
    {"brybnd", "band of half-width 6", 2, false, false, pattern_band6},
    {"quadratic", "tridiagonal, third order vanishes", 2, false, false, pattern_band1},
    {"toy_xysinz", "dense 3x3", 3, true, false, pattern_full},
};

} // namespace

std::span<const ProblemInfo> problem_registry() { return kRegistry; }

const ProblemInfo* find_problem(std::string_view name) {
    for (const ProblemInfo& p : kRegistry)
        if (p.name == name) return &p;
    return nullptr;
}

Tape make_problem(const ProblemSpec& spec) {
    const ProblemInfo* info = find_problem(spec.name);
    if (!info) throw UnknownProblemError("unknown problem '" + spec.name + "'");
    if (spec.n < info->min_n)
        throw ParamError(spec.name + " needs n >= " + std::to_string(info->min_n));
    if (info->fixed_n && spec.n != info->min_n)
        throw ParamError(spec.name + " only exists at n = " + std::to_string(info->min_n));
    if (info->even_n && spec.n % 2 != 0)
        throw ParamError(spec.name + " needs an even n");

    if (spec.name == "cosine") return build_cosine(spec.n);
    if (spec.name == "heavey_band") {
        if (spec.band < 1) throw ParamError("heavey_band needs band >= 1");
        if (spec.n <= spec.band)
            throw ParamError("heavey_band needs n > band");
        return build_heavey_band(spec.n, spec.band);
    }
    if (spec.name == "chainwood") return build_chainwood(spec.n);
    if (spec.name == "arwhead") return build_arwhead(spec.n);
    if (spec.name == "sinquad") return build_sinquad(spec.n);
    if (spec.name == "brybnd") return build_brybnd(spec.n);
    if (spec.name == "quadratic") return build_quadratic(spec.n);
    return build_toy_xysinz();
}

std::vector<double> paper_point(std::int64_t n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] = static_cast<double>(i + 1);
    return x;
}

std::vector<double> scaled_point(std::int64_t n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] = static_cast<double>(i + 1)
                                         / static_cast<double>(n);
    return x;
}

std::vector<double> unit_direction(std::int64_t n) {
    return std::vector<double>(static_cast<std::size_t>(n), 1.0);
}

Density density(const Tape& tape, std::span<const double> x,
                std::span<const double> d) {
    const ValueTrace trace = eval_forward(tape, x);
    const TensorVecResult r = rev_hedir(tape, trace, d);
    Density out;
    out.nnz = r.td.nnz();
    out.per_n = static_cast<double>(out.nnz)
                / static_cast<double>(tape.n_independent());
    return out;
}

} // namespace hotad
