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

#include <algorithm>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include <hotad/errors.hpp>
#include <hotad/sparse_sym.hpp>

using namespace hotad;

namespace {

using Key = std::pair<std::int64_t, std::int64_t>; // (col, row), col <= row

Key key(std::int64_t j, std::int64_t k) {
    return {std::min(j, k), std::max(j, k)};
}

std::int64_t mirror_nnz(const std::map<Key, double>& m) {
    std::int64_t nnz = 0;
    for (const auto& [jk, w] : m)
        if (w != 0.0) nnz += jk.first == jk.second ? 1 : 2;
    return nnz;
}

} // namespace

TEST_CASE("entries accumulate symmetrically and rows stay sorted") {
    CHECK(sizeof(SymSparseMat::Entry) == 12);

    SymSparseMat m(1, 40);
    CHECK(m.lo() == 1);
    CHECK(m.hi() == 40);
    CHECK(m.dim() == 40);

    m.increment(3, 5, 0.5);
    m.increment(5, 3, 1.0); // same logical entry, transposed
    CHECK(m.get(3, 5) == 1.5);
    CHECK(m.get(5, 3) == 1.5);
    CHECK(m.stored(5, 3));
    CHECK_FALSE(m.stored(5, 4));
    CHECK(m.get(5, 4) == 0.0);

    m.increment(5, 1, -2.0);
    m.increment(5, 5, 4.0);
    m.increment(5, 2, 1.0);
    const auto row = m.row_entries(5);
    REQUIRE(row.size() == 4);
    CHECK(row[0] == std::pair<std::int64_t, double>{1, -2.0});
    CHECK(row[1] == std::pair<std::int64_t, double>{2, 1.0});
    CHECK(row[2] == std::pair<std::int64_t, double>{3, 1.5});
    CHECK(row[3] == std::pair<std::int64_t, double>{5, 4.0});
    m.validate_structure();
}

TEST_CASE("nnz counts off-diagonal entries twice and diagonal entries once") {
    SymSparseMat m(1, 5);
    CHECK(m.nnz() == 0);
    m.increment(1, 2, 0.5);
    CHECK(m.nnz() == 2);
    m.increment(2, 2, 1.0);
    CHECK(m.nnz() == 3);
    m.increment(4, 1, -1.0);
    CHECK(m.nnz() == 5);
    CHECK(m.stored_entries() == 3);
}

TEST_CASE("cancelled entries stay stored but leave the nonzero count") {
    SymSparseMat m(1, 5);
    m.increment(1, 2, 1.5);
    m.increment(2, 1, -1.5);
    CHECK(m.stored(1, 2));
    CHECK(m.get(1, 2) == 0.0);
    CHECK(m.nnz() == 0);
    CHECK(m.stored_entries() == 1);

    m.increment(3, 3, 2.0);
    m.increment(3, 3, -2.0);
    CHECK(m.nnz() == 0);
    CHECK(m.stored_entries() == 2);

    m.increment(1, 2, 0.25); // revives through the stored entry
    CHECK(m.nnz() == 2);
}

TEST_CASE("random increments agree with an order-independent mirror") {
    for (const auto& [lo, hi] : {std::pair<std::int64_t, std::int64_t>{1, 40},
                                std::pair<std::int64_t, std::int64_t>{-9, 30}}) {
        CAPTURE(lo);
        SymSparseMat m(lo, hi);
        std::map<Key, double> mirror;
        std::mt19937_64 rng(42);
        std::uniform_int_distribution<std::int64_t> idx(lo, hi);
        std::uniform_int_distribution<int> kind(0, 9);
        std::uniform_real_distribution<double> delta(-2.0, 2.0);

        for (int step = 0; step < 2000; ++step) {
            if (kind(rng) == 0 && !mirror.empty()) {
                // Cancel an existing entry exactly.
                auto it = mirror.begin();
                std::advance(it, static_cast<std::ptrdiff_t>(
                                     static_cast<std::uint64_t>(rng()) % mirror.size()));
                m.increment(it->first.second, it->first.first, -it->second);
                it->second = 0.0;
            } else {
                const std::int64_t j = idx(rng);
                const std::int64_t k = idx(rng);
                const double d = delta(rng);
                m.increment(j, k, d);
                mirror[key(j, k)] += d;
            }
        }

        for (std::int64_t j = lo; j <= hi; ++j)
            for (std::int64_t k = lo; k <= j; ++k) {
                const auto it = mirror.find(key(j, k));
                const double want = it == mirror.end() ? 0.0 : it->second;
                CHECK(m.get(j, k) == want);
                CHECK(m.stored(j, k) == (it != mirror.end()));
            }
        CHECK(m.stored_entries() == static_cast<std::int64_t>(mirror.size()));
        CHECK(m.nnz() == mirror_nnz(mirror));

        for (std::int64_t r = lo; r <= hi; ++r) {
            const auto row = m.row_entries(r);
            CHECK(std::is_sorted(row.begin(), row.end(),
                                 [](const auto& a, const auto& b) {
                                     return a.first < b.first;
                                 }));
            std::size_t expect = 0;
            for (const auto& [jk, w] : mirror)
                if (jk.second == r) ++expect;
            CHECK(row.size() == expect);
        }
        m.validate_structure();
    }
}

TEST_CASE("csv dump is exact and ordered") {
    SymSparseMat m(1, 3);
    m.increment(3, 2, 1.25);
    m.increment(1, 1, 0.5);
    m.increment(2, 1, -2.0);
    CHECK(m.dump_csv() == "1,1,0.5\n2,1,-2\n3,2,1.25\n");

    SymSparseMat shifted(-1, 1);
    shifted.increment(0, -1, 3.0);
    CHECK(shifted.dump_csv() == "0,-1,3\n");
}

TEST_CASE("rows can be released individually") {
    SymSparseMat m(1, 6);
    m.increment(4, 2, 1.0);
    m.increment(5, 4, 2.0);
    m.increment(6, 6, 3.0);
    m.release_row(4);
    CHECK(m.get(4, 2) == 0.0);
    CHECK(m.get(5, 4) == 2.0); // lives in row 5, untouched
    CHECK(m.get(6, 6) == 3.0);
    m.release_row(4); // releasing twice is harmless
    m.increment(4, 1, 7.0); // the slot itself remains usable
    CHECK(m.get(4, 1) == 7.0);
}

TEST_CASE("the leading block splits off as the independent submatrix") {
    // Tape-sized layout for n = 3: logical -2..0 are independents.
    SymSparseMat m(-2, 4);
    m.increment(-2, -2, 1.0);
    m.increment(0, -2, 2.0);
    m.increment(0, -1, 3.0);
    m.increment(4, 0, 9.0);
    m.increment(3, 2, 7.0);

    const SymSparseMat r = m.restricted_to_independents();
    CHECK(r.lo() == 1);
    CHECK(r.hi() == 3);
    CHECK(r.get(1, 1) == 1.0);
    CHECK(r.get(3, 1) == 2.0);
    CHECK(r.get(3, 2) == 3.0);
    CHECK(r.stored_entries() == 3);
    // The original is intact after the copying overload.
    CHECK(m.get(4, 0) == 9.0);
    CHECK(m.get(0, -2) == 2.0);

    SymSparseMat victim(m);
    const SymSparseMat moved = std::move(victim).restricted_to_independents();
    CHECK(moved.get(1, 1) == 1.0);
    CHECK(moved.get(3, 1) == 2.0);
    CHECK(moved.get(3, 2) == 3.0);
    CHECK(moved.stored_entries() == 3);
    CHECK(victim.dim() == 0);
}

TEST_CASE("copies are deep and moves leave an empty source") {
    SymSparseMat a(1, 4);
    a.increment(2, 1, 1.0);
    a.increment(4, 4, 2.0);

    SymSparseMat b(a);
    b.increment(2, 1, 10.0);
    CHECK(a.get(2, 1) == 1.0);
    CHECK(b.get(2, 1) == 11.0);

    SymSparseMat c(1, 1);
    c = a;
    CHECK(c.get(4, 4) == 2.0);
    a.increment(4, 4, 5.0);
    CHECK(c.get(4, 4) == 2.0);

    SymSparseMat d(std::move(b));
    CHECK(d.get(2, 1) == 11.0);
    CHECK(b.dim() == 0);

    SymSparseMat e(1, 1);
    e = std::move(d);
    CHECK(e.get(2, 1) == 11.0);
    CHECK(d.dim() == 0);

    // Self-assignment keeps the contents.
    e = e;
    CHECK(e.get(2, 1) == 11.0);
}

TEST_CASE("index range is enforced") {
    CHECK_THROWS_AS(SymSparseMat(3, 2), ParamError);
    SymSparseMat m(1, 4);
    CHECK_THROWS_AS(m.increment(0, 1, 1.0), BoundsError);
    CHECK_THROWS_AS(m.increment(1, 5, 1.0), BoundsError);
    CHECK_THROWS_AS(m.get(5, 1), BoundsError);
    CHECK_THROWS_AS(m.row_entries(0), BoundsError);
    CHECK_THROWS_AS(m.release_row(7), BoundsError);
    CHECK_NOTHROW(m.increment(4, 4, 1.0));
}
