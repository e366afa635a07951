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
#include <string>
#include <utility>
#include <vector>

#include <hotad/errors.hpp>

namespace hotad {

// Symmetric sparse matrix stored as an array of weighted neighbourhood
// lists: entry {j, k} with j >= k lives in row j, rows are kept sorted by
// column so lookups are binary searches and inserts shift a suffix of a
// small array.  Rows grow by doubling and can be released individually,
// which the reverse sweeps use to drop a node's row as soon as the sweep
// has passed it.
//
// Logical indices run over [lo, hi]; internally row r stands for logical
// lo + r.  A matrix over all slots of a tape uses lo = 1 - n, and its
// leading n rows (the independents) can be split off without copying the
// entry arrays.
class SymSparseMat {
public:
#pragma pack(push, 4)
    struct Entry {
        std::int32_t col;  // internal (0-based) column, <= own row
        double weight;
    };
#pragma pack(pop)
    static_assert(sizeof(Entry) == 12);

    SymSparseMat(std::int64_t lo, std::int64_t hi);
    SymSparseMat(const SymSparseMat& other);
    SymSparseMat(SymSparseMat&& other) noexcept;
    SymSparseMat& operator=(const SymSparseMat& other);
    SymSparseMat& operator=(SymSparseMat&& other) noexcept;
    ~SymSparseMat();

    std::int64_t lo() const { return lo_; }
    std::int64_t hi() const { return lo_ + dim() - 1; }
    std::int64_t dim() const { return static_cast<std::int64_t>(rows_.size()); }

    // W_{jk} += delta, creating the entry if absent.  Symmetric: the
    // order of j and k does not matter.  An entry stays stored even when
    // increments cancel it back to zero.
    void increment(std::int64_t j, std::int64_t k, double delta);
    double get(std::int64_t j, std::int64_t k) const;
    bool stored(std::int64_t j, std::int64_t k) const;

    // Stored neighbours {i, k} with k <= i, ascending in k.
    std::vector<std::pair<std::int64_t, double>> row_entries(std::int64_t i) const;

    // Number of nonzeros of the full symmetric matrix: off-diagonal
    // stored entries count twice, diagonal entries once, entries whose
    // weight is exactly zero not at all.
    std::int64_t nnz() const;
    // Stored entries regardless of weight (lower triangle).
    std::int64_t stored_entries() const;

    // The leading block of rows for logical indices <= 0, i.e. the
    // independents of a tape-sized matrix, renumbered to [1, n].  The
    // rvalue overload steals the rows instead of copying them.
    SymSparseMat restricted_to_independents() const&;
    SymSparseMat restricted_to_independents() &&;

    // "j,k,weight" per stored lower-triangle entry, ascending (j, k),
    // logical indices.
    std::string dump_csv() const;

    void release_row(std::int64_t i);

    // --- internal-index interface used by the sweeps -------------------
    void increment_internal(std::int32_t j, std::int32_t k, double delta);
    std::span<const Entry> row_internal(std::int32_t r) const;
    double get_internal(std::int32_t j, std::int32_t k) const;
    void release_row_internal(std::int32_t r);
    bool row_released_internal(std::int32_t r) const;

    // Checks ordering and range of every stored entry (test support).
    void validate_structure() const;

private:
    struct Row {
        Entry* data = nullptr;
        std::uint32_t size = 0;
        std::uint32_t cap = 0;
    };

    std::int32_t check_index(std::int64_t logical) const;
    static void insert_entry(Row& row, std::uint32_t pos, Entry e);
    void free_all();
    void copy_from(const SymSparseMat& other);

    std::vector<Row> rows_;
    std::int64_t lo_ = 1;
};

} // namespace hotad
