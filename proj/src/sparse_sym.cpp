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

#include <hotad/sparse_sym.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>

namespace hotad {

namespace {

// Entries are ordered by column; weights do not participate.
struct ColLess {
    bool operator()(const SymSparseMat::Entry& e, std::int32_t col) const {
        return e.col < col;
    }
};

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

} // namespace

SymSparseMat::SymSparseMat(std::int64_t lo, std::int64_t hi) : lo_(lo) {
    if (hi < lo) throw ParamError("empty index range");
    const std::int64_t dim = hi - lo + 1;
    if (dim > std::numeric_limits<std::int32_t>::max())
        throw ResourceError("matrix dimension too large");
    rows_.resize(static_cast<std::size_t>(dim));
}

SymSparseMat::SymSparseMat(const SymSparseMat& other) { copy_from(other); }

SymSparseMat::SymSparseMat(SymSparseMat&& other) noexcept
    : rows_(std::move(other.rows_)), lo_(other.lo_) {
    other.rows_.clear();
}

SymSparseMat& SymSparseMat::operator=(const SymSparseMat& other) {
    if (this != &other) {
        free_all();
        copy_from(other);
    }
    return *this;
}

SymSparseMat& SymSparseMat::operator=(SymSparseMat&& other) noexcept {
    if (this != &other) {
        free_all();
        rows_ = std::move(other.rows_);
        lo_ = other.lo_;
        other.rows_.clear();
    }
    return *this;
}

SymSparseMat::~SymSparseMat() { free_all(); }

void SymSparseMat::free_all() {
    for (Row& r : rows_) {
        std::free(r.data);
        r = Row{};
    }
}

void SymSparseMat::copy_from(const SymSparseMat& other) {
    lo_ = other.lo_;
    rows_.assign(other.rows_.size(), Row{});
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Row& src = other.rows_[i];
        if (src.size == 0) continue;
        Row& dst = rows_[i];
        dst.data = static_cast<Entry*>(std::malloc(sizeof(Entry) * src.size));
        if (!dst.data) throw std::bad_alloc();
        std::memcpy(dst.data, src.data, sizeof(Entry) * src.size);
        dst.size = src.size;
        dst.cap = src.size;
    }
}

std::int32_t SymSparseMat::check_index(std::int64_t logical) const {
    if (logical < lo_ || logical > hi())
        throw BoundsError("index " + std::to_string(logical) + " outside ["
                          + std::to_string(lo_) + ", " + std::to_string(hi()) + "]");
    return static_cast<std::int32_t>(logical - lo_);
}

void SymSparseMat::insert_entry(Row& row, std::uint32_t pos, Entry e) {
    if (row.size == row.cap) {
        const std::uint32_t new_cap = row.cap ? row.cap * 2 : 4;
        Entry* grown = static_cast<Entry*>(
            std::realloc(row.data, sizeof(Entry) * new_cap));
        if (!grown) throw std::bad_alloc();
        row.data = grown;
        row.cap = new_cap;
    }
    std::memmove(row.data + pos + 1, row.data + pos,
                 sizeof(Entry) * (row.size - pos));
    row.data[pos] = e;
    ++row.size;
}

void SymSparseMat::increment_internal(std::int32_t j, std::int32_t k, double delta) {
    if (j < k) std::swap(j, k);
    Row& row = rows_[static_cast<std::size_t>(j)];
    Entry* end = row.data + row.size;
    Entry* it = std::lower_bound(row.data, end, k, ColLess{});
    if (it != end && it->col == k) {
        it->weight += delta;
        return;
    }
    insert_entry(row, static_cast<std::uint32_t>(it - row.data), Entry{k, delta});
}

void SymSparseMat::increment(std::int64_t j, std::int64_t k, double delta) {
    increment_internal(check_index(j), check_index(k), delta);
}

double SymSparseMat::get_internal(std::int32_t j, std::int32_t k) const {
    if (j < k) std::swap(j, k);
    const Row& row = rows_[static_cast<std::size_t>(j)];
    const Entry* begin = row.data;
    const Entry* end = begin + row.size;
    const Entry* it = std::lower_bound(begin, end, k, ColLess{});
    return (it != end && it->col == k) ? it->weight : 0.0;
}

double SymSparseMat::get(std::int64_t j, std::int64_t k) const {
    return get_internal(check_index(j), check_index(k));
}

bool SymSparseMat::stored(std::int64_t j, std::int64_t k) const {
    std::int32_t jj = check_index(j);
    std::int32_t kk = check_index(k);
    if (jj < kk) std::swap(jj, kk);
    const Row& row = rows_[static_cast<std::size_t>(jj)];
    const Entry* begin = row.data;
    const Entry* end = begin + row.size;
    const Entry* it = std::lower_bound(begin, end, kk, ColLess{});
    return it != end && it->col == kk;
}

std::span<const SymSparseMat::Entry> SymSparseMat::row_internal(std::int32_t r) const {
    const Row& row = rows_[static_cast<std::size_t>(r)];
    return {row.data, row.size};
}

std::vector<std::pair<std::int64_t, double>>
SymSparseMat::row_entries(std::int64_t i) const {
    const std::int32_t r = check_index(i);
    std::vector<std::pair<std::int64_t, double>> out;
    for (const Entry& e : row_internal(r)) out.emplace_back(lo_ + e.col, e.weight);
    return out;
}

std::int64_t SymSparseMat::nnz() const {
    std::int64_t count = 0;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const Row& row = rows_[r];
        for (std::uint32_t e = 0; e < row.size; ++e) {
            if (row.data[e].weight == 0.0) continue;
            count += row.data[e].col == static_cast<std::int32_t>(r) ? 1 : 2;
        }
    }
    return count;
}

std::int64_t SymSparseMat::stored_entries() const {
    std::int64_t count = 0;
    for (const Row& row : rows_) count += row.size;
    return count;
}

SymSparseMat SymSparseMat::restricted_to_independents() const& {
    SymSparseMat copy(*this);
    return std::move(copy).restricted_to_independents();
}

SymSparseMat SymSparseMat::restricted_to_independents() && {
    if (lo_ > 0)
        throw ParamError("matrix has no independent block to restrict to");
    const std::int64_t n = 1 - lo_;
    // Rows of independents only reference independents (the row index
    // bounds the columns), so the leading n rows are already the whole
    // restricted matrix and can be moved wholesale.
    SymSparseMat out(1, n);
    for (std::int64_t r = 0; r < n; ++r) {
        out.rows_[static_cast<std::size_t>(r)] = rows_[static_cast<std::size_t>(r)];
        rows_[static_cast<std::size_t>(r)] = Row{};
    }
    free_all();
    rows_.clear();
    return out;
}

std::string SymSparseMat::dump_csv() const {
    std::string out;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const Row& row = rows_[r];
        for (std::uint32_t e = 0; e < row.size; ++e) {
            out += std::to_string(lo_ + static_cast<std::int64_t>(r));
            out += ',';
            out += std::to_string(lo_ + row.data[e].col);
            out += ',';
            out += format_double(row.data[e].weight);
            out += '\n';
        }
    }
    return out;
}

void SymSparseMat::release_row(std::int64_t i) {
    release_row_internal(check_index(i));
}

void SymSparseMat::release_row_internal(std::int32_t r) {
    Row& row = rows_[static_cast<std::size_t>(r)];
    std::free(row.data);
    row = Row{};
}

bool SymSparseMat::row_released_internal(std::int32_t r) const {
    const Row& row = rows_[static_cast<std::size_t>(r)];
    return row.data == nullptr && row.size == 0;
}

void SymSparseMat::validate_structure() const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const Row& row = rows_[r];
        if (row.size > row.cap) throw InvariantViolation("row size exceeds capacity");
        for (std::uint32_t e = 0; e < row.size; ++e) {
            const std::int32_t col = row.data[e].col;
            if (col < 0 || col > static_cast<std::int32_t>(r))
                throw InvariantViolation("column outside lower triangle");
            if (e > 0 && row.data[e - 1].col >= col)
                throw InvariantViolation("row not strictly ascending");
        }
    }
}

} // namespace hotad
