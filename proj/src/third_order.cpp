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

#include <hotad/third_order.hpp>

#include <algorithm>
#include <cstring>

#include "sweep_detail.hpp"

namespace hotad {

namespace {

void require_matching(const Tape& tape, const ValueTrace& trace) {
    if (trace.n_independent() != tape.n_independent()
        || trace.size() != tape.n_slots())
        throw ShapeError("trace does not belong to this tape");
}

} // namespace

TensorVecResult rev_hedir(const Tape& tape, const ValueTrace& trace,
                          std::span<const double> d, const SweepOptions& opts) {
    require_matching(tape, trace);
    const TangentVector tangent = forward_tangent(tape, trace, d);
    const std::int64_t n = tape.n_independent();
    const std::span<const double> v = trace.raw();
    const std::span<const double> dv = tangent.raw();

    SymSparseMat w(1 - n, tape.n_nodes());
    SymSparseMat td(1 - n, tape.n_nodes());
    std::vector<double> bar(static_cast<std::size_t>(tape.n_slots()), 0.0);
    bar.back() = 1.0;

    detail::NodeCtx c;
    for (std::int64_t i = tape.n_nodes(); i >= 1; --i) {
        detail::load_ctx<3>(tape, v, i, opts.check_invariants, c);
        const double bar_i = bar[static_cast<std::size_t>(c.ii)];
        const std::int32_t p0 = c.pred[0];
        const std::int32_t p1 = c.pred[1];
        const double dv0 = dv[static_cast<std::size_t>(p0)];
        const double dv1 = c.arity == 2 ? dv[static_cast<std::size_t>(p1)] : 0.0;

        // Tangents contracted with the second derivative rows, and with
        // the first derivatives; the connecting rules below are sums of
        // these.
        double s2[2] = {0.0, 0.0};
        double sd1;
        if (c.arity == 1) {
            s2[0] = dv0 * c.t.d2[0];
            sd1 = dv0 * c.t.d1[0];
        } else {
            s2[0] = dv0 * c.t.d2[d2_slot(0, 0)] + dv1 * c.t.d2[d2_slot(0, 1)];
            s2[1] = dv0 * c.t.d2[d2_slot(0, 1)] + dv1 * c.t.d2[d2_slot(1, 1)];
            sd1 = dv0 * c.t.d1[0] + dv1 * c.t.d1[1];
        }
        const bool nonlin = op_nonlinear(c.op, c.param);

        // (a) Td entries incident to the node move onto its predecessors.
        detail::push_row(td, c);

        // (b) Connecting: curvature of the node couples the tangents into
        // Td through every Hessian entry incident to the node.  W is read
        // as it stands before its own update at this node.
        if (nonlin) {
            for (const SymSparseMat::Entry& e : w.row_internal(c.ii)) {
                if (e.weight == 0.0) continue;
                if (e.col == c.ii) {
                    // Diagonal W_ii: one term per unordered predecessor
                    // pair {j, k}, built from d1_j, d1_k and the second
                    // derivatives against the tangents.
                    detail::guarded_increment(
                        td, c, p0, p0,
                        e.weight * (2.0 * c.t.d1[0] * s2[0] + c.t.d2[d2_slot(0, 0)] * sd1));
                    if (c.arity == 2) {
                        detail::guarded_increment(
                            td, c, p0, p1,
                            e.weight
                                * (c.t.d1[0] * s2[1] + c.t.d1[1] * s2[0]
                                   + c.t.d2[d2_slot(0, 1)] * sd1));
                        detail::guarded_increment(
                            td, c, p1, p1,
                            e.weight * (2.0 * c.t.d1[1] * s2[1] + c.t.d2[d2_slot(1, 1)] * sd1));
                    }
                } else {
                    // Off-diagonal W_ik: the pair {j, k} picks up the
                    // tangent-weighted curvature of slot j, doubled into
                    // the diagonal when j and k coincide...
                    if (p0 == e.col)
                        detail::guarded_increment(td, c, e.col, e.col,
                                                  2.0 * e.weight * s2[0]);
                    else
                        detail::guarded_increment(td, c, p0, e.col, e.weight * s2[0]);
                    if (c.arity == 2) {
                        if (p1 == e.col)
                            detail::guarded_increment(td, c, e.col, e.col,
                                                      2.0 * e.weight * s2[1]);
                        else
                            detail::guarded_increment(td, c, p1, e.col, e.weight * s2[1]);
                    }
                    // ... and every predecessor pair picks up the node's
                    // curvature scaled by the tangent of slot k.
                    const double dvk = dv[static_cast<std::size_t>(e.col)];
                    if (c.arity == 1) {
                        if (op_d2_structural(c.op, 0, c.param))
                            detail::guarded_increment(td, c, p0, p0,
                                                      e.weight * dvk * c.t.d2[0]);
                    } else {
                        if (op_d2_structural(c.op, d2_slot(0, 0), c.param))
                            detail::guarded_increment(
                                td, c, p0, p0, e.weight * dvk * c.t.d2[d2_slot(0, 0)]);
                        if (op_d2_structural(c.op, d2_slot(0, 1), c.param))
                            detail::guarded_increment(
                                td, c, p0, p1, e.weight * dvk * c.t.d2[d2_slot(0, 1)]);
                        if (op_d2_structural(c.op, d2_slot(1, 1), c.param))
                            detail::guarded_increment(
                                td, c, p1, p1, e.weight * dvk * c.t.d2[d2_slot(1, 1)]);
                    }
                }
            }
        }

        // (c) Creating: the node's third derivative, contracted once with
        // the tangents, enters Td.
        if (c.arity == 1) {
            if (op_d3_structural(c.op, 0, c.param))
                detail::guarded_increment(td, c, p0, p0, bar_i * c.t.d3[0] * dv0);
        } else {
            for (int j = 0; j < 2; ++j) {
                for (int k = j; k < 2; ++k) {
                    if (!op_d3_structural(c.op, d3_slot(j, k, 0), c.param)
                        && !op_d3_structural(c.op, d3_slot(j, k, 1), c.param))
                        continue;
                    const double s3 = c.t.d3[d3_slot(j, k, 0)] * dv0
                                      + c.t.d3[d3_slot(j, k, 1)] * dv1;
                    detail::guarded_increment(td, c, c.pred[j], c.pred[k], bar_i * s3);
                }
            }
        }

        // (d) The Hessian takes its own pushing + creating step.
        detail::push_row(w, c);
        detail::create_second(w, c, bar_i);

        // (e) Adjoints.
        detail::adjoint_update(bar, c, bar_i);

        td.release_row_internal(c.ii);
        w.release_row_internal(c.ii);
        detail::check_row_dropped(td, c);
        detail::check_row_dropped(w, c);
    }
    if (opts.check_invariants) {
        td.validate_structure();
        w.validate_structure();
    }

    bar.resize(static_cast<std::size_t>(n));
    return TensorVecResult{std::move(td).restricted_to_independents(),
                           std::move(w).restricted_to_independents(),
                           std::move(bar)};
}

// ---------------------------------------------------------- DenseTensor3

DenseTensor3::DenseTensor3(std::int64_t n)
    : n_(n), packed_(static_cast<std::size_t>(packed_size(n)), 0.0) {
    if (n < 1) throw ParamError("tensor dimension must be positive");
}

double& DenseTensor3::at_sorted(std::int64_t i, std::int64_t j, std::int64_t k) {
    if (i < 0 || i > j || j > k || k >= n_)
        throw BoundsError("tensor indices not sorted or out of range");
    return packed_[static_cast<std::size_t>(k * (k + 1) * (k + 2) / 6
                                            + j * (j + 1) / 2 + i)];
}

double DenseTensor3::get(std::int64_t i, std::int64_t j, std::int64_t k) const {
    if (i > j) std::swap(i, j);
    if (j > k) std::swap(j, k);
    if (i > j) std::swap(i, j);
    if (i < 0 || k >= n_) throw BoundsError("tensor index out of range");
    return packed_[static_cast<std::size_t>(k * (k + 1) * (k + 2) / 6
                                            + j * (j + 1) / 2 + i)];
}

// ------------------------------------------------- reverse_tensor_dense

DenseTensor3 reverse_tensor_dense(const Tape& tape, const ValueTrace& trace,
                                  std::int64_t max_entries) {
    require_matching(tape, trace);
    const std::int64_t n = tape.n_independent();
    const std::int64_t m = tape.n_slots();
    if (static_cast<double>(m) * static_cast<double>(m) * static_cast<double>(m)
        > static_cast<double>(max_entries))
        throw ResourceError("dense third-order tensor needs " + std::to_string(m)
                            + "^3 entries, over the limit of "
                            + std::to_string(max_entries));

    const std::span<const double> v = trace.raw();
    // One storage slot per unordered index triple, laid out exactly like
    // DenseTensor3 over all m slots.  A single location per logical entry
    // makes the permutation symmetry of the result structural; the sweep
    // below only has to get each unordered entry right once.
    std::vector<double> T(static_cast<std::size_t>(DenseTensor3::packed_size(m)), 0.0);
    std::vector<double> W(static_cast<std::size_t>(m * m), 0.0);
    std::vector<double> bar(static_cast<std::size_t>(m), 0.0);
    bar.back() = 1.0;

    // Scratch: the triples incident to the current node, its Hessian row,
    // and its Hessian column pushed one step onto its predecessors.
    std::vector<double> S(static_cast<std::size_t>(m * (m + 1) / 2));
    std::vector<double> R(static_cast<std::size_t>(m));
    std::vector<double> Wp(static_cast<std::size_t>(m));

    auto tri = [](std::int64_t a, std::int64_t b) { return b * (b + 1) / 2 + a; };
    auto cadd = [&T, &tri](std::int64_t a, std::int64_t b, std::int64_t c, double s) {
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        T[static_cast<std::size_t>(c * (c + 1) * (c + 2) / 6 + tri(a, b))] += s;
    };

    detail::NodeCtx c;
    for (std::int64_t i = tape.n_nodes(); i >= 1; --i) {
        detail::load_ctx<3>(tape, v, i, false, c);
        const std::int64_t q = c.ii;
        const double bar_q = bar[static_cast<std::size_t>(q)];
        const int arity = c.arity;
        const std::int64_t p[2] = {c.pred[0], c.pred[1]};
        const double pw[2] = {c.t.d1[0], c.t.d1[1]};

        // --- tensor pushing -------------------------------------------
        // All live indices are <= q, so every triple incident to q sits in
        // the contiguous max-index-q slab: snapshot it, clear it, and
        // re-add each entry with every choice of its q indices replaced by
        // predecessors, weighted by the first derivatives.  Where a
        // replacement collides with a remaining index (or two replacements
        // target the same entry) the small integer factor keeps the
        // unordered entry equal to the ordered-tensor sum it stands for.
        const std::int64_t slab = q * (q + 1) * (q + 2) / 6;
        const std::int64_t slab_len = (q + 1) * (q + 2) / 2;
        std::memcpy(S.data(), T.data() + slab,
                    sizeof(double) * static_cast<std::size_t>(slab_len));
        std::memset(T.data() + slab, 0,
                    sizeof(double) * static_cast<std::size_t>(slab_len));
        for (int j = 0; j < arity; ++j) {
            const double wj = pw[j];
            const std::int64_t pj = p[j];
            // q appears once: t(a, b, q) feeds {p_j, a, b}.
            for (std::int64_t b = 0; b < q; ++b) {
                const double* sb = S.data() + static_cast<std::size_t>(tri(0, b));
                for (std::int64_t a = 0; a <= b; ++a) {
                    const double s = sb[a];
                    if (s == 0.0) continue;
                    const double f = a == b ? (pj == a ? 3.0 : 1.0)
                                            : (pj == a || pj == b ? 2.0 : 1.0);
                    cadd(pj, a, b, f * wj * s);
                }
            }
        }
        const double* sq = S.data() + static_cast<std::size_t>(tri(0, q));
        // q appears twice: t(a, q, q) feeds {p_j, p_k, a}.
        for (std::int64_t a = 0; a < q; ++a) {
            const double s = sq[a];
            if (s == 0.0) continue;
            for (int j = 0; j < arity; ++j) {
                const double f = a == p[j] ? 3.0 : 1.0;
                cadd(p[j], p[j], a, f * pw[j] * pw[j] * s);
            }
            if (arity == 2) {
                const double f = a == p[0] || a == p[1] ? 2.0 : 1.0;
                cadd(p[0], p[1], a, f * pw[0] * pw[1] * s);
            }
        }
        // q appears three times: t(q, q, q) feeds {p_j, p_k, p_l}.
        if (const double s = sq[q]; s != 0.0) {
            cadd(p[0], p[0], p[0], pw[0] * pw[0] * pw[0] * s);
            if (arity == 2) {
                cadd(p[0], p[0], p[1], pw[0] * pw[0] * pw[1] * s);
                cadd(p[0], p[1], p[1], pw[0] * pw[1] * pw[1] * s);
                cadd(p[1], p[1], p[1], pw[1] * pw[1] * pw[1] * s);
            }
        }

        // --- connecting ------------------------------------------------
        // The node's curvature couples each Hessian entry incident to q
        // into the tensor; the incident column is pushed one step so it
        // refers to predecessors rather than to q itself.
        if (op_nonlinear(c.op, c.param)) {
            for (std::int64_t x = 0; x < q; ++x)
                Wp[static_cast<std::size_t>(x)] = W[static_cast<std::size_t>(x * m + q)];
            for (int j = 0; j < arity; ++j)
                Wp[static_cast<std::size_t>(p[j])]
                    += W[static_cast<std::size_t>(q * m + q)] * pw[j];
            for (std::int64_t x = 0; x < q; ++x) {
                const double wx = Wp[static_cast<std::size_t>(x)];
                if (wx == 0.0) continue;
                for (int j = 0; j < arity; ++j) {
                    const double g = c.t.d2[d2_slot(j, j)];
                    if (g == 0.0) continue;
                    const double f = x == p[j] ? 3.0 : 1.0;
                    cadd(x, p[j], p[j], f * wx * g);
                }
                if (arity == 2) {
                    const double g = c.t.d2[d2_slot(0, 1)];
                    if (g == 0.0) continue;
                    const double f = x == p[0] || x == p[1] ? 2.0 : 1.0;
                    cadd(x, p[0], p[1], f * wx * g);
                }
            }
        }

        // --- creating --------------------------------------------------
        if (arity == 1) {
            if (const double g3 = c.t.d3[0]; g3 != 0.0)
                cadd(p[0], p[0], p[0], bar_q * g3);
        } else {
            for (int a = 0; a < 2; ++a)
                for (int b = a; b < 2; ++b)
                    for (int cc = b; cc < 2; ++cc) {
                        const double g3 = c.t.d3[d3_slot(a, b, cc)];
                        if (g3 != 0.0) cadd(p[a], p[b], p[cc], bar_q * g3);
                    }
        }

        // --- Hessian pushing + creating --------------------------------
        std::memcpy(R.data(), W.data() + static_cast<std::size_t>(q * m),
                    sizeof(double) * static_cast<std::size_t>(m));
        std::memset(W.data() + static_cast<std::size_t>(q * m), 0,
                    sizeof(double) * static_cast<std::size_t>(m));
        for (std::int64_t a = 0; a <= q; ++a) W[static_cast<std::size_t>(a * m + q)] = 0.0;
        for (int j = 0; j < arity; ++j) {
            const double wj = pw[j];
            const std::int64_t pj = p[j];
            for (std::int64_t b = 0; b < q; ++b) {
                const double s = wj * R[static_cast<std::size_t>(b)];
                W[static_cast<std::size_t>(pj * m + b)] += s;
                W[static_cast<std::size_t>(b * m + pj)] += s;
            }
            for (int k = 0; k < arity; ++k)
                W[static_cast<std::size_t>(pj * m + p[k])]
                    += wj * pw[k] * R[static_cast<std::size_t>(q)];
        }
        for (int a = 0; a < arity; ++a)
            for (int b = 0; b < arity; ++b) {
                const double g = c.t.d2[d2_slot(std::min(a, b), std::max(a, b))];
                if (g != 0.0)
                    W[static_cast<std::size_t>(p[a] * m + p[b])] += bar_q * g;
            }

        // --- adjoints ---------------------------------------------------
        for (int j = 0; j < arity; ++j)
            bar[static_cast<std::size_t>(p[j])] += bar_q * pw[j];
    }

    // The independents are the lowest slots, so their block is the leading
    // run of the packed storage, already in DenseTensor3 layout.
    DenseTensor3 out(n);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = i; j < n; ++j)
            for (std::int64_t k = j; k < n; ++k)
                out.at_sorted(i, j, k)
                    = T[static_cast<std::size_t>(k * (k + 1) * (k + 2) / 6 + tri(i, j))];
    return out;
}

DenseMat contract_tensor(const DenseTensor3& t, std::span<const double> d) {
    const std::int64_t n = t.dim();
    if (static_cast<std::int64_t>(d.size()) != n)
        throw ShapeError("direction has " + std::to_string(d.size())
                         + " entries, tensor has dimension " + std::to_string(n));
    DenseMat h(n, n);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j) {
            double sum = 0.0;
            for (std::int64_t k = 0; k < n; ++k) sum += t.get(i, j, k) * d[k];
            h(i, j) = sum;
        }
    return h;
}

} // namespace hotad
