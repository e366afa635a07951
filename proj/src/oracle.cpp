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

#include <hotad/oracle.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include <hotad/first_order.hpp>
#include <hotad/second_order.hpp>

namespace hotad {

namespace {

double inf_norm(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double probe_value(const Tape& tape, std::span<const double> x) {
    try {
        return eval_forward(tape, x).output();
    } catch (const EvalError& e) {
        throw OracleDomainError(std::string("probe point left the domain: ")
                                + e.what());
    }
}

std::vector<double> probe_gradient(const Tape& tape, std::span<const double> x) {
    try {
        const ValueTrace trace = eval_forward(tape, x);
        return reverse_gradient(tape, trace);
    } catch (const EvalError& e) {
        throw OracleDomainError(std::string("probe point left the domain: ")
                                + e.what());
    }
}

} // namespace

double FDConfig::step_first(std::span<const double> x) {
    return std::sqrt(std::numeric_limits<double>::epsilon()) * (1.0 + inf_norm(x));
}

double FDConfig::step_third(std::span<const double> x) {
    return std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + inf_norm(x));
}

std::vector<double> fd_gradient(const Tape& tape, std::span<const double> x) {
    if (static_cast<std::int64_t>(x.size()) != tape.n_independent())
        throw ShapeError("point size does not match tape");
    const double h = FDConfig::step_first(x);
    std::vector<double> probe(x.begin(), x.end());
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        const double fp = probe_value(tape, probe);
        probe[i] = x[i] - h;
        const double fm = probe_value(tape, probe);
        probe[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

DenseMat fd_hessian(const Tape& tape, std::span<const double> x) {
    if (static_cast<std::int64_t>(x.size()) != tape.n_independent())
        throw ShapeError("point size does not match tape");
    const double h = FDConfig::step_first(x);
    const std::int64_t n = static_cast<std::int64_t>(x.size());
    std::vector<double> probe(x.begin(), x.end());
    DenseMat out(n, n);
    for (std::int64_t j = 0; j < n; ++j) {
        probe[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + h;
        const std::vector<double> gp = probe_gradient(tape, probe);
        probe[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] - h;
        const std::vector<double> gm = probe_gradient(tape, probe);
        probe[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)];
        for (std::int64_t i = 0; i < n; ++i)
            out(i, j) = (gp[static_cast<std::size_t>(i)] - gm[static_cast<std::size_t>(i)])
                        / (2.0 * h);
    }
    return out;
}

DenseMat fd_tensor_vec(const Tape& tape, std::span<const double> x,
                       std::span<const double> d) {
    if (static_cast<std::int64_t>(x.size()) != tape.n_independent()
        || x.size() != d.size())
        throw ShapeError("point/direction size does not match tape");
    const double h = FDConfig::step_third(x);
    const std::int64_t n = static_cast<std::int64_t>(x.size());
    std::vector<double> probe(x.size());

    auto hessian_at = [&](double sign) {
        for (std::size_t i = 0; i < x.size(); ++i) probe[i] = x[i] + sign * h * d[i];
        try {
            const ValueTrace trace = eval_forward(tape, probe);
            return edge_pushing(tape, trace);
        } catch (const EvalError& e) {
            throw OracleDomainError(std::string("probe point left the domain: ")
                                    + e.what());
        }
    };
    const HessianResult hp = hessian_at(1.0);
    const HessianResult hm = hessian_at(-1.0);

    const DenseMat wp = sparse_to_dense(hp.w);
    const DenseMat wm = sparse_to_dense(hm.w);
    DenseMat out(n, n);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j)
            out(i, j) = (wp(i, j) - wm(i, j)) / (2.0 * h);
    return out;
}

double rel_diff(double a, double b) {
    return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

double max_rel_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ShapeError("vector sizes differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, rel_diff(a[i], b[i]));
    return m;
}

double max_rel_diff(const DenseMat& a, const DenseMat& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw ShapeError("matrix shapes differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.a.size(); ++i) m = std::max(m, rel_diff(a.a[i], b.a[i]));
    return m;
}

DenseMat sparse_to_dense(const SymSparseMat& m) {
    DenseMat out(m.dim(), m.dim());
    for (std::int64_t i = m.lo(); i <= m.hi(); ++i) {
        for (const auto& [k, weight] : m.row_entries(i)) {
            out(i - m.lo(), k - m.lo()) = weight;
            out(k - m.lo(), i - m.lo()) = weight;
        }
    }
    return out;
}

std::vector<double> sym_apply(const SymSparseMat& m, std::span<const double> d) {
    if (static_cast<std::int64_t>(d.size()) != m.dim())
        throw ShapeError("direction size does not match matrix");
    if (m.lo() != 1) throw ParamError("expected a matrix over logical 1..n");
    std::vector<double> y(d.size(), 0.0);
    for (std::int64_t i = 1; i <= m.hi(); ++i) {
        for (const auto& [k, weight] : m.row_entries(i)) {
            y[static_cast<std::size_t>(i - 1)] += weight * d[static_cast<std::size_t>(k - 1)];
            if (k != i)
                y[static_cast<std::size_t>(k - 1)] += weight * d[static_cast<std::size_t>(i - 1)];
        }
    }
    return y;
}

} // namespace hotad
