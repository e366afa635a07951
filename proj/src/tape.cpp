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

#include <hotad/tape.hpp>

#include <charconv>
#include <cstdio>
#include <limits>
#include <sstream>

namespace hotad {

namespace {

constexpr std::int64_t kMaxSlots = std::numeric_limits<std::int32_t>::max();

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

} // namespace

// ---------------------------------------------------------------- Tape

std::string Tape::dump_text() const {
    std::string out;
    for (std::int64_t i = 1; i <= n_nodes(); ++i) {
        const Node& nd = node(i);
        out += std::to_string(i);
        out += ' ';
        out += op_symbol(nd.op);
        out += ' ';
        out += std::to_string(to_logical(nd.a));
        if (op_arity(nd.op) == 2) {
            out += ' ';
            out += std::to_string(to_logical(nd.b));
        }
        if (op_has_param(nd.op)) {
            out += ' ';
            if (nd.op == Op::PowInt)
                out += std::to_string(static_cast<long long>(param_of(nd)));
            else
                out += format_double(param_of(nd));
        }
        out += '\n';
    }
    return out;
}

bool Tape::same_program(const Tape& other) const {
    if (n_ != other.n_ || nodes_.size() != other.nodes_.size()) return false;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& x = nodes_[i];
        const Node& y = other.nodes_[i];
        if (x.op != y.op || x.a != y.a || x.b != y.b) return false;
        if (param_of(x) != other.param_of(y)) return false;
    }
    return true;
}

// ---------------------------------------------------------- ValueTrace

double ValueTrace::at(std::int64_t logical) const {
    const std::int64_t internal = logical + n_ - 1;
    if (internal < 0 || internal >= size())
        throw BoundsError("trace index " + std::to_string(logical) + " out of range");
    return v_[static_cast<std::size_t>(internal)];
}

// --------------------------------------------------------- TapeBuilder

TapeBuilder::TapeBuilder(std::int64_t n_independent) : n_(n_independent) {
    if (n_ < 1) throw ParamError("a tape needs at least one independent");
    if (n_ > kMaxSlots) throw ResourceError("too many independents");
}

VarRef TapeBuilder::input(std::int64_t i) const {
    if (i < 0 || i >= n_)
        throw BoundsError("input " + std::to_string(i) + " out of range");
    return VarRef{static_cast<std::int32_t>(i)};
}

VarRef TapeBuilder::check_ref(VarRef r) const {
    const std::int64_t limit = n_ + n_nodes();
    if (r.slot < 0 || r.slot >= limit)
        throw MalformedTapeError("operand refers to slot " + std::to_string(r.slot)
                                 + " which does not exist yet");
    return r;
}

VarRef TapeBuilder::append(Op op, std::span<const VarRef> preds, double param) {
    if (sealed_) throw MalformedTapeError("tape already sealed");
    const int arity = op_arity(op);
    if (static_cast<int>(preds.size()) != arity)
        throw ArityError(std::string(op_symbol(op)) + ": expected "
                         + std::to_string(arity) + " operand(s), got "
                         + std::to_string(preds.size()));
    for (VarRef r : preds) check_ref(r);
    if (arity == 2 && preds[0].slot == preds[1].slot)
        throw MalformedTapeError(std::string(op_symbol(op))
                                 + ": operands must be distinct slots");
    if (n_ + n_nodes() + 1 > kMaxSlots) throw ResourceError("tape too large");

    Node nd;
    nd.op = op;
    nd.a = preds[0].slot;
    nd.b = arity == 2 ? preds[1].slot : -1;
    if (op_has_param(op)) {
        nd.param_idx = static_cast<std::int32_t>(params_.size());
        params_.push_back(param);
    }
    nodes_.push_back(nd);
    return VarRef{static_cast<std::int32_t>(n_ + n_nodes() - 1)};
}

VarRef TapeBuilder::add(VarRef x, VarRef y) {
    // Repeated operands are folded into single-operand equivalents so that
    // the recorded program never contains duplicate predecessors.
    if (x.slot == y.slot) return scale(x, 2.0);
    const VarRef preds[] = {x, y};
    return append(Op::Add, preds);
}

VarRef TapeBuilder::sub(VarRef x, VarRef y) {
    if (x.slot == y.slot) return scale(x, 0.0);
    const VarRef preds[] = {x, y};
    return append(Op::Sub, preds);
}

VarRef TapeBuilder::mul(VarRef x, VarRef y) {
    if (x.slot == y.slot) return square(x);
    const VarRef preds[] = {x, y};
    return append(Op::Mul, preds);
}

VarRef TapeBuilder::unary(Op op, VarRef x, double param) {
    const VarRef preds[] = {x};
    return append(op, preds, param);
}

VarRef TapeBuilder::square(VarRef x) { return unary(Op::Square, x); }
VarRef TapeBuilder::neg(VarRef x) { return unary(Op::Neg, x); }
VarRef TapeBuilder::identity(VarRef x) { return unary(Op::Id, x); }
VarRef TapeBuilder::sin(VarRef x) { return unary(Op::Sin, x); }
VarRef TapeBuilder::cos(VarRef x) { return unary(Op::Cos, x); }
VarRef TapeBuilder::exp(VarRef x) { return unary(Op::Exp, x); }
VarRef TapeBuilder::log(VarRef x) { return unary(Op::Log, x); }
VarRef TapeBuilder::recip(VarRef x) { return unary(Op::Recip, x); }
VarRef TapeBuilder::sqrt(VarRef x) { return unary(Op::Sqrt, x); }
VarRef TapeBuilder::scale(VarRef x, double c) { return unary(Op::Scale, x, c); }
VarRef TapeBuilder::shift(VarRef x, double c) { return unary(Op::Shift, x, c); }
VarRef TapeBuilder::powi(VarRef x, long long k) {
    return unary(Op::PowInt, x, static_cast<double>(k));
}

Tape TapeBuilder::seal(VarRef output) {
    if (sealed_) throw MalformedTapeError("tape already sealed");
    if (nodes_.empty())
        throw MalformedTapeError("a tape must contain at least one node");
    const std::int64_t last = n_ + n_nodes() - 1;
    if (output.slot != last)
        throw MalformedTapeError("output must be the last recorded node");
    sealed_ = true;
    Tape t;
    t.n_ = n_;
    t.nodes_ = std::move(nodes_);
    t.params_ = std::move(params_);
    return t;
}

// -------------------------------------------------------- eval_forward

ValueTrace eval_forward(const Tape& tape, std::span<const double> x) {
    if (static_cast<std::int64_t>(x.size()) != tape.n_independent())
        throw ShapeError("point has " + std::to_string(x.size())
                         + " entries, tape expects "
                         + std::to_string(tape.n_independent()));
    std::vector<double> v(static_cast<std::size_t>(tape.n_slots()));
    std::copy(x.begin(), x.end(), v.begin());
    const std::int64_t n = tape.n_independent();
    std::int64_t i = 1;
    PartialTables t;
    for (const Node& nd : tape.nodes()) {
        const double a = v[static_cast<std::size_t>(nd.a)];
        const double b = nd.b >= 0 ? v[static_cast<std::size_t>(nd.b)] : 0.0;
        const double param = tape.param_of(nd);
        if (!op_in_domain(nd.op, a, param))
            throw EvalError("node " + std::to_string(i) + ": "
                            + std::string(op_symbol(nd.op)) + "("
                            + std::to_string(a) + ") outside domain", i);
        local_partials<0>(nd.op, a, b, param, t);
        v[static_cast<std::size_t>(n - 1 + i)] = t.value;
        ++i;
    }
    return ValueTrace(n, std::move(v));
}

// ---------------------------------------------------------- parse_text

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
        if (pos > start) out.push_back(line.substr(start, pos - start));
    }
    return out;
}

std::int64_t parse_int(std::string_view tok, const char* what) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw MalformedTapeError(std::string("cannot parse ") + what + " '"
                                 + std::string(tok) + "'");
    return value;
}

double parse_num(std::string_view tok, const char* what) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw MalformedTapeError(std::string("cannot parse ") + what + " '"
                                 + std::string(tok) + "'");
    return value;
}

} // namespace

Tape parse_text(std::string_view text, std::int64_t n_independent) {
    TapeBuilder b(n_independent);
    VarRef last{};
    std::int64_t expect = 1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        const auto toks = split_ws(line);
        if (toks.empty()) continue;

        if (parse_int(toks[0], "node index") != expect)
            throw MalformedTapeError("line for node " + std::to_string(expect)
                                     + " starts with '" + std::string(toks[0]) + "'");
        if (toks.size() < 2) throw MalformedTapeError("missing elemental symbol");
        Op op;
        if (!op_from_symbol(toks[1], op))
            throw MalformedTapeError("unknown elemental '" + std::string(toks[1]) + "'");

        const int arity = op_arity(op);
        const std::size_t want = 2 + static_cast<std::size_t>(arity)
                                 + (op_has_param(op) ? 1 : 0);
        if (toks.size() != want) {
            if (toks.size() < 2 + static_cast<std::size_t>(arity)
                || (!op_has_param(op) && toks.size() > 2 + static_cast<std::size_t>(arity)))
                throw ArityError("node " + std::to_string(expect) + ": "
                                 + std::string(toks[1]) + " takes "
                                 + std::to_string(arity) + " operand(s)");
            throw MalformedTapeError("node " + std::to_string(expect)
                                     + ": malformed parameter list");
        }

        VarRef preds[2];
        for (int j = 0; j < arity; ++j) {
            const std::int64_t logical = parse_int(toks[2 + static_cast<std::size_t>(j)],
                                                   "operand index");
            const std::int64_t slot = logical + n_independent - 1;
            if (slot < 0 || slot >= n_independent + b.n_nodes())
                throw MalformedTapeError("node " + std::to_string(expect)
                                         + " refers to " + std::to_string(logical)
                                         + " which is not defined at that point");
            preds[j] = VarRef{static_cast<std::int32_t>(slot)};
        }
        double param = 0.0;
        if (op_has_param(op)) param = parse_num(toks[2 + static_cast<std::size_t>(arity)],
                                                "parameter");
        last = b.append(op, std::span<const VarRef>(preds, static_cast<std::size_t>(arity)),
                        param);
        ++expect;
    }
    return b.seal(last);
}

} // namespace hotad
