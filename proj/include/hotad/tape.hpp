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
#include <string_view>
#include <vector>

#include <hotad/elementals.hpp>
#include <hotad/errors.hpp>

namespace hotad {

// Index conventions.  A function of n variables evaluated through l
// elemental applications is stored as n + l slots.  Slot s in [0, n)
// holds independent x_{s+1}; slot n - 1 + i holds node i for i in
// [1, l].  Externally nodes are addressed by that 1-based node index and
// independents by indices 1-n .. 0, so that node i has internal slot
// i + n - 1.  We call the external numbering "logical" and the slot
// numbering "internal" throughout.

// One recorded elemental application.  `a` and `b` are internal
// predecessor slots (b unused for unary ops); `param_idx` points into the
// tape's parameter pool, -1 when the elemental takes no parameter.
struct Node {
    std::int32_t a = -1;
    std::int32_t b = -1;
    std::int32_t param_idx = -1;
    Op op = Op::Id;
};

class Tape {
public:
    std::int64_t n_independent() const { return n_; }
    std::int64_t n_nodes() const { return static_cast<std::int64_t>(nodes_.size()); }
    // The function value is by construction the value of the last node.
    std::int64_t output_index() const { return n_nodes(); }
    std::int64_t n_slots() const { return n_ + n_nodes(); }

    // Logical node index i in [1, n_nodes()].
    const Node& node(std::int64_t i) const { return nodes_[static_cast<std::size_t>(i - 1)]; }
    std::span<const Node> nodes() const { return nodes_; }
    double param_of(const Node& nd) const {
        return nd.param_idx < 0 ? 0.0 : params_[static_cast<std::size_t>(nd.param_idx)];
    }

    std::int64_t to_internal(std::int64_t logical) const { return logical + n_ - 1; }
    std::int64_t to_logical(std::int64_t internal) const { return internal - n_ + 1; }

    // One line per node: "i <symbol> <predecessors...> [<parameter>]",
    // predecessors in logical numbering.
    std::string dump_text() const;

    // Node-for-node structural equality (same n, ops, operands, params).
    bool same_program(const Tape& other) const;

private:
    friend class TapeBuilder;
    friend Tape parse_text(std::string_view text, std::int64_t n_independent);

    Tape() = default;

    std::int64_t n_ = 0;
    std::vector<Node> nodes_;
    std::vector<double> params_;
};

// Values of every slot after a forward evaluation.
class ValueTrace {
public:
    ValueTrace(std::int64_t n_independent, std::vector<double> values)
        : n_(n_independent), v_(std::move(values)) {}

    double output() const { return v_.back(); }
    std::int64_t n_independent() const { return n_; }
    std::int64_t size() const { return static_cast<std::int64_t>(v_.size()); }
    // Logical index: 1-n .. 0 for independents, 1 .. l for nodes.
    double at(std::int64_t logical) const;
    std::span<const double> raw() const { return v_; }

private:
    std::int64_t n_;
    std::vector<double> v_;
};

// Opaque handle to a slot of the tape under construction.  Only
// TapeBuilder mints these, which keeps user code from fabricating
// references to slots that do not exist yet.
struct VarRef {
    std::int32_t slot = -1;
};

class TapeBuilder {
public:
    explicit TapeBuilder(std::int64_t n_independent);

    std::int64_t n_independent() const { return n_; }
    std::int64_t n_nodes() const { return static_cast<std::int64_t>(nodes_.size()); }

    // Independent x_{i+1}, i in [0, n).
    VarRef input(std::int64_t i) const;

    // Validating low-level append; predecessors are prior VarRefs.
    // Duplicate operands are rejected here -- use the convenience
    // wrappers below, which rewrite them into equivalent single-operand
    // forms instead.
    VarRef append(Op op, std::span<const VarRef> preds, double param = 0.0);

    VarRef add(VarRef x, VarRef y);
    VarRef sub(VarRef x, VarRef y);
    VarRef mul(VarRef x, VarRef y);
    VarRef square(VarRef x);
    VarRef neg(VarRef x);
    VarRef identity(VarRef x);
    VarRef sin(VarRef x);
    VarRef cos(VarRef x);
    VarRef exp(VarRef x);
    VarRef log(VarRef x);
    VarRef recip(VarRef x);
    VarRef sqrt(VarRef x);
    VarRef scale(VarRef x, double c);
    VarRef shift(VarRef x, double c);
    VarRef powi(VarRef x, long long k);

    // Finishes the tape.  `output` must be the most recently appended
    // node; anything else would leave dead nodes after the output, which
    // the sweeps do not support.
    Tape seal(VarRef output);

private:
    VarRef check_ref(VarRef r) const;
    VarRef unary(Op op, VarRef x, double param = 0.0);

    std::int64_t n_;
    std::vector<Node> nodes_;
    std::vector<double> params_;
    bool sealed_ = false;
};

// Evaluates the tape at x (size n).  Throws EvalError with the node index
// on a domain violation, ShapeError on a size mismatch.
ValueTrace eval_forward(const Tape& tape, std::span<const double> x);

// Parses the dump_text format back into a tape.  The number of
// independents cannot be recovered from the node lines alone (an
// independent may be unused), so it is passed explicitly;
// parse_text(t.dump_text(), t.n_independent()) reproduces t.
Tape parse_text(std::string_view text, std::int64_t n_independent);

} // namespace hotad
