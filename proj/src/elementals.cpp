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

#include <hotad/elementals.hpp>

#include <string>

namespace hotad {

int op_arity(Op op) {
    switch (op) {
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
        return 2;
    default:
        return 1;
    }
}

bool op_has_param(Op op) {
    return op == Op::Scale || op == Op::Shift || op == Op::PowInt;
}

std::string_view op_symbol(Op op) {
    switch (op) {
    case Op::Id: return "id";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Square: return "square";
    case Op::Neg: return "neg";
    case Op::Scale: return "scale";
    case Op::Shift: return "shift";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Recip: return "recip";
    case Op::PowInt: return "powi";
    case Op::Sqrt: return "sqrt";
    }
    return "?";
}

bool op_from_symbol(std::string_view symbol, Op& out) {
    for (int i = 0; i < kOpCount; ++i) {
        const Op op = static_cast<Op>(i);
        if (op_symbol(op) == symbol) {
            out = op;
            return true;
        }
    }
    return false;
}

bool op_in_domain(Op op, double a, double param) {
    switch (op) {
    case Op::Log:
    case Op::Sqrt:
        // sqrt(0) has a value but no finite slope, so it is excluded too.
        return a > 0.0;
    case Op::Recip:
        return a != 0.0;
    case Op::PowInt:
        return a != 0.0 || static_cast<long long>(param) >= 0;
    default:
        return true;
    }
}

bool op_d2_structural(Op op, int slot, double param) {
    switch (op) {
    case Op::Mul:
        return slot == d2_slot(0, 1);
    case Op::Square:
        return slot == 0;
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log:
    case Op::Recip:
    case Op::Sqrt:
        return slot == 0;
    case Op::PowInt: {
        const long long k = static_cast<long long>(param);
        return slot == 0 && k != 0 && k != 1;
    }
    default:
        return false;
    }
}

bool op_d3_structural(Op op, int slot, double param) {
    switch (op) {
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log:
    case Op::Recip:
    case Op::Sqrt:
        return slot == 0;
    case Op::PowInt: {
        const long long k = static_cast<long long>(param);
        return slot == 0 && k != 0 && k != 1 && k != 2;
    }
    default:
        return false;
    }
}

bool op_nonlinear(Op op, double param) {
    const int arity = op_arity(op);
    for (int j = 0; j < arity; ++j)
        for (int k = j; k < arity; ++k)
            if (op_d2_structural(op, d2_slot(j, k), param)) return true;
    return false;
}

double ipow(double u, long long k) {
    if (k < 0) return 1.0 / ipow(u, -k);
    double result = 1.0;
    double base = u;
    while (k > 0) {
        if (k & 1) result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

namespace {

PartialTables checked_partials(Op op, std::span<const double> args, double param) {
    if (static_cast<int>(args.size()) != op_arity(op))
        throw ArityError(std::string(op_symbol(op)) + ": expected "
                         + std::to_string(op_arity(op)) + " operand(s), got "
                         + std::to_string(args.size()));
    const double a = args[0];
    const double b = args.size() > 1 ? args[1] : 0.0;
    if (!op_in_domain(op, a, param))
        throw EvalError(std::string(op_symbol(op)) + ": operand "
                        + std::to_string(a) + " outside domain", 0);
    PartialTables t;
    local_partials<3>(op, a, b, param, t);
    return t;
}

} // namespace

double Elemental::value(std::span<const double> args, double param) const {
    return checked_partials(id, args, param).value;
}

double Elemental::d1(int j, std::span<const double> args, double param) const {
    if (j < 0 || j >= arity) throw BoundsError("d1: operand slot out of range");
    return checked_partials(id, args, param).d1[j];
}

double Elemental::d2(int j, int k, std::span<const double> args, double param) const {
    if (j < 0 || j >= arity || k < 0 || k >= arity)
        throw BoundsError("d2: operand slot out of range");
    return checked_partials(id, args, param).d2[d2_slot(std::min(j, k), std::max(j, k))];
}

double Elemental::d3(int j, int k, int p, std::span<const double> args, double param) const {
    if (j < 0 || j >= arity || k < 0 || k >= arity || p < 0 || p >= arity)
        throw BoundsError("d3: operand slot out of range");
    return checked_partials(id, args, param).d3[d3_slot(j, k, p)];
}

const std::vector<Elemental>& catalog() {
    static const std::vector<Elemental> table = [] {
        std::vector<Elemental> v;
        for (int i = 0; i < kOpCount; ++i) {
            const Op op = static_cast<Op>(i);
            v.push_back({op, op_symbol(op), op_arity(op), op_has_param(op)});
        }
        return v;
    }();
    return table;
}

const Elemental& elemental(Op op) {
    return catalog()[static_cast<int>(op)];
}

PartialTables partials_at(Op op, std::span<const double> args, double param) {
    return checked_partials(op, args, param);
}

} // namespace hotad
