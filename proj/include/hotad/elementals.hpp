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

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <hotad/errors.hpp>

namespace hotad {

// The elemental operations a tape may contain.  All are unary except
// add/sub/mul; scale, shift and powi carry one numeric parameter.
enum class Op : std::uint8_t {
    Id,
    Add,
    Sub,
    Mul,
    Square,
    Neg,
    Scale,  // c*u
    Shift,  // u + c
    Sin,
    Cos,
    Exp,
    Log,
    Recip,
    PowInt, // u^k, k integer
    Sqrt,
};

inline constexpr int kOpCount = 15;

// Value and local partial derivatives of one elemental at one point.
// Mixed partials are stored triangularly: with operand slots j <= k
// (<= p), the slot sum indexes the array.  For a unary elemental only
// index 0 of each array is meaningful.
struct PartialTables {
    double value = 0.0;
    std::array<double, 2> d1{}; // d/dv_j
    std::array<double, 3> d2{}; // (0,0) (0,1) (1,1)
    std::array<double, 4> d3{}; // (0,0,0) (0,0,1) (0,1,1) (1,1,1)
};

constexpr int d2_slot(int j, int k) { return j + k; }
constexpr int d3_slot(int j, int k, int p) { return j + k + p; }

int op_arity(Op op);
bool op_has_param(Op op);
std::string_view op_symbol(Op op);
// Returns false if the symbol names no elemental.
bool op_from_symbol(std::string_view symbol, Op& out);
// True when (a, b) lies in the domain of the elemental and all partials
// up to third order are finite there.
bool op_in_domain(Op op, double a, double param);

// Symbolic sparsity of the derivative tables: true when the given slot is
// not identically zero as a function of the operands.  The sweeps use
// these masks to decide which matrix entries an elemental can ever touch,
// independent of the (possibly zero) value at the current point.
bool op_d2_structural(Op op, int slot, double param);
bool op_d3_structural(Op op, int slot, double param);
// Any structural second derivative at all, i.e. the elemental is not an
// affine function of its operands.
bool op_nonlinear(Op op, double param);

// Integer power with a non-negative or negative exponent.
double ipow(double u, long long k);

// Evaluates value and partials up to `Order` (0..3) assuming the point is
// in the domain.  This is the hot kernel of every sweep, hence inline.
template <int Order>
inline void local_partials(Op op, double a, double b, double param, PartialTables& t) {
    static_assert(Order >= 0 && Order <= 3);
    t.d1 = {};
    if constexpr (Order >= 2) t.d2 = {};
    if constexpr (Order >= 3) t.d3 = {};
    switch (op) {
    case Op::Id:
        t.value = a;
        t.d1[0] = 1.0;
        break;
    case Op::Add:
        t.value = a + b;
        t.d1[0] = 1.0;
        t.d1[1] = 1.0;
        break;
    case Op::Sub:
        t.value = a - b;
        t.d1[0] = 1.0;
        t.d1[1] = -1.0;
        break;
    case Op::Mul:
        t.value = a * b;
        t.d1[0] = b;
        t.d1[1] = a;
        if constexpr (Order >= 2) t.d2[d2_slot(0, 1)] = 1.0;
        break;
    case Op::Square:
        t.value = a * a;
        t.d1[0] = 2.0 * a;
        if constexpr (Order >= 2) t.d2[0] = 2.0;
        break;
    case Op::Neg:
        t.value = -a;
        t.d1[0] = -1.0;
        break;
    case Op::Scale:
        t.value = param * a;
        t.d1[0] = param;
        break;
    case Op::Shift:
        t.value = a + param;
        t.d1[0] = 1.0;
        break;
    case Op::Sin:
        t.value = std::sin(a);
        t.d1[0] = std::cos(a);
        if constexpr (Order >= 2) t.d2[0] = -t.value;
        if constexpr (Order >= 3) t.d3[0] = -t.d1[0];
        break;
    case Op::Cos:
        t.value = std::cos(a);
        t.d1[0] = -std::sin(a);
        if constexpr (Order >= 2) t.d2[0] = -t.value;
        if constexpr (Order >= 3) t.d3[0] = -t.d1[0];
        break;
    case Op::Exp:
        t.value = std::exp(a);
        t.d1[0] = t.value;
        if constexpr (Order >= 2) t.d2[0] = t.value;
        if constexpr (Order >= 3) t.d3[0] = t.value;
        break;
    case Op::Log: {
        t.value = std::log(a);
        const double r = 1.0 / a;
        t.d1[0] = r;
        if constexpr (Order >= 2) t.d2[0] = -r * r;
        if constexpr (Order >= 3) t.d3[0] = 2.0 * r * r * r;
        break;
    }
    case Op::Recip: {
        const double r = 1.0 / a;
        t.value = r;
        t.d1[0] = -r * r;
        if constexpr (Order >= 2) t.d2[0] = 2.0 * r * r * r;
        if constexpr (Order >= 3) t.d3[0] = -6.0 * r * r * r * r;
        break;
    }
    case Op::PowInt: {
        const long long k = static_cast<long long>(param);
        t.value = ipow(a, k);
        t.d1[0] = (k == 0) ? 0.0 : static_cast<double>(k) * ipow(a, k - 1);
        if constexpr (Order >= 2)
            t.d2[0] = (k == 0 || k == 1)
                          ? 0.0
                          : static_cast<double>(k * (k - 1)) * ipow(a, k - 2);
        if constexpr (Order >= 3)
            t.d3[0] = (k == 0 || k == 1 || k == 2)
                          ? 0.0
                          : static_cast<double>(k * (k - 1) * (k - 2)) * ipow(a, k - 3);
        break;
    }
    case Op::Sqrt: {
        const double s = std::sqrt(a);
        t.value = s;
        t.d1[0] = 0.5 / s;
        if constexpr (Order >= 2) t.d2[0] = -0.25 / (s * a);
        if constexpr (Order >= 3) t.d3[0] = 0.375 / (s * a * a);
        break;
    }
    }
}

// Catalog record: one per elemental, with checked accessors used by tests
// and by code that works on elementals generically.
struct Elemental {
    Op id;
    std::string_view symbol;
    int arity;
    bool has_param;

    double value(std::span<const double> args, double param = 0.0) const;
    double d1(int j, std::span<const double> args, double param = 0.0) const;
    double d2(int j, int k, std::span<const double> args, double param = 0.0) const;
    double d3(int j, int k, int p, std::span<const double> args, double param = 0.0) const;
};

const std::vector<Elemental>& catalog();
const Elemental& elemental(Op op);

// All tables at once, with a domain check (throws EvalError, node index 0).
PartialTables partials_at(Op op, std::span<const double> args, double param = 0.0);

} // namespace hotad
