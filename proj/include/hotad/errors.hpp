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
#include <stdexcept>
#include <string>

namespace hotad {

// Base class of every exception thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Structurally invalid tape: forward/self references, duplicate operands,
// unknown symbols, output not being the last node, and the like.
class MalformedTapeError : public Error {
public:
    using Error::Error;
};

// An elemental was applied to the wrong number of operands.
class ArityError : public Error {
public:
    using Error::Error;
};

// A forward evaluation left the domain of an elemental (log of a
// non-positive value, reciprocal of zero, ...).  Carries the index of
// the offending node (1-based, independents excluded).
class EvalError : public Error {
public:
    EvalError(const std::string& what, std::int64_t node_index)
        : Error(what), node_index_(node_index) {}
    std::int64_t node_index() const { return node_index_; }

private:
    std::int64_t node_index_;
};

// Dimension mismatch between arguments (point vs. tape, trace vs. tape,
// direction vs. tape, ...).
class ShapeError : public Error {
public:
    using Error::Error;
};

// Index outside the logical range of a container.
class BoundsError : public Error {
public:
    using Error::Error;
};

// A computation would exceed a configured size or memory budget.
class ResourceError : public Error {
public:
    using Error::Error;
};

// Problem generator errors.
class UnknownProblemError : public Error {
public:
    using Error::Error;
};

class ParamError : public Error {
public:
    using Error::Error;
};

// A finite-difference probe stepped outside the domain of the function.
class OracleDomainError : public Error {
public:
    using Error::Error;
};

// Raised by the optional self-check mode of the derivative sweeps when an
// internal structural invariant does not hold.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

} // namespace hotad
