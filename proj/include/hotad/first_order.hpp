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
#include <vector>

#include <hotad/tape.hpp>

namespace hotad {

// Adjoints of every slot after a reverse sweep: bar_v[i] = seed * df/dv_i
// with the convention that the adjoint of the output node is the seed.
class AdjointVector {
public:
    AdjointVector(std::int64_t n_independent, std::vector<double> values)
        : n_(n_independent), v_(std::move(values)) {}

    std::int64_t n_independent() const { return n_; }
    std::int64_t size() const { return static_cast<std::int64_t>(v_.size()); }
    double at(std::int64_t logical) const;
    std::span<const double> raw() const { return v_; }
    // The adjoints of the independents, i.e. seed * gradient.
    std::vector<double> gradient() const;

private:
    std::int64_t n_;
    std::vector<double> v_;
};

// Tangents of every slot for a direction d: dot_v[i] = d(v_i)/dt along
// x + t d.  The tangent of the output is the directional derivative
// grad f . d.
class TangentVector {
public:
    TangentVector(std::int64_t n_independent, std::vector<double> values)
        : n_(n_independent), v_(std::move(values)) {}

    std::int64_t n_independent() const { return n_; }
    std::int64_t size() const { return static_cast<std::int64_t>(v_.size()); }
    double at(std::int64_t logical) const;
    double output() const { return v_.back(); }
    std::span<const double> raw() const { return v_; }

private:
    std::int64_t n_;
    std::vector<double> v_;
};

// Reverse sweep over a forward trace.  Every node distributes its adjoint
// to its predecessors, weighted by the local first derivatives; adjoints
// of the independents come out equal to seed * gradient.
AdjointVector reverse_sweep(const Tape& tape, const ValueTrace& trace,
                            double seed = 1.0);
std::vector<double> reverse_gradient(const Tape& tape, const ValueTrace& trace,
                                     double seed = 1.0);

// Forward tangent propagation of a direction d (size n), keeping the
// tangent of every slot.  Needed by the higher-order sweeps.
TangentVector forward_tangent(const Tape& tape, const ValueTrace& trace,
                              std::span<const double> d);

} // namespace hotad
