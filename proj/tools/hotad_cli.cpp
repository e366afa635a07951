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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <hotad/first_order.hpp>
#include <hotad/oracle.hpp>
#include <hotad/problems.hpp>
#include <hotad/second_order.hpp>
#include <hotad/third_order.hpp>

namespace {

constexpr std::int64_t kDefaultDenseCap = 10'000'000;

std::int64_t dense_cap_from_env() {
    const char* env = std::getenv("HOTAD_DENSE_CAP");
    if (!env || !*env) return kDefaultDenseCap;
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end == env || *end != '\0' || v <= 0) return kDefaultDenseCap;
    return v;
}

std::int64_t count_nonzero(const std::vector<double>& v) {
    std::int64_t c = 0;
    for (double x : v)
        if (x != 0.0) ++c;
    return c;
}

// Nonzero positions of the full symmetric n^3 tensor: each stored sorted
// triple stands for all its distinct permutations.
std::int64_t tensor_nnz(const hotad::DenseTensor3& t) {
    std::int64_t c = 0;
    for (std::int64_t i = 0; i < t.dim(); ++i)
        for (std::int64_t j = i; j < t.dim(); ++j)
            for (std::int64_t k = j; k < t.dim(); ++k) {
                if (t.get(i, j, k) == 0.0) continue;
                if (i == j && j == k) c += 1;
                else if (i == j || j == k) c += 3;
                else c += 6;
            }
    return c;
}

struct BenchArgs {
    std::string problem;
    std::int64_t n = 0;
    std::int64_t band = 20;
    std::string derivative;
    int repeat = 3;
    std::string csv_path;
    std::string point = "paper";
};

int run_bench(const BenchArgs& args) {
    hotad::ProblemSpec spec{args.problem, args.n, args.band};
    const hotad::Tape tape = hotad::make_problem(spec);
    const std::vector<double> x = args.point == "scaled"
                                      ? hotad::scaled_point(args.n)
                                      : hotad::paper_point(args.n);
    const std::vector<double> d = hotad::unit_direction(args.n);

    std::vector<double> times_ms;
    std::int64_t nnz = 0;
    for (int r = 0; r < args.repeat; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        const hotad::ValueTrace trace = hotad::eval_forward(tape, x);
        if (args.derivative == "grad") {
            nnz = count_nonzero(hotad::reverse_gradient(tape, trace));
        } else if (args.derivative == "hess") {
            nnz = hotad::edge_pushing(tape, trace).w.nnz();
        } else if (args.derivative == "hessvec") {
            nnz = count_nonzero(hotad::hessian_vector(tape, trace, d));
        } else if (args.derivative == "tensorvec") {
            nnz = hotad::rev_hedir(tape, trace, d).td.nnz();
        } else {
            nnz = tensor_nnz(hotad::reverse_tensor_dense(tape, trace,
                                                         dense_cap_from_env()));
        }
        const auto t1 = std::chrono::steady_clock::now();
        times_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }

    std::sort(times_ms.begin(), times_ms.end());
    const std::size_t mid = times_ms.size() / 2;
    const double median = times_ms.size() % 2 == 1
                              ? times_ms[mid]
                              : 0.5 * (times_ms[mid - 1] + times_ms[mid]);

    char row[256];
    std::snprintf(row, sizeof(row), "%s,%lld,%s,%lld,%.6f,%.3f,%d\n",
                  args.problem.c_str(), static_cast<long long>(args.n),
                  args.derivative.c_str(), static_cast<long long>(nnz),
                  static_cast<double>(nnz) / static_cast<double>(args.n), median,
                  args.repeat);
    const std::string body = std::string("problem,n,derivative,nnz,nnz_per_n,time_ms,repeats\n") + row;
    if (args.csv_path.empty()) {
        std::cout << body;
    } else {
        std::ofstream out(args.csv_path);
        if (!out) throw hotad::Error("cannot open '" + args.csv_path + "' for writing");
        out << body;
    }
    return 0;
}

struct CheckArgs {
    std::string problem;
    std::int64_t n = 0;
    std::int64_t band = 20;
    std::uint64_t seed = 0;
    double tol = 1e-5;
};

struct CheckReport {
    bool ok = true;

    void line(const std::string& name, double err, double bound) {
        const bool pass = err <= bound;
        ok = ok && pass;
        std::printf("check %-38s max rel err %9.2e  %s\n", name.c_str(), err,
                    pass ? "PASS" : "FAIL");
    }
    void skipped(const std::string& name, const std::string& why) {
        std::printf("check %-38s skipped (%s)\n", name.c_str(), why.c_str());
    }
};

void check_at_point(const hotad::Tape& tape, std::span<const double> x,
                    std::span<const double> d, double tol, CheckReport& rep) {
    constexpr double kExact = 1e-12;
    const hotad::ValueTrace trace = hotad::eval_forward(tape, x);

    const std::vector<double> grad = hotad::reverse_gradient(tape, trace);
    rep.line("gradient vs finite difference",
             hotad::max_rel_diff(grad, hotad::fd_gradient(tape, x)), tol);

    const hotad::HessianResult hess = hotad::edge_pushing(tape, trace);
    rep.line("hessian vs finite difference",
             hotad::max_rel_diff(hotad::sparse_to_dense(hess.w),
                                 hotad::fd_hessian(tape, x)),
             tol);

    const hotad::TensorVecResult tv = hotad::rev_hedir(tape, trace, d);
    rep.line("third order vs finite difference",
             hotad::max_rel_diff(hotad::sparse_to_dense(tv.td),
                                 hotad::fd_tensor_vec(tape, x, d)),
             tol);

    rep.line("hessian agreement between sweeps",
             hotad::max_rel_diff(hotad::sparse_to_dense(tv.w),
                                 hotad::sparse_to_dense(hess.w)),
             kExact);

    rep.line("hessian-vector vs assembled hessian",
             hotad::max_rel_diff(hotad::hessian_vector(tape, trace, d),
                                 hotad::sym_apply(hess.w, d)),
             kExact);

    const std::int64_t m = tape.n_slots();
    const std::int64_t cap = dense_cap_from_env();
    if (static_cast<double>(m) * m * m <= static_cast<double>(cap)) {
        const hotad::DenseTensor3 tensor = hotad::reverse_tensor_dense(tape, trace, cap);
        rep.line("directional third vs dense tensor",
                 hotad::max_rel_diff(hotad::sparse_to_dense(tv.td),
                                     hotad::contract_tensor(tensor, d)),
                 kExact);
    } else {
        rep.skipped("directional third vs dense tensor",
                    "tape too large, raise HOTAD_DENSE_CAP");
    }
}

// The three-variable model function has hand-computed derivatives at
// (1, 2, pi/2); verify them verbatim.
void check_toy_exact(const hotad::Tape& tape, CheckReport& rep) {
    constexpr double kExact = 1e-12;
    const std::vector<double> x = {1.0, 2.0, std::numbers::pi / 2};
    const std::vector<double> d = {1.0, 1.0, 1.0};
    const hotad::ValueTrace trace = hotad::eval_forward(tape, x);

    double err = hotad::rel_diff(trace.output(), 2.0);
    const std::vector<double> grad = hotad::reverse_gradient(tape, trace);
    const std::vector<double> want_grad = {2.0, 1.0, 0.0};
    err = std::max(err, hotad::max_rel_diff(grad, want_grad));

    const hotad::TensorVecResult tv = hotad::rev_hedir(tape, trace, d);
    hotad::DenseMat want_w(3, 3);
    want_w(0, 1) = want_w(1, 0) = 1.0;
    want_w(2, 2) = -2.0;
    err = std::max(err, hotad::max_rel_diff(hotad::sparse_to_dense(tv.w), want_w));

    hotad::DenseMat want_td(3, 3);
    want_td(0, 2) = want_td(2, 0) = -2.0;
    want_td(1, 2) = want_td(2, 1) = -1.0;
    want_td(2, 2) = -3.0;
    err = std::max(err, hotad::max_rel_diff(hotad::sparse_to_dense(tv.td), want_td));

    rep.line("model function worked values", err, kExact);
}

int run_check(const CheckArgs& args) {
    hotad::ProblemSpec spec{args.problem, args.n, args.band};
    const hotad::Tape tape = hotad::make_problem(spec);

    CheckReport rep;
    if (args.problem == "toy_xysinz") check_toy_exact(tape, rep);

    std::mt19937_64 rng(args.seed);
    std::uniform_real_distribution<double> ux(-2.0, 2.0);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (int point = 0; point < 3; ++point) {
        std::vector<double> x(static_cast<std::size_t>(args.n));
        std::vector<double> d(static_cast<std::size_t>(args.n));
        for (auto& v : x) v = ux(rng);
        for (auto& v : d) v = ud(rng);
        std::printf("point %d:\n", point + 1);
        check_at_point(tape, x, d, args.tol, rep);
    }

    std::printf("RESULT %s problem=%s n=%lld seed=%llu\n", rep.ok ? "PASS" : "FAIL",
                args.problem.c_str(), static_cast<long long>(args.n),
                static_cast<unsigned long long>(args.seed));
    return rep.ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tape-based derivative sweeps: benchmarks and self checks"};
    app.require_subcommand(1);

    BenchArgs bench;
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "time one derivative computation, emit a CSV row");
    bench_cmd->add_option("--problem", bench.problem, "problem family")->required();
    bench_cmd->add_option("--n", bench.n, "number of independents")->required();
    bench_cmd->add_option("--band", bench.band, "band width (heavey_band only)");
    bench_cmd
        ->add_option("--derivative", bench.derivative,
                     "grad, hess, hessvec, tensorvec or tensor")
        ->required()
        ->check(CLI::IsMember({"grad", "hess", "hessvec", "tensorvec", "tensor"}));
    bench_cmd->add_option("--repeat", bench.repeat, "timed repetitions (median reported)")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--csv", bench.csv_path, "write the CSV here instead of stdout");
    bench_cmd->add_option("--point", bench.point, "evaluation point family")
        ->check(CLI::IsMember({"paper", "scaled"}));

    CheckArgs check;
    CLI::App* check_cmd =
        app.add_subcommand("check", "compare every sweep against its oracle");
    check_cmd->add_option("--problem", check.problem, "problem family")->required();
    check_cmd->add_option("--n", check.n, "number of independents")->required();
    check_cmd->add_option("--band", check.band, "band width (heavey_band only)");
    check_cmd->add_option("--seed", check.seed, "seed for the probe points");
    check_cmd->add_option("--tol", check.tol, "relative tolerance for the comparisons")
        ->check(CLI::Range(std::nextafter(0.0, 1.0), 1.0));

    try {
        app.parse(argc, argv);
        if (*bench_cmd) return run_bench(bench);
        return run_check(check);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const hotad::UnknownProblemError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const hotad::ParamError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const hotad::ShapeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const hotad::InvariantViolation& e) {
        std::fprintf(stderr, "check failed: %s\n", e.what());
        return 1;
    } catch (const hotad::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::bad_alloc&) {
        std::fprintf(stderr, "error: out of memory\n");
        return 3;
    }
}
