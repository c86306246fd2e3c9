#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "varqlab/optimizers.hpp"
#include "varqlab/pauli.hpp"
#include "varqlab/simulator.hpp"
#include "varqlab/vqe.hpp"

using namespace varqlab;

namespace {

double rosenbrock(const ParameterVector& x) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    return a * a + 100.0 * b * b;
}

OptimizerConfig gd_config() {
    OptimizerConfig config;
    config.method = OptimizerMethod::GradientDescent;
    config.step_size = 0.1;
    config.max_evaluations = 5000;
    return config;
}

OptimizerConfig nm_config() {
    OptimizerConfig config;
    config.method = OptimizerMethod::NelderMead;
    config.max_evaluations = 2000;
    return config;
}

}  // namespace

TEST_CASE("central differences on simple functions") {
    const auto square = [](const ParameterVector& x) { return x[0] * x[0]; };
    const auto gradient = finite_diff_gradient(square, {1.0}, 1e-4);
    CHECK(gradient[0] == doctest::Approx(2.0).epsilon(1e-6));

    const auto constant = [](const ParameterVector&) { return 4.2; };
    const auto zero = finite_diff_gradient(constant, {0.3, -0.7}, 1e-4);
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);

    const auto linear = [](const ParameterVector& x) { return x[0] + 3.0 * x[1]; };
    const auto slope = finite_diff_gradient(linear, {0.5, 0.25}, 1e-4);
    CHECK(slope[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(slope[1] == doctest::Approx(3.0).epsilon(1e-6));

    CHECK_THROWS_AS(finite_diff_gradient(square, {1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("finite differences match analytic polynomial gradients") {
    const auto cubic = [](const ParameterVector& x) {
        return x[0] * x[0] * x[0] - 2.0 * x[0] * x[1] + x[1] * x[1];
    };
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const ParameterVector x{0.8, -0.4};
        const auto g = finite_diff_gradient(cubic, x, eps);
        const double gx = 3.0 * x[0] * x[0] - 2.0 * x[1];
        const double gy = -2.0 * x[0] + 2.0 * x[1];
        CHECK(std::abs(g[0] - gx) <= 10.0 * eps * eps + 1e-9);
        CHECK(std::abs(g[1] - gy) <= 10.0 * eps * eps + 1e-9);
    }
}

TEST_CASE("gradient descent on a convex quadratic") {
    const auto f = [](const ParameterVector& x) { return (x[0] - 2.0) * (x[0] - 2.0); };
    const OptimizationTrace trace = gradient_descent(f, {0.0}, gd_config());
    CHECK(trace.best_params[0] == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("a budget of one evaluation yields exactly the initial point") {
    int calls = 0;
    const auto f = [&calls](const ParameterVector& x) {
        ++calls;
        return x[0] * x[0];
    };
    OptimizerConfig config = gd_config();
    config.max_evaluations = 1;
    const OptimizationTrace trace = gradient_descent(f, {3.0}, config);
    CHECK(calls == 1);
    REQUIRE(trace.iterations.size() == 1);
    CHECK(trace.iterations[0].value == 9.0);
    CHECK(trace.total_evaluations == 1);

    calls = 0;
    config.method = OptimizerMethod::NelderMead;
    const OptimizationTrace nm_trace = nelder_mead(f, {3.0}, config);
    CHECK(calls == 1);
    CHECK(nm_trace.iterations.size() == 1);
}

TEST_CASE("gradient-descent VQE landscape reaches 1 - sqrt(5)") {
    // E(theta) = 2 cos(theta) + sin(theta) + 1 via the actual simulator.
    Observable obs(1);
    obs.add_term(2.0, PauliString::parse("Z0", 1));
    obs.add_term(1.0, PauliString::parse("X0", 1));
    obs.add_constant(1.0);
    const AnsatzSpec ansatz{AnsatzSpec::Kind::SingleRy, 1, 1};
    const auto f = [&](const ParameterVector& params) {
        return exact_expectation(obs, run(build_ansatz(ansatz, params)).amps());
    };
    const OptimizationTrace trace = gradient_descent(f, {0.1}, gd_config());
    CHECK(trace.best_value == doctest::Approx(1.0 - std::sqrt(5.0)).epsilon(1e-4));
}

TEST_CASE("nelder-mead on a convex quadratic and on rosenbrock") {
    const auto quadratic = [](const ParameterVector& x) {
        return (x[0] - 2.0) * (x[0] - 2.0);
    };
    const OptimizationTrace trace = nelder_mead(quadratic, {0.0}, nm_config());
    CHECK(trace.best_params[0] == doctest::Approx(2.0).epsilon(1e-3));

    const OptimizationTrace rosen = nelder_mead(rosenbrock, {-1.0, 1.0}, nm_config());
    CHECK(rosen.total_evaluations <= 2000);
    CHECK(rosen.best_value < 1e-2);
}

TEST_CASE("evaluation accounting is exact") {
    long long calls = 0;
    const auto f = [&calls](const ParameterVector& x) {
        ++calls;
        return std::cos(x[0]) + 0.3 * x[0] * x[0];
    };
    for (auto method : {OptimizerMethod::GradientDescent, OptimizerMethod::NelderMead}) {
        calls = 0;
        OptimizerConfig config = gd_config();
        config.method = method;
        config.max_evaluations = 333;
        config.value_tolerance = 0.0;  // force the budget to be the binding stop
        const OptimizationTrace trace = optimize(f, {2.0}, config);
        CHECK(trace.total_evaluations == calls);
        CHECK(trace.iterations.back().cumulative_evaluations == calls);
        CHECK(calls <= 333);
    }
}

TEST_CASE("best value never increases along the best-so-far sequence") {
    const auto f = [](const ParameterVector& x) {
        return std::sin(3.0 * x[0]) + 0.1 * x[0] * x[0];
    };
    const OptimizationTrace trace = nelder_mead(f, {1.0}, nm_config());
    double best = trace.iterations.front().value;
    for (const auto& it : trace.iterations) {
        best = std::min(best, it.value);
    }
    CHECK(trace.best_value == best);
}

TEST_CASE("traces are identical across repeated runs") {
    const auto f = [](const ParameterVector& x) {
        return (x[0] + 1.0) * (x[0] + 1.0) + 0.5 * std::sin(x[1]);
    };
    OptimizerConfig config = nm_config();
    config.restarts = 2;
    config.restart_seed = 99;
    const OptimizationTrace a = optimize(f, {0.4, -0.2}, config);
    const OptimizationTrace b = optimize(f, {0.4, -0.2}, config);
    REQUIRE(a.iterations.size() == b.iterations.size());
    for (std::size_t i = 0; i < a.iterations.size(); ++i) {
        REQUIRE(a.iterations[i].value == b.iterations[i].value);
        REQUIRE(a.iterations[i].params == b.iterations[i].params);
        REQUIRE(a.iterations[i].cumulative_evaluations == b.iterations[i].cumulative_evaluations);
    }
    CHECK(a.best_value == b.best_value);
}

TEST_CASE("restarts explore seed-derived starting points") {
    // A deceptive double well where the provided start sits in the worse basin.
    const auto f = [](const ParameterVector& x) {
        const double t = x[0];
        return 0.05 * (t - 5.0) * (t - 5.0) - 2.0 * std::exp(-(t - 5.5) * (t - 5.5));
    };
    OptimizerConfig single = nm_config();
    OptimizerConfig multi = nm_config();
    multi.restarts = 4;
    multi.restart_seed = 3;
    const double lone = nelder_mead(f, {-20.0}, single).best_value;
    const double hedged = optimize(f, {-20.0}, multi).best_value;
    CHECK(hedged <= lone + 1e-12);
}

TEST_CASE("shots accounting multiplies evaluations by the per-eval budget") {
    const auto f = [](const ParameterVector& x) { return x[0] * x[0]; };
    OptimizerConfig config = gd_config();
    config.max_evaluations = 50;
    config.shots_per_evaluation = 123;
    const OptimizationTrace trace = optimize(f, {1.0}, config);
    CHECK(trace.total_shots == trace.total_evaluations * 123);
}

TEST_CASE("config validation") {
    OptimizerConfig config;
    config.step_size = 0.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = OptimizerConfig{};
    config.restarts = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = OptimizerConfig{};
    config.max_evaluations = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("csv export carries one column per parameter") {
    const auto f = [](const ParameterVector& x) { return x[0] * x[0] + x[1] * x[1]; };
    OptimizerConfig config = gd_config();
    config.max_evaluations = 20;
    const OptimizationTrace trace = optimize(f, {1.0, 2.0}, config);
    const std::string csv = trace.to_csv();
    CHECK(csv.rfind("iteration,value,evaluations,shots,p0,p1\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') ==
          static_cast<long>(trace.iterations.size()) + 1);
}
