#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace varqlab {

using ParameterVector = std::vector<double>;
using ObjectiveFunction = std::function<double(const ParameterVector&)>;

enum class OptimizerMethod { GradientDescent, NelderMead };

struct OptimizerConfig {
    OptimizerMethod method = OptimizerMethod::GradientDescent;
    double step_size = 0.1;
    double fd_epsilon = 1e-3;
    long long max_evaluations = 2000;
    double value_tolerance = 1e-9;
    int restarts = 1;
    std::uint64_t restart_seed = 0;   // initial points for restarts > 1
    long long shots_per_evaluation = 0;  // bookkeeping only

    void validate() const;
};

struct OptimizationTrace {
    struct Iteration {
        ParameterVector params;
        double value = 0.0;
        long long cumulative_evaluations = 0;
        long long cumulative_shots = 0;
    };
    std::vector<Iteration> iterations;
    ParameterVector best_params;
    double best_value = 0.0;
    long long total_evaluations = 0;
    long long total_shots = 0;

    /// CSV with columns iteration,value,evaluations,shots,p0,p1,...
    std::string to_csv() const;
};

/// Central differences, one +eps/-eps pair per coordinate (2*dim calls).
ParameterVector finite_diff_gradient(const ObjectiveFunction& f, const ParameterVector& x,
                                     double epsilon);

/// Fixed-step descent along the central-difference gradient. Stops when the
/// value improvement stays below value_tolerance for 5 consecutive iterations
/// or the evaluation budget runs out. Every f call is counted.
OptimizationTrace gradient_descent(const ObjectiveFunction& f, const ParameterVector& x0,
                                   const OptimizerConfig& config);

/// Classic Nelder-Mead simplex (reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5); the initial simplex offsets each coordinate by 0.25 radians.
OptimizationTrace nelder_mead(const ObjectiveFunction& f, const ParameterVector& x0,
                              const OptimizerConfig& config);

/// Dispatches on config.method and, for restarts > 1, reruns from seed-derived
/// random points in [0, 2pi) keeping the best trace entries merged in order.
OptimizationTrace optimize(const ObjectiveFunction& f, const ParameterVector& x0,
                           const OptimizerConfig& config);

}  // namespace varqlab
