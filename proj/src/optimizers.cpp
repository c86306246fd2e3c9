#include "varqlab/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "varqlab/rng.hpp"

namespace varqlab {

namespace {

// Counts every objective call against the budget and keeps trace bookkeeping
// in one place.
class Budget {
  public:
    Budget(const ObjectiveFunction& f, const OptimizerConfig& config, OptimizationTrace& trace,
           long long already_used)
        : f_(f), config_(config), trace_(trace), used_(already_used) {}

    bool exhausted(long long calls_needed = 1) const {
        return used_thisrun_ + calls_needed > config_.max_evaluations;
    }

    double evaluate(const ParameterVector& x) {
        if (exhausted()) throw std::logic_error("evaluation budget overrun");
        ++used_;
        ++used_thisrun_;
        return f_(x);
    }

    void record(const ParameterVector& params, double value) {
        trace_.iterations.push_back(
            {params, value, used_, used_ * config_.shots_per_evaluation});
        if (trace_.iterations.size() == 1 || value < trace_.best_value) {
            trace_.best_value = value;
            trace_.best_params = params;
        }
    }

    long long used() const { return used_; }

  private:
    const ObjectiveFunction& f_;
    const OptimizerConfig& config_;
    OptimizationTrace& trace_;
    long long used_ = 0;          // across restarts
    long long used_thisrun_ = 0;  // against this run's budget
};

void run_gradient_descent(Budget& budget, const OptimizerConfig& config,
                          const ParameterVector& x0) {
    ParameterVector x = x0;
    if (budget.exhausted()) return;
    double value = budget.evaluate(x);
    budget.record(x, value);

    const auto dim = static_cast<long long>(x.size());
    int stall_count = 0;
    while (stall_count < 5) {
        if (budget.exhausted(2 * dim + 1)) break;
        ParameterVector gradient(x.size(), 0.0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            ParameterVector probe = x;
            probe[i] = x[i] + config.fd_epsilon;
            const double fp = budget.evaluate(probe);
            probe[i] = x[i] - config.fd_epsilon;
            const double fm = budget.evaluate(probe);
            gradient[i] = (fp - fm) / (2.0 * config.fd_epsilon);
        }
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= config.step_size * gradient[i];
        const double next = budget.evaluate(x);
        budget.record(x, next);
        stall_count = std::abs(value - next) < config.value_tolerance ? stall_count + 1 : 0;
        value = next;
    }
}

void run_nelder_mead(Budget& budget, const OptimizerConfig& config, const ParameterVector& x0) {
    constexpr double kReflect = 1.0;
    constexpr double kExpand = 2.0;
    constexpr double kContract = 0.5;
    constexpr double kShrink = 0.5;
    constexpr double kInitialOffset = 0.25;
    constexpr double kDiameterTolerance = 1e-8;

    const std::size_t dim = x0.size();
    std::vector<ParameterVector> simplex{x0};
    for (std::size_t i = 0; i < dim; ++i) {
        ParameterVector vertex = x0;
        vertex[i] += kInitialOffset;
        simplex.push_back(vertex);
    }
    std::vector<double> values;
    for (const auto& vertex : simplex) {
        if (budget.exhausted()) {
            if (values.empty()) return;
            simplex.resize(values.size());
            break;
        }
        values.push_back(budget.evaluate(vertex));
        if (values.size() == 1) budget.record(vertex, values.back());
    }

    const auto order = [&] {
        std::vector<std::size_t> idx(simplex.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<ParameterVector> s;
        std::vector<double> v;
        for (std::size_t i : idx) {
            s.push_back(simplex[i]);
            v.push_back(values[i]);
        }
        simplex = std::move(s);
        values = std::move(v);
    };

    if (simplex.size() < dim + 1) return;  // budget gone during setup
    order();
    budget.record(simplex[0], values[0]);

    // Converged once the value spread is inside the tolerance AND the simplex
    // has collapsed; the spread alone can hit zero on symmetric straddles.
    const auto converged = [&] {
        if (values.back() - values.front() >= config.value_tolerance) return false;
        double diameter = 0.0;
        for (std::size_t v = 1; v < simplex.size(); ++v) {
            for (std::size_t i = 0; i < dim; ++i) {
                diameter = std::max(diameter, std::abs(simplex[v][i] - simplex[0][i]));
            }
        }
        return diameter < kDiameterTolerance;
    };

    while (!converged()) {
        if (budget.exhausted()) break;
        ParameterVector centroid(dim, 0.0);
        for (std::size_t v = 0; v + 1 < simplex.size(); ++v) {
            for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v][i];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        const auto blend = [&](const ParameterVector& from, double factor) {
            ParameterVector out(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                out[i] = centroid[i] + factor * (from[i] - centroid[i]);
            }
            return out;
        };

        const ParameterVector& worst = simplex.back();
        const ParameterVector reflected = blend(worst, -kReflect);
        const double f_reflected = budget.evaluate(reflected);

        if (f_reflected < values.front() && !budget.exhausted()) {
            const ParameterVector expanded = blend(worst, -kExpand);
            const double f_expanded = budget.evaluate(expanded);
            if (f_expanded < f_reflected) {
                simplex.back() = expanded;
                values.back() = f_expanded;
            } else {
                simplex.back() = reflected;
                values.back() = f_reflected;
            }
        } else if (f_reflected < values[values.size() - 2]) {
            simplex.back() = reflected;
            values.back() = f_reflected;
        } else if (!budget.exhausted()) {
            const bool outside = f_reflected < values.back();
            const ParameterVector contracted =
                outside ? blend(reflected, kContract) : blend(worst, kContract);
            const double f_contracted = budget.evaluate(contracted);
            const double bar = outside ? f_reflected : values.back();
            if (f_contracted < bar) {
                simplex.back() = contracted;
                values.back() = f_contracted;
            } else {
                for (std::size_t v = 1; v < simplex.size(); ++v) {
                    if (budget.exhausted()) break;
                    for (std::size_t i = 0; i < dim; ++i) {
                        simplex[v][i] =
                            simplex[0][i] + kShrink * (simplex[v][i] - simplex[0][i]);
                    }
                    values[v] = budget.evaluate(simplex[v]);
                }
            }
        }
        order();
        budget.record(simplex[0], values[0]);
    }
}

}  // namespace

void OptimizerConfig::validate() const {
    if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be positive");
    if (!(fd_epsilon > 0.0)) throw std::invalid_argument("fd_epsilon must be positive");
    if (max_evaluations < 1) throw std::invalid_argument("max_evaluations must be >= 1");
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    if (!(value_tolerance >= 0.0)) throw std::invalid_argument("value_tolerance must be >= 0");
}

std::string OptimizationTrace::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "iteration,value,evaluations,shots";
    // Staged runs can grow the parameter count; pad to the widest row.
    std::size_t dim = 0;
    for (const auto& it : iterations) dim = std::max(dim, it.params.size());
    for (std::size_t i = 0; i < dim; ++i) out << ",p" << i;
    out << "\n";
    for (std::size_t it = 0; it < iterations.size(); ++it) {
        const auto& row = iterations[it];
        out << it << "," << row.value << "," << row.cumulative_evaluations << ","
            << row.cumulative_shots;
        for (double p : row.params) out << "," << p;
        for (std::size_t i = row.params.size(); i < dim; ++i) out << ",";
        out << "\n";
    }
    return out.str();
}

ParameterVector finite_diff_gradient(const ObjectiveFunction& f, const ParameterVector& x,
                                     double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    ParameterVector gradient(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        ParameterVector probe = x;
        probe[i] = x[i] + epsilon;
        const double fp = f(probe);
        probe[i] = x[i] - epsilon;
        const double fm = f(probe);
        gradient[i] = (fp - fm) / (2.0 * epsilon);
    }
    return gradient;
}

OptimizationTrace gradient_descent(const ObjectiveFunction& f, const ParameterVector& x0,
                                   const OptimizerConfig& config) {
    OptimizerConfig local = config;
    local.method = OptimizerMethod::GradientDescent;
    local.restarts = 1;
    return optimize(f, x0, local);
}

OptimizationTrace nelder_mead(const ObjectiveFunction& f, const ParameterVector& x0,
                              const OptimizerConfig& config) {
    OptimizerConfig local = config;
    local.method = OptimizerMethod::NelderMead;
    local.restarts = 1;
    return optimize(f, x0, local);
}

OptimizationTrace optimize(const ObjectiveFunction& f, const ParameterVector& x0,
                           const OptimizerConfig& config) {
    config.validate();
    if (x0.empty()) throw std::invalid_argument("need at least one parameter");
    OptimizationTrace trace;
    long long used = 0;
    for (int restart = 0; restart < config.restarts; ++restart) {
        ParameterVector start = x0;
        if (restart > 0) {
            Rng rng(derive_seed(config.restart_seed, static_cast<std::uint64_t>(restart)));
            for (double& p : start) p = 2.0 * std::numbers::pi * rand_u01(rng);
        }
        Budget budget(f, config, trace, used);
        if (config.method == OptimizerMethod::GradientDescent) {
            run_gradient_descent(budget, config, start);
        } else {
            run_nelder_mead(budget, config, start);
        }
        used = budget.used();
    }
    trace.total_evaluations = used;
    trace.total_shots = used * config.shots_per_evaluation;
    return trace;
}

}  // namespace varqlab
