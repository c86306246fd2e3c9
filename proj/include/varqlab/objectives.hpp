#pragma once

#include <string>
#include <vector>

namespace varqlab {

/// Energy-labeled measurement outcomes.
struct SampleSet {
    struct Entry {
        std::string bitstring;
        double energy = 0.0;
        long long count = 0;
    };
    std::vector<Entry> entries;

    long long total() const;
};

enum class ObjectiveKind { Expectation, Cvar, Gibbs };

struct ObjectiveSpec {
    ObjectiveKind kind = ObjectiveKind::Expectation;
    double alpha = 1.0;  // CVaR keep-fraction, in (0, 1]
    double eta = 1.0;    // Gibbs weight, > 0

    void validate() const;
    /// "expectation", "cvar:0.5", "gibbs:2.0"
    static ObjectiveSpec parse(const std::string& text);
    std::string to_string() const;
};

/// Weighted mean energy.
double expectation_value(const SampleSet& samples);

/// Mean of the lowest ceil(alpha * total) shots, energies ascending; ties keep
/// earlier entries first.
double cvar_value(const SampleSet& samples, double alpha);

/// -log of the empirical mean of e^{-eta E}, computed with a max shift.
double gibbs_value(const SampleSet& samples, double eta);

double evaluate_objective(const SampleSet& samples, const ObjectiveSpec& spec);

}  // namespace varqlab
