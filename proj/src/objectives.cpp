#include "varqlab/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace varqlab {

namespace {

void check_nonempty(const SampleSet& samples) {
    if (samples.entries.empty() || samples.total() < 1) {
        throw std::invalid_argument("objective needs a non-empty sample set");
    }
    for (const auto& entry : samples.entries) {
        if (!std::isfinite(entry.energy)) throw std::invalid_argument("sample energy not finite");
        if (entry.count < 1) throw std::invalid_argument("sample counts must be positive");
    }
}

}  // namespace

long long SampleSet::total() const {
    long long total = 0;
    for (const auto& entry : entries) total += entry.count;
    return total;
}

void ObjectiveSpec::validate() const {
    if (kind == ObjectiveKind::Cvar && !(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("cvar alpha must lie in (0, 1]");
    }
    if (kind == ObjectiveKind::Gibbs && !(eta > 0.0)) {
        throw std::invalid_argument("gibbs eta must be positive");
    }
}

ObjectiveSpec ObjectiveSpec::parse(const std::string& text) {
    ObjectiveSpec spec;
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    if (name == "expectation") {
        spec.kind = ObjectiveKind::Expectation;
        if (colon != std::string::npos) {
            throw std::invalid_argument("expectation objective takes no parameter");
        }
    } else if (name == "cvar") {
        spec.kind = ObjectiveKind::Cvar;
        if (colon == std::string::npos) {
            throw std::invalid_argument("cvar objective needs an alpha, e.g. cvar:0.5");
        }
        spec.alpha = std::stod(text.substr(colon + 1));
    } else if (name == "gibbs") {
        spec.kind = ObjectiveKind::Gibbs;
        if (colon == std::string::npos) {
            throw std::invalid_argument("gibbs objective needs an eta, e.g. gibbs:2.0");
        }
        spec.eta = std::stod(text.substr(colon + 1));
    } else {
        throw std::invalid_argument("unknown objective '" + text + "'");
    }
    spec.validate();
    return spec;
}

std::string ObjectiveSpec::to_string() const {
    switch (kind) {
        case ObjectiveKind::Expectation: return "expectation";
        case ObjectiveKind::Cvar: return "cvar:" + std::to_string(alpha);
        case ObjectiveKind::Gibbs: return "gibbs:" + std::to_string(eta);
    }
    return "?";
}

double expectation_value(const SampleSet& samples) {
    check_nonempty(samples);
    double weighted = 0.0;
    for (const auto& entry : samples.entries) {
        weighted += static_cast<double>(entry.count) * entry.energy;
    }
    return weighted / static_cast<double>(samples.total());
}

double cvar_value(const SampleSet& samples, double alpha) {
    check_nonempty(samples);
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
    const long long total = samples.total();
    const auto keep = static_cast<long long>(std::ceil(alpha * static_cast<double>(total)));

    std::vector<std::pair<double, long long>> sorted;
    sorted.reserve(samples.entries.size());
    for (const auto& entry : samples.entries) sorted.emplace_back(entry.energy, entry.count);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    long long taken = 0;
    double sum = 0.0;
    for (const auto& [energy, count] : sorted) {
        const long long take = std::min(count, keep - taken);
        sum += static_cast<double>(take) * energy;
        taken += take;
        if (taken == keep) break;
    }
    return sum / static_cast<double>(keep);
}

double gibbs_value(const SampleSet& samples, double eta) {
    check_nonempty(samples);
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    double max_exponent = -std::numeric_limits<double>::infinity();
    for (const auto& entry : samples.entries) {
        max_exponent = std::max(max_exponent, -eta * entry.energy);
    }
    double shifted_sum = 0.0;
    for (const auto& entry : samples.entries) {
        shifted_sum +=
            static_cast<double>(entry.count) * std::exp(-eta * entry.energy - max_exponent);
    }
    return -(max_exponent + std::log(shifted_sum / static_cast<double>(samples.total())));
}

double evaluate_objective(const SampleSet& samples, const ObjectiveSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case ObjectiveKind::Expectation: return expectation_value(samples);
        case ObjectiveKind::Cvar: return cvar_value(samples, spec.alpha);
        case ObjectiveKind::Gibbs: return gibbs_value(samples, spec.eta);
    }
    throw std::logic_error("unreachable");
}

}  // namespace varqlab
