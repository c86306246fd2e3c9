#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "varqlab/objectives.hpp"
#include "varqlab/rng.hpp"

using namespace varqlab;

namespace {

// The two tabulated 1000-shot distributions over energies 10, 1, 0, 1000.
SampleSet params_1() {
    SampleSet s;
    s.entries.push_back({"b1", 10.0, 900});
    s.entries.push_back({"b2", 1.0, 100});
    return s;
}

SampleSet params_2() {
    SampleSet s;
    s.entries.push_back({"b3", 0.0, 900});
    s.entries.push_back({"b4", 1000.0, 100});
    return s;
}

SampleSet random_set(Rng& rng, int max_entries) {
    SampleSet s;
    const int n = 1 + static_cast<int>(rand_index(rng, max_entries));
    for (int e = 0; e < n; ++e) {
        s.entries.push_back({"b" + std::to_string(e), 20.0 * rand_u01(rng) - 10.0,
                             1 + static_cast<long long>(rand_index(rng, 50))});
    }
    return s;
}

double min_energy(const SampleSet& s) {
    double best = s.entries.front().energy;
    for (const auto& e : s.entries) best = std::min(best, e.energy);
    return best;
}

}  // namespace

TEST_CASE("expectation values of the tabulated distributions") {
    CHECK(expectation_value(params_1()) == 9.1);
    // (900*0 + 100*1000) / 1000; the weighted average of this distribution.
    CHECK(expectation_value(params_2()) == 100.0);
    SampleSet single;
    single.entries.push_back({"b", -3.5, 7});
    CHECK(expectation_value(single) == -3.5);
}

TEST_CASE("cvar at alpha 0.5 discards the worst half") {
    CHECK(cvar_value(params_1(), 0.5) == 8.2);
    CHECK(cvar_value(params_2(), 0.5) == 0.0);
}

TEST_CASE("cvar at alpha 1 equals the expectation") {
    Rng rng(1212);
    for (int trial = 0; trial < 20; ++trial) {
        const SampleSet s = random_set(rng, 6);
        CHECK(cvar_value(s, 1.0) == doctest::Approx(expectation_value(s)).epsilon(1e-14));
    }
}

TEST_CASE("cvar is nondecreasing in alpha and bounded") {
    Rng rng(1313);
    for (int trial = 0; trial < 25; ++trial) {
        const SampleSet s = random_set(rng, 6);
        double previous = min_energy(s) - 1e-12;
        for (double alpha : {0.05, 0.2, 0.4, 0.6, 0.8, 1.0}) {
            const double value = cvar_value(s, alpha);
            REQUIRE(value >= previous - 1e-12);
            REQUIRE(value >= min_energy(s) - 1e-12);
            REQUIRE(value <= expectation_value(s) + 1e-12);
            previous = value;
        }
    }
}

TEST_CASE("gibbs objective closed forms") {
    SampleSet zeros;
    zeros.entries.push_back({"a", 0.0, 10});
    zeros.entries.push_back({"b", 0.0, 5});
    CHECK(gibbs_value(zeros, 1.7) == doctest::Approx(0.0).epsilon(1e-15));

    SampleSet single;
    single.entries.push_back({"a", 2.0, 3});
    CHECK(gibbs_value(single, 1.0) == doctest::Approx(2.0).epsilon(1e-14));

    // params_1 at eta = 1, against direct arithmetic.
    const double expected = -std::log((900.0 * std::exp(-10.0) + 100.0 * std::exp(-1.0)) / 1000.0);
    CHECK(gibbs_value(params_1(), 1.0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("gibbs at large eta locks onto the lowest energy") {
    // With unit-gap energies the non-minimal entries decay like e^{-50}, so
    // the value equals eta*E_min - log(p_min) to far better than 1e-6.
    SampleSet s;
    s.entries.push_back({"a", 3.0, 250});
    s.entries.push_back({"b", 4.0, 250});
    s.entries.push_back({"c", 5.0, 500});
    const double eta = 50.0;
    const double expected = eta * 3.0 - std::log(0.25);
    CHECK(gibbs_value(s, eta) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("objectives are invariant under splitting counts") {
    Rng rng(1414);
    for (int trial = 0; trial < 10; ++trial) {
        const SampleSet s = random_set(rng, 4);
        SampleSet split;
        for (const auto& entry : s.entries) {
            for (long long c = 0; c < entry.count; ++c) {
                split.entries.push_back({entry.bitstring, entry.energy, 1});
            }
        }
        CHECK(expectation_value(split) ==
              doctest::Approx(expectation_value(s)).epsilon(1e-12));
        CHECK(cvar_value(split, 0.3) == doctest::Approx(cvar_value(s, 0.3)).epsilon(1e-12));
        CHECK(gibbs_value(split, 2.0) == doctest::Approx(gibbs_value(s, 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("objective spec parsing") {
    CHECK(ObjectiveSpec::parse("expectation").kind == ObjectiveKind::Expectation);
    const ObjectiveSpec cvar = ObjectiveSpec::parse("cvar:0.5");
    CHECK(cvar.kind == ObjectiveKind::Cvar);
    CHECK(cvar.alpha == 0.5);
    const ObjectiveSpec gibbs = ObjectiveSpec::parse("gibbs:2.0");
    CHECK(gibbs.kind == ObjectiveKind::Gibbs);
    CHECK(gibbs.eta == 2.0);
    CHECK_THROWS_AS(ObjectiveSpec::parse("cvar"), std::invalid_argument);
    CHECK_THROWS_AS(ObjectiveSpec::parse("cvar:0"), std::invalid_argument);
    CHECK_THROWS_AS(ObjectiveSpec::parse("cvar:1.5"), std::invalid_argument);
    CHECK_THROWS_AS(ObjectiveSpec::parse("gibbs:-1"), std::invalid_argument);
    CHECK_THROWS_AS(ObjectiveSpec::parse("sharpe"), std::invalid_argument);
}

TEST_CASE("objectives reject empty sample sets") {
    SampleSet empty;
    CHECK_THROWS_AS(expectation_value(empty), std::invalid_argument);
    CHECK_THROWS_AS(cvar_value(empty, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(gibbs_value(empty, 1.0), std::invalid_argument);
}
