#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "scaling_atlas/rng.hpp"
#include "scaling_atlas/scaling_models.hpp"

using namespace scaling_atlas;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Literal transcription of the 10-parameter family, kept separate from the
// library path on purpose.
double power_product10_reference(const std::vector<double>& a, double n, double d, double r) {
    return (a[0] * std::pow(std::log(n), a[1]) + a[2]) *
               (a[3] * std::pow(std::log(d), a[4]) + a[5]) *
               (a[6] * std::pow(std::log(r), a[7]) + a[8]) +
           a[9];
}

}  // namespace

TEST_CASE("family metadata", "[models]") {
    CHECK(param_count(ModelFamily::LogPoly6) == 6);
    CHECK(param_count(ModelFamily::PowerProduct10) == 10);
    CHECK(param_count(ModelFamily::InteractionPoly8) == 8);
    CHECK(family_name(ModelFamily::LogPoly6) == "log_poly6");
    CHECK(parse_family("power_product10") == ModelFamily::PowerProduct10);
    CHECK_FALSE(parse_family("poly"));
    CHECK(param_names(ModelFamily::LogPoly6).size() == 6);
    CHECK(param_names(ModelFamily::PowerProduct10)[9] == "delta");
    CHECK(param_names(ModelFamily::InteractionPoly8)[6] == "alpha_ndr");
}

TEST_CASE("log-poly evaluation", "[models]") {
    SECTION("zero slopes give the product of intercepts") {
        ScalingModel m{ModelFamily::LogPoly6, {0, 1, 0, 1, 0, 1}};
        CHECK(evaluate(m, {7.0, 123.0, 456.0}) == 1.0);
    }
    SECTION("unit slopes at e, e^2, e^3") {
        ScalingModel m{ModelFamily::LogPoly6, {1, 0, 1, 0, 1, 0}};
        const double e = std::exp(1.0);
        CHECK_THAT(evaluate(m, {e, e * e, e * e * e}), WithinAbs(6.0, 1e-12));
    }
}

TEST_CASE("interaction-poly evaluation", "[models]") {
    ScalingModel m{ModelFamily::InteractionPoly8, {0, 0, 0, 0, 0, 0, 0, 42.5}};
    CHECK(evaluate(m, {3.0, 5e6, 50176.0}) == 42.5);
}

TEST_CASE("power-product matches an independent transcription", "[models]") {
    SplitMix64 rng(7101);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> params(10);
        for (double& p : params) p = rng.uniform(0.05, 1.5);
        ScalingModel m{ModelFamily::PowerProduct10, params};
        const double n = rng.uniform(2.0, 1e5);
        const double d = rng.uniform(2.0, 1e9);
        const double r = rng.uniform(2.0, 1e7);
        const double expected = power_product10_reference(params, n, d, r);
        CHECK_THAT(evaluate(m, {n, d, r}), WithinRel(expected, 1e-12));
    }
}

TEST_CASE("power-product domain hazard raises NonFiniteResult", "[models]") {
    // log n < 0 with a fractional exponent is undefined over the reals
    ScalingModel m{ModelFamily::PowerProduct10,
                   {0.5, 0.5, 0.1, 0.5, 1.0, 0.1, 0.5, 1.0, 0.1, 0.0}};
    CHECK_THROWS_AS(evaluate(m, {0.5, 100.0, 100.0}), NonFiniteResult);
}

TEST_CASE("evaluate input validation", "[models]") {
    ScalingModel m{ModelFamily::LogPoly6, {1, 0, 1, 0, 1, 0}};
    CHECK_THROWS_AS(evaluate(m, {0.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(evaluate(m, {1.0, -2.0, 1.0}), std::invalid_argument);
    SECTION("wrong parameter count") {
        ScalingModel bad{ModelFamily::LogPoly6, {1, 2, 3}};
        CHECK_THROWS_AS(evaluate(bad, {2.0, 2.0, 2.0}), std::invalid_argument);
    }
    SECTION("non-finite parameter") {
        ScalingModel bad{ModelFamily::LogPoly6,
                         {1, 0, 1, 0, 1, std::numeric_limits<double>::quiet_NaN()}};
        CHECK_THROWS_AS(evaluate(bad, {2.0, 2.0, 2.0}), std::invalid_argument);
    }
}

TEST_CASE("batch evaluation mirrors the scalar path", "[models]") {
    ScalingModel m{ModelFamily::LogPoly6, {0.3, 0.5, 0.4, 0.6, 0.1, 0.1}};

    SECTION("empty set") { CHECK(evaluate_batch(m, ObservationSet{}).empty()); }

    SECTION("singleton set") {
        ObservationSet set;
        Observation o;
        o.hours = 100.0;
        o.params = 1'000'000;
        o.pixels = 50176;
        o.accuracy = 50.0;
        set.observations.push_back(o);
        auto batch = evaluate_batch(m, set);
        REQUIRE(batch.size() == 1);
        CHECK(batch[0] == evaluate(m, to_input_point(set.observations[0])));
    }

    SECTION("78-point grid matches 78 scalar calls") {
        ObservationSet set;
        SplitMix64 rng(42);
        for (int i = 0; i < 78; ++i) {
            Observation o;
            o.hours = rng.uniform(2.0, 5000.0);
            o.params = 1000 + static_cast<long long>(rng.next() % 1'000'000'000);
            const long long side = 14 * (1 + static_cast<long long>(rng.next() % 40));
            o.pixels = side * side;
            o.accuracy = 50.0;
            set.observations.push_back(o);
        }
        auto batch = evaluate_batch(m, set);
        REQUIRE(batch.size() == 78);
        for (std::size_t i = 0; i < 78; ++i)
            CHECK(batch[i] == evaluate(m, to_input_point(set.observations[i])));
    }

    SECTION("offending index is reported") {
        ObservationSet set;
        Observation ok;
        ok.hours = 10.0;
        ok.params = 1000;
        ok.pixels = 196;
        Observation bad = ok;
        bad.hours = 0.5;  // log < 0
        set.observations = {ok, bad};
        ScalingModel hazard{ModelFamily::PowerProduct10,
                            {0.5, 0.5, 0.1, 0.5, 1.0, 0.1, 0.5, 1.0, 0.1, 0.0}};
        try {
            evaluate_batch(hazard, set);
            FAIL("expected NonFiniteResult");
        } catch (const NonFiniteResult& e) {
            CHECK(e.index() == 1);
        }
    }
}

TEST_CASE("gauge rescaling leaves log-poly predictions unchanged", "[models]") {
    SplitMix64 rng(90210);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> p(6);
        for (double& v : p) v = rng.uniform(-2.0, 2.0);
        double c = rng.uniform(0.1, 3.0) * (rng.next() % 2 == 0 ? 1.0 : -1.0);
        ScalingModel base{ModelFamily::LogPoly6, p};
        ScalingModel rescaled{ModelFamily::LogPoly6,
                              {p[0] * c, p[1] * c, p[2] / c, p[3] / c, p[4], p[5]}};
        const InputPoint x{rng.uniform(1.5, 1e5), rng.uniform(1.5, 1e9), rng.uniform(1.5, 1e7)};
        const double a = detail::evaluate_raw(base, x);
        const double b = detail::evaluate_raw(rescaled, x);
        REQUIRE_THAT(b, WithinRel(a, 1e-12) || WithinAbs(a, 1e-12));
    }
}

TEST_CASE("log-base choice is a parameter transformation", "[models]") {
    const double ln10 = std::log(10.0);
    SplitMix64 rng(5150);

    SECTION("log-poly") {
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> p(6);
            for (double& v : p) v = rng.uniform(-1.5, 1.5);
            // base-10 model, written out with log10 directly
            const InputPoint x{rng.uniform(2.0, 1e5), rng.uniform(2.0, 1e9),
                               rng.uniform(2.0, 1e7)};
            const double base10 = (p[0] * std::log10(x.n) + p[1]) *
                                  (p[2] * std::log10(x.d) + p[3]) *
                                  (p[4] * std::log10(x.r) + p[5]);
            ScalingModel natural{ModelFamily::LogPoly6,
                                 {p[0] / ln10, p[1], p[2] / ln10, p[3], p[4] / ln10, p[5]}};
            REQUIRE_THAT(detail::evaluate_raw(natural, x),
                         WithinRel(base10, 1e-12) || WithinAbs(base10, 1e-12));
        }
    }

    SECTION("interaction-poly") {
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> p(8);
            for (double& v : p) v = rng.uniform(-1.5, 1.5);
            const InputPoint x{rng.uniform(2.0, 1e5), rng.uniform(2.0, 1e9),
                               rng.uniform(2.0, 1e7)};
            const double ln = std::log10(x.n), ld = std::log10(x.d), lr = std::log10(x.r);
            const double base10 = p[0] * ln + p[1] * ld + p[2] * lr + p[3] * ln * ld +
                                  p[4] * ln * lr + p[5] * ld * lr + p[6] * ln * ld * lr + p[7];
            ScalingModel natural{ModelFamily::InteractionPoly8,
                                 {p[0] / ln10, p[1] / ln10, p[2] / ln10, p[3] / (ln10 * ln10),
                                  p[4] / (ln10 * ln10), p[5] / (ln10 * ln10),
                                  p[6] / (ln10 * ln10 * ln10), p[7]}};
            REQUIRE_THAT(detail::evaluate_raw(natural, x),
                         WithinRel(base10, 1e-12) || WithinAbs(base10, 1e-12));
        }
    }
}

TEST_CASE("log-poly with positive parameters is increasing above 1", "[models]") {
    SplitMix64 rng(787);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> p(6);
        for (double& v : p) v = rng.uniform(0.01, 2.0);
        ScalingModel m{ModelFamily::LogPoly6, p};
        const InputPoint x{rng.uniform(1.01, 1e4), rng.uniform(1.01, 1e8),
                           rng.uniform(1.01, 1e6)};
        const double f = detail::evaluate_raw(m, x);
        CHECK(detail::evaluate_raw(m, {x.n * 1.5, x.d, x.r}) > f);
        CHECK(detail::evaluate_raw(m, {x.n, x.d * 1.5, x.r}) > f);
        CHECK(detail::evaluate_raw(m, {x.n, x.d, x.r * 1.5}) > f);
    }
}
