#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kpplab/reaction.hpp"

using namespace kpplab;

TEST_CASE("logistic passes every KPP clause") {
    auto f = ReactionFn::logistic();
    auto rep = validate_kpp(f, 64);
    CHECK(rep.endpoints_ok);
    CHECK(rep.positive_ok);
    CHECK(rep.ratio_monotone_ok);
    CHECK(rep.zero_extension_ok);
    CHECK(rep.deriv_positive_ok);
    CHECK(rep.deriv_crosscheck_ok);
    CHECK(rep.pass());
}

TEST_CASE("s(1-s)^2 passes: f/s = (1-s)^2 is nonincreasing") {
    auto f = ReactionFn::logistic_m(2.0);
    auto rep = validate_kpp(f, 64);
    CHECK(rep.pass());
}

TEST_CASE("s^2(1-s) fails the f(s)/s clause") {
    ReactionFn f("s2(1-s)", [](double s) { return s * s * (1.0 - s); }, 0.0);
    auto rep = validate_kpp(f, 64);
    CHECK_FALSE(rep.ratio_monotone_ok);
    CHECK_FALSE(rep.pass());
}

TEST_CASE("non-finite evaluation raises invalid-function") {
    ReactionFn f("bad", [](double s) { return s > 0.5 ? std::nan("") : s; }, 1.0);
    CHECK_THROWS_AS(validate_kpp(f, 64), InvalidFunctionError);
}

TEST_CASE("minimal speed") {
    CHECK(minimal_speed(ReactionFn::logistic()) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(minimal_speed(ReactionFn::scaled_logistic(4.0)) == doctest::Approx(4.0).epsilon(1e-14));
    // depends only on f'(0)
    ReactionFn g("cubic", [](double s) { return s * (1.0 - s) * (1.0 + s); }, 1.0);
    CHECK(minimal_speed(g) == doctest::Approx(2.0).epsilon(1e-14));
    ReactionFn h("flat", [](double s) { return 0.0 * s; }, 0.0);
    CHECK_THROWS_AS(minimal_speed(h), InvalidFunctionError);
}

TEST_CASE("subadditivity: logistic passes 10^4 trials") {
    CHECK(subadditivity_check(ReactionFn::logistic(), 10000, 7));
}

TEST_CASE("subadditivity corner cases") {
    auto f = ReactionFn::logistic();
    // a = 0: equality through f(0)=0
    CHECK(f(0.0 + 0.7) <= f(0.0) + f(0.7) + 1e-12);
    // a = b = 0.8: zero extension makes f(1.6)=0
    CHECK(f(1.6) == 0.0);
    CHECK(f(1.6) <= 2.0 * f(0.8) + 1e-12);
    CHECK(2.0 * f(0.8) == doctest::Approx(0.32));
}

TEST_CASE("subadditivity detects a violator") {
    ReactionFn f("s2(1-s)", [](double s) { return s * s * (1.0 - s); }, 0.0);
    CHECK_FALSE(subadditivity_check(f, 10000, 7));
}

TEST_CASE("f(s) <= f'(0) s on a sample grid") {
    for (auto f : {ReactionFn::logistic(), ReactionFn::logistic_m(3.0),
                   ReactionFn::scaled_logistic(2.5)}) {
        for (int i = 0; i <= 400; ++i) {
            double s = i * 0.01;
            CHECK(f(s) <= f.deriv_at_0() * s + 1e-12);
        }
    }
}

TEST_CASE("named reaction lookup") {
    CHECK(ReactionFn::by_name("logistic").name() == "logistic");
    CHECK(ReactionFn::by_name("logistic-m:2").deriv_at_0() == 1.0);
    CHECK(ReactionFn::by_name("scaled-logistic:4")(0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(ReactionFn::by_name("bistable"), ConfigError);
}
