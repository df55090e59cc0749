#include <doctest.h>

#include <random>
#include <stdexcept>

#include "ctv/stats.hpp"
#include "t_oracle.hpp"

using namespace ctv;

TEST_CASE("oracle sanity against closed forms") {
    // nu = 1 is Cauchy: P(|T| >= t) = 1 - 2 atan(t) / pi.
    for (double t : {0.1, 1.0, 3.0, 30.0})
        CHECK(oracle::two_tailed_p(t, 1) == doctest::Approx(1 - 2 * std::atan(t) / std::numbers::pi).epsilon(1e-12));
    // nu = 2: P(|T| >= t) = 1 - t / sqrt(2 + t^2).
    for (double t : {0.5, 2.0, 10.0})
        CHECK(oracle::two_tailed_p(t, 2) == doctest::Approx(1 - t / std::sqrt(2 + t * t)).epsilon(1e-12));
}

TEST_CASE("welch_t matches the numerical oracle on random fixtures") {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> size(2, 60);
    std::uniform_real_distribution<double> shift(-4, 4), scale(0.2, 5);
    double worst = 0;
    int fixtures = 0;
    for (; fixtures < 1500; ++fixtures) {
        std::normal_distribution<double> nx(100, scale(rng)), ny(100 + shift(rng), scale(rng));
        std::vector<double> x(static_cast<std::size_t>(size(rng))), y(static_cast<std::size_t>(size(rng)));
        for (auto& v : x) v = nx(rng);
        for (auto& v : y) v = ny(rng);
        auto r = welch_t(x, y);
        auto o = oracle::welch(x, y);
        CHECK(r.t == doctest::Approx(o.t).epsilon(1e-9));
        CHECK(r.dof == doctest::Approx(o.dof).epsilon(1e-9));
        double p = oracle::two_tailed_p(o.t, o.dof);
        worst = std::max(worst, std::fabs(r.p - p));
        CHECK(std::fabs(r.p - p) <= 1e-9);
        CHECK(r.p >= 0);
        CHECK(r.p <= 1);
    }
    MESSAGE("fixtures " << fixtures << ", max |dp| " << worst);
}

TEST_CASE("welch_t examples and conventions") {
    std::vector<double> x{1, 2, 3, 4}, shifted{1001, 1002, 1003, 1004};
    auto same = welch_t(x, x);
    CHECK(same.t == 0);
    CHECK(same.p == 1);
    CHECK(welch_t(x, shifted).p < 1e-6);

    std::vector<double> flat{5, 5, 5}, other{7, 7, 7};
    CHECK(welch_t(flat, flat).p == 1);
    auto split = welch_t(flat, other);
    CHECK(split.p == 0);
    CHECK(std::isinf(split.t));
    CHECK(split.t < 0);

    CHECK_THROWS_AS(welch_t(std::vector<double>{1}, x), std::invalid_argument);
}

TEST_CASE("welch_t is antisymmetric in t and symmetric in p") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0, 1);
    for (int k = 0; k < 200; ++k) {
        std::vector<double> x(10), y(17);
        for (auto& v : x) v = n(rng);
        for (auto& v : y) v = n(rng) + 0.5;
        auto a = welch_t(x, y), b = welch_t(y, x);
        CHECK(a.t == doctest::Approx(-b.t));
        CHECK(a.p == doctest::Approx(b.p));
        CHECK(a.dof > 0);
    }
}
