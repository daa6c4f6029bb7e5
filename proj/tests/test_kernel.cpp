#include "cki/kernel.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace cki;

using test::shifted_gaussian;

TEST_CASE("discrete moments of the Gaussian", "[kernel]")
{
    auto g = Kernel<double>::gaussian();

    auto m1 = discrete_moment(g, 1, 1e-12);
    CHECK(m1.value == 0.0);
    CHECK(m1.tail_bound == 0.0);

    // brute force over |j| <= 20 and the Poisson dual sum agree on this value
    const double m0_ref = 1.000000005350575982;
    CHECK(std::abs(static_cast<double>(test::brute_moment(0, 20)) - m0_ref) < 1e-16);
    CHECK(std::abs(static_cast<double>(test::poisson_moment(0)) - m0_ref) < 1e-16);
    auto m0 = discrete_moment(g, 0, 1e-12);
    CHECK(std::abs(m0.value - m0_ref) <= 1e-12);
    CHECK(m0.tail_bound <= 1e-12);

    auto m2 = discrete_moment(g, 2, 1e-12);
    CHECK(std::abs(m2.value - static_cast<double>(test::brute_moment(2, 30))) <= 1e-12);
}

TEST_CASE("certified moments bracket the true value", "[kernel][property]")
{
    auto g = Kernel<extended>::gaussian();
    for (int k = 0; k <= 20; k += 2) {
        for (double tol : {1e-6, 1e-12, 1e-20}) {
            auto m = discrete_moment(g, k, extended(tol));
            CHECK(m.tail_bound <= extended(tol));
            CHECK(abs(m.value - test::brute_moment(k, 60)) <= m.tail_bound + m.roundoff);
        }
    }
}

TEST_CASE("continuous moments", "[kernel]")
{
    CHECK(continuous_moment<double>(0) == 1.0);
    CHECK(continuous_moment<double>(4) == 3.0);
    CHECK(continuous_moment<double>(5) == 0.0);
    CHECK(continuous_moment<double>(10) == 945.0);
    CHECK_THROWS(continuous_moment<double>(-1));
}

TEST_CASE("truncation radius", "[kernel]")
{
    auto g = Kernel<double>::gaussian();

    int r0 = truncation_radius(g, 0, 1e-15);
    CHECK(r0 <= 10);
    CHECK(static_cast<double>(test::brute_tail(0, r0)) <= 1e-15);

    int r10 = truncation_radius(g, 10, 1e-12);
    CHECK(r10 >= 10);
    CHECK(static_cast<double>(test::brute_tail(10, r10)) <= 1e-12);

    CHECK(truncation_radius(g, 0, 10.0) == 2);
    CHECK(truncation_radius(g, 5, 10.0) == 5);

    CHECK_THROWS(truncation_radius(g, 0, 0.0));
    CHECK_THROWS(truncation_radius(g, 0, -1.0));
}

TEST_CASE("Gaussian certificates dominate direct tails", "[kernel][property]")
{
    for (int d = 0; d <= 16; ++d) {
        for (int r = std::max(d, 2); r <= 25; ++r) {
            extended bound = Kernel<extended>::gaussian_moment_tail(d, r);
            CHECK(test::brute_tail(d, r) <= bound);

            // shifted sums: worst shift is +-1/2
            extended shifted = 0;
            for (int t = r + 1; t <= 60; ++t)
                shifted += 2 * pow(extended(1 + t), d) * test::gauss_ext(extended(t) - extended(0.5));
            CHECK(shifted <= Kernel<extended>::gaussian_shifted_tail(d, r));
        }
    }
}

TEST_CASE("uncertifiable tails report the best bound", "[kernel][error]")
{
    // |psi(x)| <= 1 / (1 + x^N) only for N <= 3: tails decay like R^{-1} at best
    auto slow = Kernel<double>::from_decay_certificate(
        "slow", [](double x) { return 1 / (1 + x * x * x * x); },
        [](int n) { return n <= 4 ? 1.0 : std::numeric_limits<double>::infinity(); }, true);
    try {
        truncation_radius(slow, 0, 1e-12);
        FAIL("expected tail_not_certifiable");
    } catch (const tail_not_certifiable& e) {
        CHECK(e.best_bound() > 1e-12);
        CHECK(std::isfinite(e.best_bound()));
        CHECK(e.degree() == 0);
    }
    CHECK_THROWS_AS(discrete_moment(slow, 2, 1e-12), tail_not_certifiable);
}

TEST_CASE("discrete and continuous moments differ by the Poisson correction", "[kernel][property]")
{
    auto g = Kernel<extended>::gaussian();
    for (int k = 0; k <= 12; k += 2) {
        auto m = discrete_moment(g, k, extended(1e-30));
        // M_k - C_k is exactly the z != 0 part of the dual sum
        CHECK(abs(m.value - test::poisson_moment(k)) <= m.tail_bound + m.roundoff + extended(1e-40));
    }
    // only k = 0 lies within 1e-8 C_k of the continuous moment
    auto m0 = discrete_moment(g, 0, extended(1e-30));
    CHECK(abs(m0.value - continuous_moment<extended>(0)) <= 10 * m0.tail_bound + extended(1e-8));
    auto m2 = discrete_moment(g, 2, extended(1e-30));
    CHECK(abs(m2.value - continuous_moment<extended>(2)) > extended(2e-7));
}

TEST_CASE("even moments grow", "[kernel][property]")
{
    auto g = Kernel<double>::gaussian();
    MomentTable<double> m(g, 20, 1e-12);
    const double psi0 = g(0.0);
    for (int k = 0; k + 2 <= 20; k += 2)
        CHECK(m[k + 2] >= m[k] - psi0);
}

TEST_CASE("moment tables", "[kernel]")
{
    auto g = Kernel<double>::gaussian();
    MomentTable<double> m(g, 8, 1e-12);
    CHECK(m.max_degree() == 8);
    CHECK(m[0] > 0);
    CHECK(m.symmetric());
    for (int k = 1; k <= 8; k += 2) {
        CHECK(m[k] == 0.0);
        CHECK(m.tail(k) == 0.0);
    }
    for (int k = 0; k <= 8; ++k)
        CHECK(m.tail(k) <= 1e-12);
    CHECK_NOTHROW(m.require(8));
    CHECK_THROWS_AS(m.require(9), moment_table_too_short);
    CHECK_THROWS(MomentTable<double>(g, -1, 1e-12));
}

TEST_CASE("moments are deterministic", "[kernel]")
{
    auto g = Kernel<double>::gaussian();
    for (int k = 0; k <= 10; ++k) {
        auto a = discrete_moment(g, k, 1e-12);
        auto b = discrete_moment(g, k, 1e-12);
        CHECK(std::memcmp(&a.value, &b.value, sizeof(double)) == 0);
    }
}

TEST_CASE("non-symmetric kernel from a decay certificate", "[kernel]")
{
    auto k = shifted_gaussian(0.25);
    CHECK_FALSE(k.symmetric());
    for (int order = 0; order <= 3; ++order) {
        auto m = discrete_moment(k, order, 1e-10);
        CHECK(m.tail_bound <= 1e-10);
        CHECK(std::abs(m.value - static_cast<double>(test::brute_moment(order, 50, extended(0.25)))) <= 1e-10 + m.roundoff);
    }
    // odd moments do not vanish
    CHECK(std::abs(discrete_moment(k, 1, 1e-10).value) > 0.1);
}
