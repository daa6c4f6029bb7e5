#include "cki/cardinal.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace cki;
using P = Polynomial<double>;

namespace {

const Kernel<double>& gauss()
{
    static const auto k = Kernel<double>::gaussian();
    return k;
}

const MomentTable<double>& moments()
{
    static const MomentTable<double> m(gauss(), 12, 1e-12);
    return m;
}

double coef_dev(const P& a, const P& b)
{
    return (a - b).max_abs_coefficient();
}

} // namespace

TEST_CASE("triangular coefficients, low degrees", "[cardinal]")
{
    const auto& m = moments();
    auto c = build_coefficients_triangular(gauss(), m, 4);
    CHECK(c.route() == Route::triangular);
    CHECK(c.max_degree() == 4);

    CHECK(c[0] == P{1 / m[0]});
    CHECK(coef_dev(c[1], P{0, 1 / m[0]}) <= 1e-16);
    CHECK(coef_dev(c[2], P{-m[2] / m[0] / m[0], 0, 1 / m[0]}) <= 1e-15);

    for (int k = 0; k <= 4; ++k) {
        CHECK(c[k].degree() == k);
        CHECK(std::abs(c[k].leading_coefficient() - 1 / m[0]) <= 1e-15);
    }
}

TEST_CASE("degenerate and invalid inputs", "[cardinal][error]")
{
    auto c0 = build_coefficients_triangular(gauss(), moments(), 0);
    CHECK(c0.max_degree() == 0);
    CHECK(c0[0] == P{1 / moments()[0]});

    auto zero = MomentTable<double>::from_values({0.0, 0.0, 1.0}, true);
    CHECK_THROWS_AS(build_coefficients_triangular(gauss(), zero, 2), singular_system);
    CHECK_THROWS_AS(build_coefficients_triangular(gauss(), moments(), 13), moment_table_too_short);

    CHECK_THROWS_AS(CardinalInterpolant<double>(c0, P{0, 1}, 1e-12), moment_table_too_short);
    CHECK_THROWS(CardinalInterpolant<double>(c0, P{1}, 0.0));
}

TEST_CASE("q-recursion reproduces the triangular coefficients", "[cardinal][q]")
{
    const auto& m = moments();
    auto tri = build_coefficients_triangular(gauss(), m, 12);
    auto q = build_coefficients_q(gauss(), m, 12);
    CHECK(q.route() == Route::q_he);

    CHECK(q[0] == P{m[0] / (m[0] * m[0])});
    CHECK(coef_dev(q[0], tri[0]) <= 1e-15);
    // Q_2 = (M_0 x^2 - M_2) / M_0^2 is the same polynomial as a_2
    CHECK(coef_dev(q[2], P{-m[2] / (m[0] * m[0]), 0, m[0] / (m[0] * m[0])}) <= 1e-15);
    CHECK(coef_dev(q[2], tri[2]) <= 1e-15);

    // k = 4 carries one correction term; its weight is small but nonzero
    double b41 = q_correction_weight(m, 4, 1);
    CHECK(b41 != 0.0);
    CHECK(std::abs(b41) < 1e-4);
    for (int k = 0; k <= 12; ++k)
        CHECK(coef_dev(q[k], tri[k]) <= 1e-10 * std::max(1.0, tri[k].max_abs_coefficient()));
}

TEST_CASE("correction weights vanish for continuous moments", "[cardinal][q]")
{
    auto c = MomentTable<extended>::from_values(continuous_moments<extended>(20), true);
    for (int k = 4; k <= 20; ++k)
        for (int i = 1; 4 * i <= k; ++i)
            CHECK(q_correction_weight(c, k, i) == 0);
}

TEST_CASE("q-recursion with the continuous Ne base is a different family", "[cardinal][q]")
{
    auto tri = build_coefficients_triangular(gauss(), moments(), 4);
    auto ne = build_coefficients_q(gauss(), moments(), 4, QBase::continuous_ne);
    CHECK(ne.route() == Route::q_ne);
    const double m0 = moments()[0];
    // Ne_0 = 1, Ne_1 = x: the base lacks the factor M_0
    CHECK(coef_dev(ne[0], P{1 / (m0 * m0)}) <= 1e-15);
    CHECK(coef_dev(ne[1], P{0, 1 / (m0 * m0)}) <= 1e-15);
    CHECK(coef_dev(ne[1], tri[1]) <= 1e-8);
    CHECK(coef_dev(ne[2], tri[2]) > 1.0); // constant term +1 against -M_2/M_0^2
}

TEST_CASE("q-recursion refuses non-symmetric kernels", "[cardinal][q][error]")
{
    auto k = test::shifted_gaussian(0.25);
    MomentTable<double> m(k, 4, 1e-10);
    CHECK_THROWS_AS(build_coefficients_q(k, m, 4), unsupported_method);
}

TEST_CASE("evaluation", "[cardinal]")
{
    auto c = build_coefficients_triangular(gauss(), moments(), 10);

    auto one = CardinalInterpolant<double>(c, P{1}, 1e-12).evaluate(7.0);
    CHECK(std::abs(one.value - 1) <= 1e-10);
    CHECK(one.budget <= 1e-10);

    auto cube = CardinalInterpolant<double>(c, P{0, 0, 0, 1}, 1e-12).evaluate(-3.0);
    CHECK(std::abs(cube.value + 27) <= 1e-9);

    // off-grid regression anchor, summed independently over |j| <= 30 at 40 digits
    auto half = CardinalInterpolant<double>(c, P{0, 0, 1}, 1e-12).evaluate(0.5);
    CHECK(std::abs(half.value - 0.25000041978925359659) <= 1e-12);
    CHECK(half.value != 0.25);
}

TEST_CASE("evaluation matches brute-force sums", "[cardinal][property]")
{
    auto c = build_coefficients_triangular(gauss(), moments(), 8);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> xs(-6, 6);
    for (int trial = 0; trial < 40; ++trial) {
        const int k = trial % 9;
        const double x = xs(rng);
        auto e = evaluate_monomial(c, k, x, 1e-13);
        double brute = 0;
        for (int j = -60; j <= 60; ++j)
            brute += c[k](j) * test::gauss(j - x);
        CHECK(std::abs(e.value - brute) <= e.budget + 1e-13 * std::max(1.0, std::abs(brute)));
    }
}

TEST_CASE("interpolation at integers", "[cardinal][property]")
{
    auto g = Kernel<extended>::gaussian();
    auto c = build_coefficients_triangular(g, 10, extended(1e-30));
    for (int k = 0; k <= 10; ++k) {
        for (int l = -5; l <= 5; ++l) {
            auto e = evaluate_monomial(c, k, extended(l), extended(1e-30));
            extended want = ipow(extended(l), k);
            CHECK(abs(e.value - want) <= extended(1e-9) * std::max<extended>(1, abs(want)));
        }
    }
}

TEST_CASE("interpolation with a non-symmetric kernel", "[cardinal]")
{
    auto k = test::shifted_gaussian(0.25);
    MomentTable<double> m(k, 4, 1e-10);
    CHECK(m[1] != 0.0);
    auto c = build_coefficients_triangular(k, m, 4);
    for (int d = 0; d <= 4; ++d)
        for (int l = -3; l <= 3; ++l) {
            double brute = 0;
            for (int j = -50; j <= 50; ++j)
                brute += c[d](j) * test::gauss(j - l - 0.25);
            CHECK(std::abs(brute - std::pow(l, d)) <= 1e-8 * std::max(1.0, std::pow(std::abs(l), d)));
        }
}

TEST_CASE("linearity of the coefficient map", "[cardinal][property]")
{
    auto c = build_coefficients_triangular(gauss(), moments(), 6);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> coef(-2, 2);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> pa(7), pb(7);
        for (auto& v : pa)
            v = coef(rng);
        for (auto& v : pb)
            v = coef(rng);
        P p(pa), q(pb);
        P lhs = c.combine(p + q);
        P rhs = c.combine(p) + c.combine(q);
        CHECK(coef_dev(lhs, rhs) <= 64 * epsilon<double>() * std::max(1.0, lhs.max_abs_coefficient()));
    }
}

TEST_CASE("triangular identity as a polynomial identity", "[cardinal]")
{
    auto c = build_coefficients_triangular(gauss(), moments(), 10);
    for (int k = 0; k <= 10; ++k)
        CHECK(inverse_identity_residual(c, k) <= 1e-12 * moments().max_abs());
}

TEST_CASE("shift convolution of monomials", "[cardinal][discpolyconv]")
{
    const auto& m = moments();
    auto a = verify_discpolyconv(gauss(), m, 0, 5, 1e-13);
    CHECK(std::abs(a.lhs - m[0]) <= 1e-12);
    CHECK(std::abs(a.rhs - m[0]) <= 1e-15);

    auto b = verify_discpolyconv(gauss(), m, 2, 0, 1e-13);
    CHECK(std::abs(b.lhs - m[2]) <= 1e-12);
    CHECK(b.rhs == m[2]);

    auto c = verify_discpolyconv(gauss(), m, 3, 2, 1e-13);
    CHECK(c.deviation() <= 1e-10);
    CHECK(c.deviation() <= c.budget);
}

TEST_CASE("generating-function identity", "[cardinal][th_interp]")
{
    auto c = build_coefficients_triangular(gauss(), moments(), 8);
    auto a = verify_th_interp(c, 0, 0.0, 1e-13);
    CHECK(std::abs(a.lhs - moments()[0]) <= 1e-12);
    CHECK(std::abs(a.rhs - moments()[0]) <= 1e-12);

    CHECK(verify_th_interp(c, 1, 0.5, 1e-13).deviation() <= 1e-10);

    auto g = Kernel<extended>::gaussian();
    auto cx = build_coefficients_triangular(g, 6, extended(1e-30));
    CHECK(verify_th_interp(cx, 5, extended(-1.7), extended(1e-30)).deviation() <= extended(1e-8));
}

TEST_CASE("error recursion", "[cardinal][error-recursion]")
{
    auto c = build_coefficients_triangular(gauss(), moments(), 8);
    for (int k = 0; k <= 6; ++k) {
        auto e = error_functions(c, k, 3.0, 1e-13);
        CHECK(std::abs(e.error) <= 1e-10 * std::max(1.0, std::pow(3.0, k)));
    }
    auto e0 = error_functions(c, 0, 0.37, 1e-13);
    CHECK(std::abs(e0.chi - moments()[0] * e0.error) <= 1e-12);
    CHECK(std::abs(e0.chi_from_errors - moments()[0] * e0.error) <= 1e-15);

    auto e2 = error_functions(c, 2, 0.3, 1e-13);
    CHECK(std::abs(e2.chi - e2.chi_from_errors) <= 1e-9);
    CHECK(std::abs(e2.error) > 1e-9); // off-grid, the interpolant is not exact
}
