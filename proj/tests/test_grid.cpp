#include "cki/grid.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

using namespace cki;
using P = Polynomial<double>;

namespace {

const CardinalCoefficients<double>& coeffs()
{
    static const auto c = build_coefficients_triangular(Kernel<double>::gaussian(), 12, 1e-13);
    return c;
}

const CardinalCoefficients<extended>& coeffs_ext()
{
    static const auto c = build_coefficients_triangular(Kernel<extended>::gaussian(), 20, extended(1e-30));
    return c;
}

} // namespace

TEST_CASE("grid samples", "[grid]")
{
    auto s = GridSamples<double>::sample([](double x) { return 2 * x; }, 4);
    CHECK(s.n() == 4);
    CHECK(s[2] == 1.0);
    CHECK(s.max_abs() == 2.0);
    CHECK_THROWS_AS(GridSamples<double>({1.0}), error);
    CHECK_THROWS_AS(GridSamples<double>::sample([](double) { return 0.0; }, 0), error);
}

TEST_CASE("fit polynomial", "[grid]")
{
    CHECK(fit_polynomial(GridSamples<double>({0.0, 1.0, 4.0})) == P{0, 0, 4});
    CHECK(fit_polynomial(GridSamples<double>({3.0, 3.0})) == P{3});

    auto p = fit_polynomial(GridSamples<double>::sample([](double x) { return std::pow(x, 5); }, 5));
    CHECK((p - P::monomial(5)).max_abs_coefficient() <= 1e-10);
}

TEST_CASE("conditioning caps", "[grid][error]")
{
    auto s13 = GridSamples<double>::sample([](double x) { return x; }, 13);
    CHECK_THROWS_AS(fit_polynomial(s13), conditioning_cap);
    auto s13x = GridSamples<extended>::sample([](const extended& x) { return x; }, 13);
    CHECK_NOTHROW(fit_polynomial(s13x));
    auto s21 = GridSamples<extended>::sample([](const extended& x) { return x; }, 21);
    CHECK_THROWS_AS(fit_polynomial(s21), conditioning_cap);
}

TEST_CASE("polynomial exactness through the fit", "[grid][property]")
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> coef(-1, 1);
    for (int n = 1; n <= 12; ++n) {
        for (int d = 0; d <= n; d += std::max(1, n / 3)) {
            std::vector<extended> g(static_cast<std::size_t>(d) + 1);
            for (auto& v : g)
                v = coef(rng);
            Polynomial<extended> gp(g);
            auto fit = fit_polynomial(GridSamples<extended>::sample(gp, n));
            CHECK((fit - gp).max_abs_coefficient() <= extended(1e-9) * gp.max_abs_coefficient());
        }
    }
}

TEST_CASE("scale", "[grid]")
{
    CHECK(scale(P{0, 0, 1}, 2) == P{0, 0, 0.25});
    CHECK(scale(P{1}, 7) == P{1});
    auto s = scale(P{0, 0, 4}, 2);
    CHECK(s == P{0, 0, 1});
    for (int i = 0; i <= 2; ++i)
        CHECK(s(i) == std::vector<double>{0, 1, 4}[static_cast<std::size_t>(i)]);
    CHECK_THROWS(scale(P{1}, 0));
}

TEST_CASE("grid interpolant examples", "[grid]")
{
    for (int n : {1, 3, 8}) {
        auto s = GridSamples<double>::sample([](double) { return 1.0; }, n);
        auto g = build_grid_interpolant(s, coeffs(), 1e-13);
        CHECK(node_residual(g, s) <= 1e-9);
        auto half = evaluate_grid(g, 0.5);
        if (n % 2 == 0) {
            CHECK(std::abs(half.value - 1) <= half.budget + 1e-12);
        } else {
            // 0.5 n is a half-integer: sum_j psi(j - 1/2) / M_0 = (1 - 2 e^{-2 pi^2}) / (1 + 2 e^{-2 pi^2})
            const double e = 2 * std::exp(-2 * std::numbers::pi * std::numbers::pi);
            CHECK(std::abs(half.value - (1 - e) / (1 + e)) <= half.budget + 1e-14);
        }
    }

    auto lin = GridSamples<double>::sample([](double x) { return x; }, 4);
    auto gl = build_grid_interpolant(lin, coeffs(), 1e-13);
    for (int i = 0; i <= 4; ++i)
        CHECK(std::abs(gl.evaluate(i / 4.0).value - i / 4.0) <= 1e-9);

    auto sine = GridSamples<double>::sample([](double x) { return std::sin(std::numbers::pi * x); }, 8);
    auto gs = build_grid_interpolant(sine, coeffs(), 1e-13);
    for (int i = 0; i <= 8; ++i)
        CHECK(std::abs(gs.evaluate(i / 8.0).value - std::sin(std::numbers::pi * i / 8)) <= 1e-7);
}

TEST_CASE("grid regression anchors", "[grid][anchor]")
{
    // off-grid values, computed independently at 40 digits
    auto sine = GridSamples<double>::sample([](double x) { return std::sin(std::numbers::pi * x); }, 8);
    auto gs = build_grid_interpolant(sine, coeffs(), 1e-13);
    CHECK(std::abs(gs.evaluate(0.3).value - 0.80901692551675008256533) <= 1e-9);
    CHECK(std::abs(gs.evaluate(0.55).value - 0.98768828841090673560039) <= 1e-9);
    CHECK(std::abs(gs.evaluate(0.0625).value - 0.19508999264622853657525) <= 1e-9);

    auto sq = GridSamples<double>::sample([](double x) { return x * x; }, 4);
    auto gq = build_grid_interpolant(sq, coeffs(), 1e-13);
    auto direct = CardinalInterpolant<double>(coeffs(), scale(fit_polynomial(sq), 4), 1e-13).evaluate(1.2);
    CHECK(gq.evaluate(0.3).value == direct.value);
    CHECK(std::abs(direct.value - 0.0900000039936383195510992) <= 1e-12);
}

TEST_CASE("extrapolation is flagged", "[grid]")
{
    auto s = GridSamples<double>::sample([](double x) { return x; }, 2);
    auto g = build_grid_interpolant(s, coeffs(), 1e-13);
    CHECK_FALSE(g.evaluate(1.0).extrapolated);
    CHECK(g.evaluate(1.5).extrapolated);
    CHECK(g.evaluate(-0.1).extrapolated);
}

TEST_CASE("node reproduction", "[grid][property]")
{
    auto f = [](double x) { return std::exp(x) * std::cos(3 * x); };
    for (int n = 1; n <= 12; ++n) {
        auto s = GridSamples<double>::sample(f, n);
        auto g = build_grid_interpolant(s, coeffs(), 1e-13);
        CHECK(node_residual(g, s) <= 1e-7 * (1 + s.max_abs()));
    }
    auto fx = [](const extended& x) { return exp(x) * cos(3 * x); };
    for (int n : {13, 16, 20}) {
        auto s = GridSamples<extended>::sample(fx, n);
        auto g = build_grid_interpolant(s, coeffs_ext(), extended(1e-30));
        CHECK(node_residual(g, s) <= extended(1e-7) * (1 + s.max_abs()));
    }
}

TEST_CASE("truncation insensitivity", "[grid][property]")
{
    auto s = GridSamples<double>::sample([](double x) { return std::sin(std::numbers::pi * x); }, 6);
    auto coarse = build_grid_interpolant(s, coeffs(), 1e-8);
    auto fine = build_grid_interpolant(s, coeffs(), 1e-15);
    for (double x : {0.0, 0.13, 0.5, 0.77, 1.0}) {
        auto a = coarse.evaluate(x);
        auto b = fine.evaluate(x);
        CHECK(std::abs(a.value - b.value) <= a.budget);
    }
}
