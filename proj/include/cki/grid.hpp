#pragma once

#include "cki/cardinal.hpp"
#include "cki/error.hpp"
#include "cki/polynomial.hpp"
#include "cki/precision.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace cki {

/// Largest n the fit accepts at all, and the largest accepted in double precision.
inline constexpr int grid_conditioning_cap = 20;
inline constexpr int grid_standard_precision_cap = 12;

/// f_i = f(i/n), i = 0..n.
template <class Real>
class GridSamples {
public:
    explicit GridSamples(std::vector<Real> values) : values_(std::move(values))
    {
        if (values_.size() < 2)
            throw error("GridSamples: need n >= 1, i.e. at least two values");
    }

    template <class F>
    static GridSamples sample(F&& f, int n)
    {
        if (n < 1)
            throw error("GridSamples: n must be positive");
        std::vector<Real> v;
        for (int i = 0; i <= n; ++i)
            v.push_back(f(Real(i) / n));
        return GridSamples(std::move(v));
    }

    int n() const noexcept { return static_cast<int>(values_.size()) - 1; }
    const Real& operator[](int i) const { return values_.at(static_cast<std::size_t>(i)); }
    const std::vector<Real>& values() const noexcept { return values_; }

    Real max_abs() const
    {
        using std::abs;
        Real m = 0;
        for (const auto& v : values_)
            m = std::max<Real>(m, abs(v));
        return m;
    }

private:
    std::vector<Real> values_;
};

/// Degree <= n polynomial through (i/n, f_i), built in the Newton
/// forward-difference basis and expanded into monomials.
template <class Real>
Polynomial<Real> fit_polynomial(const GridSamples<Real>& samples, int cap = grid_conditioning_cap)
{
    using std::isfinite;
    const int n = samples.n();
    if (n > cap)
        throw conditioning_cap("grid size n = " + std::to_string(n) + " exceeds the conditioning cap " +
                               std::to_string(cap));
    if (!is_extended_v<Real> && n > grid_standard_precision_cap)
        throw conditioning_cap("grid size n = " + std::to_string(n) + " needs extended precision (n > " +
                               std::to_string(grid_standard_precision_cap) + ")");
    for (const auto& v : samples.values())
        if (!isfinite(to_double(v)))
            throw error("fit_polynomial: non-finite sample");

    // forward-difference table, diffs[i] = Δ^i f_0
    std::vector<Real> work = samples.values();
    std::vector<Real> diffs;
    for (int i = 0; i <= n; ++i) {
        diffs.push_back(work[0]);
        for (int m = 0; m + 1 < static_cast<int>(work.size()); ++m)
            work[static_cast<std::size_t>(m)] = work[static_cast<std::size_t>(m) + 1] - work[static_cast<std::size_t>(m)];
        work.pop_back();
    }

    // P(x) = sum_i Δ^i f_0 / (i! h^i) prod_{m<i} (x - m h), h = 1/n
    const Real h = Real(1) / n;
    Polynomial<Real> result;
    Polynomial<Real> basis = Polynomial<Real>::constant(1);
    Real denom = 1;
    for (int i = 0; i <= n; ++i) {
        if (i > 0) {
            basis = basis * Polynomial<Real>{Real(-(i - 1)) * h, Real(1)};
            denom *= Real(i) * h;
        }
        result += basis * (diffs[static_cast<std::size_t>(i)] / denom);
    }
    return result;
}

/// x -> p(x / n): coefficient c_k becomes c_k / n^k.
template <class Real>
Polynomial<Real> scale(const Polynomial<Real>& p, int n)
{
    if (n < 1)
        throw error("scale: n must be positive");
    std::vector<Real> c(p.coefficients().begin(), p.coefficients().end());
    Real f = 1;
    for (auto& v : c) {
        v /= f;
        f *= n;
    }
    return Polynomial<Real>(std::move(c));
}

template <class Real>
struct GridEvaluation {
    Real value;
    Real budget;
    bool extrapolated;
};

/// I_n[f](x) = I[S_{1/n} P_n](n x).
template <class Real>
class GridInterpolant {
public:
    GridInterpolant(const GridSamples<Real>& samples, const CardinalCoefficients<Real>& coeffs, const Real& tol)
        : n_(samples.n()),
          fitted_(fit_polynomial(samples)),
          scaled_(scale(fitted_, n_)),
          cardinal_(coeffs, scaled_, tol)
    {
    }

    int n() const noexcept { return n_; }
    const Polynomial<Real>& fitted() const noexcept { return fitted_; }
    const Polynomial<Real>& scaled() const noexcept { return scaled_; }
    const CardinalInterpolant<Real>& cardinal() const noexcept { return cardinal_; }

    GridEvaluation<Real> operator()(const Real& x) const { return evaluate(x); }

    /// Values outside [0, 1] are computed from the same formula but flagged.
    GridEvaluation<Real> evaluate(const Real& x) const
    {
        auto e = cardinal_.evaluate(x * n_);
        return {e.value, e.budget, x < 0 || x > 1};
    }

private:
    int n_;
    Polynomial<Real> fitted_;
    Polynomial<Real> scaled_;
    CardinalInterpolant<Real> cardinal_;
};

template <class Real>
GridInterpolant<Real> build_grid_interpolant(const GridSamples<Real>& samples, const CardinalCoefficients<Real>& coeffs,
                                             const Real& tol)
{
    return GridInterpolant<Real>(samples, coeffs, tol);
}

template <class Real>
GridEvaluation<Real> evaluate_grid(const GridInterpolant<Real>& interp, const Real& x)
{
    return interp.evaluate(x);
}

/// max_i |I_n[f](i/n) - f_i|
template <class Real>
Real node_residual(const GridInterpolant<Real>& interp, const GridSamples<Real>& samples)
{
    using std::abs;
    Real worst = 0;
    for (int i = 0; i <= samples.n(); ++i)
        worst = std::max<Real>(worst, abs(interp.evaluate(Real(i) / samples.n()).value - samples[i]));
    return worst;
}

} // namespace cki
