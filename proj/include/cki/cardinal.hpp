#pragma once

#include "cki/binomial.hpp"
#include "cki/error.hpp"
#include "cki/evaluation.hpp"
#include "cki/kernel.hpp"
#include "cki/polynomial.hpp"
#include "cki/precision.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cki {

enum class Route { triangular, q_he, q_ne, spectral, toeplitz };

inline const char* to_string(Route r)
{
    switch (r) {
    case Route::triangular: return "triangular";
    case Route::q_he: return "q-he";
    case Route::q_ne: return "q-ne";
    case Route::spectral: return "spectral";
    case Route::toeplitz: return "toeplitz";
    }
    return "?";
}

inline std::optional<Route> parse_route(std::string_view name)
{
    for (Route r : {Route::triangular, Route::q_he, Route::q_ne, Route::spectral, Route::toeplitz})
        if (name == to_string(r))
            return r;
    return std::nullopt;
}

/// sum_j f(j) psi(j - x) over |j - round(x)| <= R, where the caller
/// guarantees |f(j)| <= scale * (1 + |j - round(x)|)^degree.
template <class Real, class F>
Evaluation<Real> shifted_kernel_sum(const Kernel<Real>& kernel, F&& f, int degree, const Real& scale,
                                    const Real& x, const Real& tol)
{
    using std::abs;
    using std::round;
    const Real centre_real = round(x);
    const long centre = static_cast<long>(to_double(centre_real));
    const int r = shifted_truncation_radius(kernel, degree, tol, scale);
    Real sum = 0;
    Real mag = 0;
    // ascending |t| so the small far terms are added last in each pair
    {
        Real term = f(Real(centre)) * kernel(Real(centre) - x);
        sum += term;
        mag += abs(term);
    }
    for (int t = 1; t <= r; ++t) {
        Real jp = Real(centre + t);
        Real jm = Real(centre - t);
        Real pair = f(jp) * kernel(jp - x) + f(jm) * kernel(jm - x);
        sum += pair;
        mag += abs(f(jp)) * kernel(jp - x) + abs(f(jm)) * kernel(jm - x);
    }
    Real tail = scale * kernel.shifted_tail(degree, r);
    Real roundoff = Real(2 * r + 2 * degree + 4) * epsilon<Real>() * mag;
    return {sum, tail + roundoff};
}

/// The coefficient polynomials a_0..a_N with I[p_k](x) = sum_j a_k(j) psi(j - x).
template <class Real>
class CardinalCoefficients {
public:
    CardinalCoefficients(Kernel<Real> kernel, MomentTable<Real> moments, std::vector<Polynomial<Real>> polys,
                         Route route)
        : kernel_(std::move(kernel)), moments_(std::move(moments)), polys_(std::move(polys)), route_(route)
    {
    }

    int max_degree() const noexcept { return static_cast<int>(polys_.size()) - 1; }
    const Polynomial<Real>& operator[](int k) const { return polys_.at(static_cast<std::size_t>(k)); }
    const std::vector<Polynomial<Real>>& polynomials() const noexcept { return polys_; }
    const Kernel<Real>& kernel() const noexcept { return kernel_; }
    const MomentTable<Real>& moments() const noexcept { return moments_; }
    Route route() const noexcept { return route_; }

    /// a_p = sum_k c_k a_k for p = sum_k c_k x^k.
    Polynomial<Real> combine(const Polynomial<Real>& p) const
    {
        if (p.degree() > max_degree())
            throw moment_table_too_short("target degree " + std::to_string(p.degree()) +
                                         " exceeds coefficient family degree " + std::to_string(max_degree()));
        Polynomial<Real> acc;
        for (int k = 0; k <= p.degree(); ++k)
            if (p[k] != Real(0))
                acc += polys_[static_cast<std::size_t>(k)] * p[k];
        return acc;
    }

private:
    Kernel<Real> kernel_;
    MomentTable<Real> moments_;
    std::vector<Polynomial<Real>> polys_;
    Route route_;
};

/// Forward substitution in x^k = sum_i C(k,i) M_{k-i} a_i(x):
/// a_k = (x^k - sum_{i<k} C(k,i) M_{k-i} a_i) / M_0.
template <class Real>
CardinalCoefficients<Real> build_coefficients_triangular(const Kernel<Real>& kernel, const MomentTable<Real>& moments,
                                                         int max_degree)
{
    if (max_degree < 0)
        throw error("build_coefficients_triangular: negative degree");
    moments.require(max_degree);
    const Real m0 = moments[0];
    if (m0 == Real(0))
        throw singular_system("M_0 = 0: triangular system is singular", 0.0);

    std::vector<Polynomial<Real>> a;
    a.reserve(static_cast<std::size_t>(max_degree) + 1);
    for (int k = 0; k <= max_degree; ++k) {
        Polynomial<Real> rhs = Polynomial<Real>::monomial(k);
        for (int i = 0; i < k; ++i) {
            Real w = binomial<Real>(k, i) * moments[k - i];
            if (w != Real(0))
                rhs -= a[static_cast<std::size_t>(i)] * w;
        }
        a.push_back(rhs / m0);
    }
    return {kernel, moments, std::move(a), Route::triangular};
}

template <class Real>
CardinalCoefficients<Real> build_coefficients_triangular(const Kernel<Real>& kernel, int max_degree, const Real& tol)
{
    return build_coefficients_triangular(kernel, MomentTable<Real>(kernel, max_degree, tol), max_degree);
}

/// Correction weight B_{k,i} = sum_{m=0}^{2i} (-1)^m C(k,2m) C(k-2m,4i-2m) M_{2m} M_{4i-2m}.
/// sum_j H~e_k(j) psi(j - l) = M_0^2 l^k + sum_{i>=1} B_{k,i} l^{k-4i}.
template <class Real>
Real q_correction_weight(const MomentTable<Real>& moments, int k, int i)
{
    Real s = 0;
    for (int m = 0; m <= 2 * i; ++m) {
        Real term = binomial<Real>(k, 2 * m) * binomial<Real>(k - 2 * m, 4 * i - 2 * m) * moments[2 * m] *
                    moments[4 * i - 2 * m];
        s += (m % 2 == 0) ? term : Real(-term);
    }
    return s;
}

enum class QBase { discrete_he, continuous_ne };

/// Q_k = (base_k - sum_{i=1}^{k/4} B_{k,i} Q_{k-4i}) / M_0^2 for symmetric kernels.
/// base_k = H~e_k reproduces the triangular route; continuous Ne_k is the
/// literal reading of the closed form and is kept for comparison.
template <class Real>
CardinalCoefficients<Real> build_coefficients_q(const Kernel<Real>& kernel, const MomentTable<Real>& moments,
                                                int max_degree, QBase base = QBase::discrete_he)
{
    if (!kernel.symmetric() || !moments.symmetric())
        throw unsupported_method("q-recursion needs a symmetric kernel; use the triangular route");
    if (max_degree < 0)
        throw error("build_coefficients_q: negative degree");
    moments.require(max_degree);
    const Real m0sq = moments[0] * moments[0];
    if (m0sq == Real(0))
        throw singular_system("M_0 = 0: q-recursion is singular", 0.0);

    std::vector<Polynomial<Real>> q;
    for (int k = 0; k <= max_degree; ++k) {
        Polynomial<Real> acc =
            base == QBase::discrete_he ? discrete_he<Real>(k, moments.values()) : hermite_ne<Real>(k);
        for (int i = 1; 4 * i <= k; ++i)
            acc -= q[static_cast<std::size_t>(k - 4 * i)] * q_correction_weight(moments, k, i);
        q.push_back(acc / m0sq);
    }
    return {kernel, moments, std::move(q), base == QBase::discrete_he ? Route::q_he : Route::q_ne};
}

/// I[p] for a polynomial target p, evaluated by certified truncated sums.
template <class Real>
class CardinalInterpolant {
public:
    CardinalInterpolant(CardinalCoefficients<Real> coeffs, Polynomial<Real> target, Real tol)
        : coeffs_(std::move(coeffs)), target_(std::move(target)), tol_(tol)
    {
        if (!(tol_ > 0))
            throw error("CardinalInterpolant: tolerance must be positive");
        ap_ = coeffs_.combine(target_);
    }

    const CardinalCoefficients<Real>& coefficients() const noexcept { return coeffs_; }
    const Polynomial<Real>& target() const noexcept { return target_; }
    /// The coefficient polynomial a_p of the target.
    const Polynomial<Real>& coefficient_polynomial() const noexcept { return ap_; }
    const Real& tolerance() const noexcept { return tol_; }

    Evaluation<Real> operator()(const Real& x) const { return evaluate(x); }

    /// sum_{|j - round(x)| <= R} a_p(j) psi(j - x)
    Evaluation<Real> evaluate(const Real& x) const
    {
        using std::abs;
        using std::round;
        const int d = std::max(ap_.degree(), 0);
        // |a_p(j)| <= |a_p|_1 (1 + |round(x)|)^d (1 + |t|)^d
        const Real scale = std::max<Real>(ap_.l1_norm(), Real(0)) * ipow(Real(1) + abs(round(x)), d);
        if (ap_.is_zero())
            return {Real(0), Real(0)};
        return shifted_kernel_sum(coeffs_.kernel(), [this](const Real& j) { return ap_(j); }, d, scale, x, tol_);
    }

private:
    CardinalCoefficients<Real> coeffs_;
    Polynomial<Real> target_;
    Real tol_;
    Polynomial<Real> ap_;
};

template <class Real>
Evaluation<Real> evaluate(const CardinalInterpolant<Real>& interp, const Real& x)
{
    return interp.evaluate(x);
}

/// I[p_k](x) straight from a coefficient family.
template <class Real>
Evaluation<Real> evaluate_monomial(const CardinalCoefficients<Real>& coeffs, int k, const Real& x, const Real& tol)
{
    return CardinalInterpolant<Real>(coeffs, Polynomial<Real>::monomial(k), tol).evaluate(x);
}

/// sum_j (j - x)^k psi(j - x)
template <class Real>
Evaluation<Real> centred_moment_sum(const Kernel<Real>& kernel, int k, const Real& x, const Real& tol)
{
    // |j - x| <= 1/2 + |t| <= 1 + |t|
    return shifted_kernel_sum(kernel, [&x, k](const Real& j) { return ipow(Real(j - x), k); }, k, Real(1), x, tol);
}

/// Both sides of sum_j j^k psi(j - l) = sum_i C(k,i) M_{k-i} l^i.
/// The left side is summed directly; the right side uses the moment table.
template <class Real>
IdentityCheck<Real> verify_discpolyconv(const Kernel<Real>& kernel, const MomentTable<Real>& moments, int k, long ell,
                                        const Real& tol)
{
    using std::abs;
    moments.require(k);
    const Real l = Real(ell);
    const Real scale = ipow(Real(1) + abs(l), k);
    auto lhs = shifted_kernel_sum(kernel, [k](const Real& j) { return ipow(j, k); }, k, scale, l, tol);
    Real rhs = 0;
    Real rhs_budget = 0;
    for (int i = 0; i <= k; ++i) {
        Real w = binomial<Real>(k, i) * ipow(l, i);
        rhs += w * moments[k - i];
        rhs_budget += abs(w) * (moments.tail(k - i) + moments.roundoff(k - i) + 4 * epsilon<Real>() * abs(moments[k - i]));
    }
    return {lhs.value, rhs, lhs.budget + rhs_budget};
}

/// Both sides of sum_j (j-x)^k psi(j-x) = sum_i C(k,i) q_i(-x) I[p_{k-i}](x).
template <class Real>
IdentityCheck<Real> verify_th_interp(const CardinalCoefficients<Real>& coeffs, int k, const Real& x, const Real& tol)
{
    using std::abs;
    const auto& m = coeffs.moments();
    m.require(k);
    auto lhs = centred_moment_sum(coeffs.kernel(), k, x, tol);
    Real rhs = 0;
    Real budget = lhs.budget;
    for (int i = 0; i <= k; ++i) {
        Real qi = discrete_ne<Real>(i, m.values())(-x);
        auto interp = evaluate_monomial(coeffs, k - i, x, tol);
        Real w = binomial<Real>(k, i) * qi;
        rhs += w * interp.value;
        budget += abs(w) * interp.budget;
    }
    return {lhs.value, rhs, budget};
}

template <class Real>
struct ErrorFunctions {
    Real error;            // E_k(x) = I[p_k](x) - x^k
    Real chi;              // chi_k(x) = sum_j (j-x)^k psi(j-x) - M_k
    Real chi_from_errors;  // sum_i C(k,i) q_i(-x) E_{k-i}(x)
    Real budget;
};

/// E_k and chi_k at x, plus the right-hand side of the error recursion
/// chi_k = sum_i C(k,i) q_i(-x) E_{k-i}.
template <class Real>
ErrorFunctions<Real> error_functions(const CardinalCoefficients<Real>& coeffs, int k, const Real& x, const Real& tol)
{
    using std::abs;
    const auto& m = coeffs.moments();
    m.require(k);
    std::vector<Evaluation<Real>> errs;
    for (int i = 0; i <= k; ++i) {
        auto e = evaluate_monomial(coeffs, i, x, tol);
        errs.push_back({e.value - ipow(x, i), e.budget});
    }
    auto centred = centred_moment_sum(coeffs.kernel(), k, x, tol);
    Real chi = centred.value - m[k];
    Real rhs = 0;
    Real budget = centred.budget + m.tail(k);
    for (int i = 0; i <= k; ++i) {
        Real w = binomial<Real>(k, i) * discrete_ne<Real>(i, m.values())(-x);
        rhs += w * errs[static_cast<std::size_t>(k - i)].value;
        budget += abs(w) * errs[static_cast<std::size_t>(k - i)].budget;
    }
    return {errs[static_cast<std::size_t>(k)].value, chi, rhs, budget};
}

/// Coefficient-wise residual of x^k - sum_i C(k,i) M_{k-i} a_i(x); returns max |residual coefficient|.
template <class Real>
Real inverse_identity_residual(const CardinalCoefficients<Real>& coeffs, int k)
{
    const auto& m = coeffs.moments();
    Polynomial<Real> r = Polynomial<Real>::monomial(k);
    for (int i = 0; i <= k; ++i)
        r -= coeffs[i] * (binomial<Real>(k, i) * m[k - i]);
    return r.max_abs_coefficient();
}

/// Values a_p(j) for j in [first, last].
template <class Real>
std::vector<Real> coefficient_sequence(const Polynomial<Real>& ap, long first, long last)
{
    std::vector<Real> out;
    for (long j = first; j <= last; ++j)
        out.push_back(ap(Real(j)));
    return out;
}

} // namespace cki
