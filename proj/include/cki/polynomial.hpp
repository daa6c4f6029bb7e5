#pragma once

#include "cki/binomial.hpp"
#include "cki/error.hpp"
#include "cki/precision.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cki {

/// Dense univariate polynomial with coefficients in ascending degree.
///
/// The representation is normalised: trailing zero coefficients are dropped,
/// so the zero polynomial has no coefficients and degree -1.
template <class Real>
class Polynomial {
public:
    using value_type = Real;

    Polynomial() = default;

    explicit Polynomial(std::vector<Real> coefficients) : c_(std::move(coefficients)) { trim(); }

    Polynomial(std::initializer_list<Real> coefficients) : c_(coefficients) { trim(); }

    static Polynomial constant(const Real& value) { return Polynomial(std::vector<Real>{value}); }

    /// x^k
    static Polynomial monomial(int k, const Real& scale = Real(1))
    {
        std::vector<Real> c(static_cast<std::size_t>(k) + 1, Real(0));
        c.back() = scale;
        return Polynomial(std::move(c));
    }

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }

    /// Coefficient of x^i; zero beyond the degree.
    Real operator[](int i) const
    {
        return (i >= 0 && i <= degree()) ? c_[static_cast<std::size_t>(i)] : Real(0);
    }

    std::span<const Real> coefficients() const noexcept { return c_; }

    Real leading_coefficient() const { return is_zero() ? Real(0) : c_.back(); }

    /// Horner evaluation.
    Real operator()(const Real& x) const
    {
        Real acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * x + *it;
        return acc;
    }

    /// Sum of |c_i| |x|^i, the magnitude scale for round-off estimates.
    Real abs_eval(const Real& x) const
    {
        using std::abs;
        Real ax = abs(x);
        Real acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * ax + abs(*it);
        return acc;
    }

    /// Sum of |c_i|.
    Real l1_norm() const
    {
        using std::abs;
        Real s = 0;
        for (const auto& v : c_)
            s += abs(v);
        return s;
    }

    Real max_abs_coefficient() const
    {
        using std::abs;
        Real m = 0;
        for (const auto& v : c_)
            m = std::max<Real>(m, abs(v));
        return m;
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), Real(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            c_[i] += o.c_[i];
        trim();
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), Real(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            c_[i] -= o.c_[i];
        trim();
        return *this;
    }

    Polynomial& operator*=(const Real& s)
    {
        for (auto& v : c_)
            v *= s;
        trim();
        return *this;
    }

    Polynomial& operator/=(const Real& s)
    {
        for (auto& v : c_)
            v /= s;
        trim();
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a)
    {
        for (auto& v : a.c_)
            v = -v;
        return a;
    }
    friend Polynomial operator*(Polynomial a, const Real& s) { return a *= s; }
    friend Polynomial operator*(const Real& s, Polynomial a) { return a *= s; }
    friend Polynomial operator/(Polynomial a, const Real& s) { return a /= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.is_zero() || b.is_zero())
            return {};
        std::vector<Real> c(a.c_.size() + b.c_.size() - 1, Real(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                c[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(c));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == Real(0))
            c_.pop_back();
    }

    std::vector<Real> c_;
};

/// q(x) = p(x + 1), expanded binomially.
template <class Real>
Polynomial<Real> compose_shift(const Polynomial<Real>& p)
{
    const int d = p.degree();
    if (d < 0)
        return {};
    std::vector<Real> c(static_cast<std::size_t>(d) + 1, Real(0));
    for (int i = 0; i <= d; ++i)
        for (int m = 0; m <= i; ++m)
            c[static_cast<std::size_t>(m)] += binomial<Real>(i, m) * p[i];
    return Polynomial<Real>(std::move(c));
}

/// (Δp)(x) = p(x + 1) - p(x). The leading terms cancel exactly, so the
/// degree drops by one for every non-constant p.
template <class Real>
Polynomial<Real> forward_difference(const Polynomial<Real>& p)
{
    const int d = p.degree();
    if (d <= 0)
        return {};
    std::vector<Real> c(static_cast<std::size_t>(d), Real(0));
    for (int i = 1; i <= d; ++i)
        for (int m = 0; m < i; ++m)
            c[static_cast<std::size_t>(m)] += binomial<Real>(i, m) * p[i];
    return Polynomial<Real>(std::move(c));
}

/// (2i - 1)!! with (-1)!! = 1.
template <class Real>
Real double_factorial_odd(int i)
{
    Real r = 1;
    for (int m = 2 * i - 1; m > 1; m -= 2)
        r *= m;
    return r;
}

/// Probabilists' Hermite polynomial in Rodrigues form
/// exp(x^2/2) (d/dx)^k exp(-x^2/2), so He_1(x) = -x.
template <class Real>
Polynomial<Real> hermite_he(int k)
{
    std::vector<Real> c(static_cast<std::size_t>(k) + 1, Real(0));
    for (int i = 0; 2 * i <= k; ++i) {
        Real v = binomial<Real>(k, 2 * i) * double_factorial_odd<Real>(i);
        c[static_cast<std::size_t>(k - 2 * i)] = ((k - i) % 2 == 0) ? v : Real(-v);
    }
    return Polynomial<Real>(std::move(c));
}

/// Negative-variance Hermite polynomial: same magnitudes as He_k, all positive.
template <class Real>
Polynomial<Real> hermite_ne(int k)
{
    std::vector<Real> c(static_cast<std::size_t>(k) + 1, Real(0));
    for (int i = 0; 2 * i <= k; ++i)
        c[static_cast<std::size_t>(k - 2 * i)] = binomial<Real>(k, 2 * i) * double_factorial_odd<Real>(i);
    return Polynomial<Real>(std::move(c));
}

/// Ne_k built from continuous moments: sum_i C(k, 2i) C_{2i} x^{k-2i}.
/// Equal to hermite_ne(k) when `moments` holds (k-1)!!.
template <class Real>
Polynomial<Real> moment_convolution_even(int k, std::span<const Real> moments)
{
    if (static_cast<int>(moments.size()) <= k)
        throw moment_table_too_short("moment table shorter than degree " + std::to_string(k));
    std::vector<Real> c(static_cast<std::size_t>(k) + 1, Real(0));
    for (int i = 0; 2 * i <= k; ++i)
        c[static_cast<std::size_t>(k - 2 * i)] = binomial<Real>(k, 2 * i) * moments[static_cast<std::size_t>(2 * i)];
    return Polynomial<Real>(std::move(c));
}

/// Discrete analogue of He_k: sum_i (-1)^i C(k, 2i) M_{2i} x^{k-2i}.
template <class Real>
Polynomial<Real> discrete_he(int k, std::span<const Real> moments)
{
    if (static_cast<int>(moments.size()) <= k)
        throw moment_table_too_short("moment table shorter than degree " + std::to_string(k));
    std::vector<Real> c(static_cast<std::size_t>(k) + 1, Real(0));
    for (int i = 0; 2 * i <= k; ++i) {
        Real v = binomial<Real>(k, 2 * i) * moments[static_cast<std::size_t>(2 * i)];
        c[static_cast<std::size_t>(k - 2 * i)] = (i % 2 == 0) ? v : Real(-v);
    }
    return Polynomial<Real>(std::move(c));
}

/// q_k(x) = sum_m C(k, m) M_{k-m} x^m, the discrete Ne_k. Uses every moment,
/// so it is the definition for non-symmetric kernels too.
template <class Real>
Polynomial<Real> discrete_ne(int k, std::span<const Real> moments)
{
    if (static_cast<int>(moments.size()) <= k)
        throw moment_table_too_short("moment table shorter than degree " + std::to_string(k));
    std::vector<Real> c(static_cast<std::size_t>(k) + 1, Real(0));
    for (int m = 0; m <= k; ++m)
        c[static_cast<std::size_t>(m)] = binomial<Real>(k, m) * moments[static_cast<std::size_t>(k - m)];
    return Polynomial<Real>(std::move(c));
}

/// Even-moment form of the discrete Ne_k: sum_i C(k, 2i) M_{2i} x^{k-2i}.
/// Coincides with discrete_ne exactly when the odd moments vanish.
template <class Real>
Polynomial<Real> discrete_ne_even(int k, std::span<const Real> moments)
{
    return moment_convolution_even<Real>(k, moments);
}

/// k! / (i! (k - 2i)! 2^i), the umbral weight.
template <class Real>
Real umbral_weight(int k, int i)
{
    return binomial<Real>(k, 2 * i) * double_factorial_odd<Real>(i);
}

/// sum_i w(k,i) He^*_{k-2i} with He^* the sign-normalised Hermite
/// polynomial (-1)^m He_m, which has leading coefficient +1. Equals x^k.
template <class Real>
Polynomial<Real> umbral_he_sum(int k)
{
    Polynomial<Real> acc;
    for (int i = 0; 2 * i <= k; ++i) {
        int m = k - 2 * i;
        Real sign = (m % 2 == 0) ? Real(1) : Real(-1);
        acc += hermite_he<Real>(m) * (umbral_weight<Real>(k, i) * sign);
    }
    return acc;
}

/// sum_i (-1)^i w(k,i) Ne_{k-2i}. Equals x^k.
template <class Real>
Polynomial<Real> umbral_ne_sum(int k)
{
    Polynomial<Real> acc;
    for (int i = 0; 2 * i <= k; ++i) {
        Real w = umbral_weight<Real>(k, i);
        acc += hermite_ne<Real>(k - 2 * i) * ((i % 2 == 0) ? w : Real(-w));
    }
    return acc;
}

template <class Real>
std::vector<Real> to_vector(const Polynomial<Real>& p, int min_size = 0)
{
    std::vector<Real> out(p.coefficients().begin(), p.coefficients().end());
    if (static_cast<int>(out.size()) < min_size)
        out.resize(static_cast<std::size_t>(min_size), Real(0));
    return out;
}

} // namespace cki
