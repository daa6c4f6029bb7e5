#pragma once

#include "cki/error.hpp"
#include "cki/precision.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cki {

/// Largest truncation radius any certificate search may return.
inline constexpr int max_truncation_radius = 200;

/// A positive, rapidly decaying kernel with certified tail bounds.
///
/// Two certificates are carried:
///  - moment_tail(d, R)  >= sum_{|j| > R} |j|^d psi(j)
///  - shifted_tail(d, R) >= sup_{|s| <= 1/2} sum_{|t| > R} (1 + |t|)^d psi(t + s)
/// The second bounds truncated sums centred at round(x) for non-integer x.
/// Both may return +infinity for radii they do not cover.
template <class Real>
class Kernel {
public:
    enum class Family { gaussian, user };

    using Evaluator = std::function<Real(const Real&)>;
    using TailCertificate = std::function<Real(int degree, int radius)>;
    using DecayCertificate = std::function<Real(int exponent)>;

    /// psi(x) = exp(-x^2/2) / sqrt(2 pi)
    static Kernel gaussian()
    {
        Kernel k;
        k.family_ = Family::gaussian;
        k.name_ = "gaussian";
        k.symmetric_ = true;
        k.eval_ = [](const Real& x) {
            using std::exp;
            using std::sqrt;
            return Real(exp(-x * x / 2) / sqrt(2 * pi<Real>()));
        };
        k.moment_tail_ = [](int d, int r) { return gaussian_moment_tail(d, r); };
        k.shifted_tail_ = [](int d, int r) { return gaussian_shifted_tail(d, r); };
        return k;
    }

    /// User kernel with explicit tail certificates.
    static Kernel custom(std::string name, Evaluator eval, TailCertificate moment_tail,
                         TailCertificate shifted_tail, bool symmetric)
    {
        Kernel k;
        k.family_ = Family::user;
        k.name_ = std::move(name);
        k.symmetric_ = symmetric;
        k.eval_ = std::move(eval);
        k.moment_tail_ = std::move(moment_tail);
        k.shifted_tail_ = std::move(shifted_tail);
        return k;
    }

    /// User kernel from a decay certificate N -> C_N with
    /// |psi(x)| <= C_N / (1 + |x|^N). Tails follow from comparing with
    /// sum_{j > R} j^{-p} <= R^{1-p} / (p - 1), minimised over N.
    static Kernel from_decay_certificate(std::string name, Evaluator eval, DecayCertificate decay,
                                         bool symmetric, int max_extra_exponent = 40)
    {
        auto moment = [decay, max_extra_exponent](int d, int r) {
            using std::pow;
            Real best = std::numeric_limits<Real>::infinity();
            if (r < 1)
                return best;
            for (int p = 2; p <= max_extra_exponent; ++p) {
                Real b = 2 * decay(d + p) * pow(Real(r), Real(1 - p)) / (p - 1);
                best = std::min(best, b);
            }
            return best;
        };
        auto shifted = [decay, max_extra_exponent](int d, int r) {
            using std::pow;
            Real best = std::numeric_limits<Real>::infinity();
            if (r < 1)
                return best;
            for (int p = 2; p <= max_extra_exponent; ++p) {
                int n = d + p;
                Real b = 2 * ipow(Real(2), d + n) * decay(n) * pow(Real(r), Real(1 - p)) / (p - 1);
                best = std::min(best, b);
            }
            return best;
        };
        return custom(std::move(name), std::move(eval), moment, shifted, symmetric);
    }

    Real operator()(const Real& x) const { return eval_(x); }

    Family family() const noexcept { return family_; }
    const std::string& name() const noexcept { return name_; }
    bool symmetric() const noexcept { return symmetric_; }
    bool is_gaussian() const noexcept { return family_ == Family::gaussian; }

    Real moment_tail(int degree, int radius) const { return moment_tail_(degree, radius); }
    Real shifted_tail(int degree, int radius) const { return shifted_tail_(degree, radius); }

    /// 2 R^d e^{-R^2/2} / ((1 - e^{-R}) sqrt(2 pi)), valid for R >= max(d, 2).
    static Real gaussian_moment_tail(int d, int r)
    {
        using std::exp;
        using std::sqrt;
        if (r < std::max(d, 2))
            return std::numeric_limits<Real>::infinity();
        Real rr = r;
        return 2 * ipow(rr, d) * exp(-rr * rr / 2) / ((1 - exp(-rr)) * sqrt(2 * pi<Real>()));
    }

    /// 2 (R+2)^d e^{-(R+1/2)^2/2} / ((1 - e^{-R}) sqrt(2 pi)), valid for R >= max(d, 2).
    /// Consecutive terms (1+t)^d psi(t - 1/2) shrink by at least e^{-R} past R.
    static Real gaussian_shifted_tail(int d, int r)
    {
        using std::exp;
        using std::sqrt;
        if (r < std::max(d, 2))
            return std::numeric_limits<Real>::infinity();
        Real rr = r;
        Real h = rr + Real(1) / 2;
        return 2 * ipow(rr + 2, d) * exp(-h * h / 2) / ((1 - exp(-rr)) * sqrt(2 * pi<Real>()));
    }

private:
    Kernel() = default;

    Family family_ = Family::user;
    std::string name_;
    bool symmetric_ = false;
    Evaluator eval_;
    TailCertificate moment_tail_;
    TailCertificate shifted_tail_;
};

/// Smallest R in [max(degree, 2), 200] whose certified moment tail is <= tol.
template <class Real>
int truncation_radius(const Kernel<Real>& kernel, int degree, const Real& tol)
{
    if (!(tol > 0))
        throw error("truncation_radius: tolerance must be positive");
    Real best = std::numeric_limits<Real>::infinity();
    for (int r = std::max(degree, 2); r <= max_truncation_radius; ++r) {
        Real b = kernel.moment_tail(degree, r);
        if (b <= tol)
            return r;
        best = std::min(best, b);
    }
    throw tail_not_certifiable("tail not certifiable for degree " + std::to_string(degree) +
                                   " within radius " + std::to_string(max_truncation_radius),
                               to_double(best), degree);
}

/// Smallest R in [max(degree, 2), 200] with scale * shifted_tail(degree, R) <= tol.
template <class Real>
int shifted_truncation_radius(const Kernel<Real>& kernel, int degree, const Real& tol,
                              const Real& scale = Real(1))
{
    if (!(tol > 0))
        throw error("shifted_truncation_radius: tolerance must be positive");
    Real best = std::numeric_limits<Real>::infinity();
    for (int r = std::max(degree, 2); r <= max_truncation_radius; ++r) {
        Real b = scale * kernel.shifted_tail(degree, r);
        if (b <= tol)
            return r;
        best = std::min(best, b);
    }
    throw tail_not_certifiable("shifted tail not certifiable for degree " + std::to_string(degree),
                               to_double(best), degree);
}

template <class Real>
struct MomentValue {
    Real value;
    Real tail_bound; // truncation certificate: |value - M_k| <= tail_bound (+ round-off)
    int radius;
    Real roundoff;   // (number of summands) * eps * sum of |terms|
};

/// M_k = sum_j j^k psi(j), summed in symmetric pairs of ascending |j|.
/// Odd moments of symmetric kernels are exactly zero.
template <class Real>
MomentValue<Real> discrete_moment(const Kernel<Real>& kernel, int k, const Real& tol)
{
    using std::abs;
    if (k < 0)
        throw error("discrete_moment: negative order");
    if (!(tol > 0))
        throw error("discrete_moment: tolerance must be positive");
    if (kernel.symmetric() && k % 2 == 1)
        return {Real(0), Real(0), 0, Real(0)};

    const int r = truncation_radius(kernel, k, tol);
    Real sum = (k == 0) ? kernel(Real(0)) : Real(0);
    Real mag = abs(sum);
    for (int j = 1; j <= r; ++j) {
        Real jp = ipow(Real(j), k);
        Real pair;
        if (kernel.symmetric()) {
            pair = 2 * jp * kernel(Real(j));
        } else {
            Real jm = (k % 2 == 0) ? jp : Real(-jp);
            pair = jp * kernel(Real(j)) + jm * kernel(Real(-j));
        }
        sum += pair;
        mag += abs(pair);
    }
    return {sum, kernel.moment_tail(k, r), r, Real(2 * r + 2) * epsilon<Real>() * mag};
}

/// C_k = integral y^k psi(y) dy for the normalised Gaussian: (k-1)!! for even k.
template <class Real>
Real continuous_moment(int k)
{
    if (k < 0)
        throw error("continuous_moment: negative order");
    if (k % 2 == 1)
        return Real(0);
    Real r = 1;
    for (int m = k - 1; m > 1; m -= 2)
        r *= m;
    return r;
}

template <class Real>
std::vector<Real> continuous_moments(int max_degree)
{
    std::vector<Real> out;
    for (int k = 0; k <= max_degree; ++k)
        out.push_back(continuous_moment<Real>(k));
    return out;
}

/// Discrete moments M_0..M_N of one kernel, each independently certified.
template <class Real>
class MomentTable {
public:
    MomentTable(const Kernel<Real>& kernel, int max_degree, const Real& tol)
        : symmetric_(kernel.symmetric()), tol_(tol)
    {
        if (max_degree < 0)
            throw error("MomentTable: negative max degree");
        for (int k = 0; k <= max_degree; ++k) {
            auto m = discrete_moment(kernel, k, tol);
            values_.push_back(m.value);
            tails_.push_back(m.tail_bound);
            radii_.push_back(m.radius);
            roundoff_.push_back(m.roundoff);
        }
        if (!(values_[0] > 0))
            throw singular_system("MomentTable: M_0 is not positive", 0.0);
    }

    /// Table over explicit values (e.g. continuous moments); tails are zero.
    static MomentTable from_values(std::vector<Real> values, bool symmetric)
    {
        MomentTable t;
        t.symmetric_ = symmetric;
        t.tol_ = 0;
        t.values_ = std::move(values);
        t.tails_.assign(t.values_.size(), Real(0));
        t.radii_.assign(t.values_.size(), 0);
        t.roundoff_.assign(t.values_.size(), Real(0));
        return t;
    }

    int max_degree() const noexcept { return static_cast<int>(values_.size()) - 1; }
    bool symmetric() const noexcept { return symmetric_; }
    const Real& tolerance() const noexcept { return tol_; }

    const Real& operator[](int k) const { return values_.at(static_cast<std::size_t>(k)); }
    const Real& tail(int k) const { return tails_.at(static_cast<std::size_t>(k)); }
    int radius(int k) const { return radii_.at(static_cast<std::size_t>(k)); }
    const Real& roundoff(int k) const { return roundoff_.at(static_cast<std::size_t>(k)); }

    std::span<const Real> values() const noexcept { return values_; }

    Real max_abs() const
    {
        using std::abs;
        Real m = 0;
        for (const auto& v : values_)
            m = std::max<Real>(m, abs(v));
        return m;
    }

    void require(int degree) const
    {
        if (degree > max_degree())
            throw moment_table_too_short("moment table covers degree " + std::to_string(max_degree()) +
                                         ", need " + std::to_string(degree));
    }

private:
    MomentTable() = default;

    bool symmetric_ = false;
    Real tol_ = 0;
    std::vector<Real> values_;
    std::vector<Real> tails_;
    std::vector<int> radii_;
    std::vector<Real> roundoff_;
};

} // namespace cki
