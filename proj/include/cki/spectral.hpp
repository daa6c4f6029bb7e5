#pragma once

#include "cki/error.hpp"
#include "cki/evaluation.hpp"
#include "cki/kernel.hpp"
#include "cki/precision.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cki {

namespace detail {

/// In-place iterative radix-2 transform:
/// X_k = sum_r x_r exp(sign * 2 pi i k r / m).
template <class Real>
void fft(std::vector<Real>& re, std::vector<Real>& im, int sign)
{
    using std::cos;
    using std::sin;
    const std::size_t m = re.size();
    if (m == 0 || (m & (m - 1)) != 0)
        throw error("fft: length must be a power of two");

    for (std::size_t i = 1, j = 0; i < m; ++i) {
        std::size_t bit = m >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j) {
            std::swap(re[i], re[j]);
            std::swap(im[i], im[j]);
        }
    }

    // twiddles for the full length, reused by every stage
    std::vector<Real> wr(m / 2), wi(m / 2);
    const Real base = 2 * pi<Real>() / Real(m);
    for (std::size_t k = 0; k < m / 2; ++k) {
        wr[k] = cos(base * Real(k));
        wi[k] = sign * sin(base * Real(k));
    }

    for (std::size_t len = 2; len <= m; len <<= 1) {
        const std::size_t stride = m / len;
        for (std::size_t s = 0; s < m; s += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Real& c = wr[k * stride];
                const Real& d = wi[k * stride];
                std::size_t a = s + k;
                std::size_t b = a + len / 2;
                Real tr = re[b] * c - im[b] * d;
                Real ti = re[b] * d + im[b] * c;
                re[b] = re[a] - tr;
                im[b] = im[a] - ti;
                re[a] += tr;
                im[a] += ti;
            }
        }
    }
}

inline std::size_t wrap(long z, std::size_t m)
{
    long r = z % static_cast<long>(m);
    return static_cast<std::size_t>(r < 0 ? r + static_cast<long>(m) : r);
}

} // namespace detail

/// Default certified tail for the periodised symbol in a given precision.
template <class Real>
Real default_symbol_tail()
{
    return std::min<Real>(Real(1e-14), 100 * epsilon<Real>());
}

/// Samples of psi~(t) = sum_z psi(z) e^{2 pi i z t} at t_r = r/m.
template <class Real>
class PeriodizedSymbol {
public:
    int size() const noexcept { return static_cast<int>(re_.size()); }
    const std::vector<Real>& real_part() const noexcept { return re_; }
    const std::vector<Real>& imag_part() const noexcept { return im_; }
    const Real& tail() const noexcept { return tail_; }
    int radius() const noexcept { return radius_; }
    bool symmetric() const noexcept { return symmetric_; }

    Real modulus(int r) const
    {
        using std::sqrt;
        auto i = static_cast<std::size_t>(r);
        return sqrt(re_[i] * re_[i] + im_[i] * im_[i]);
    }

    const Real& min_modulus() const noexcept { return min_modulus_; }
    Real argmin() const { return Real(argmin_index_) / Real(size()); }
    int argmin_index() const noexcept { return argmin_index_; }
    /// Sample spacing 1/m, the resolution of the minimum search.
    Real spacing() const { return Real(1) / Real(size()); }
    bool wiener() const { return min_modulus_ > 10 * tail_; }

    /// Symbol from raw samples; the tail certificate is zero.
    static PeriodizedSymbol from_samples(std::vector<Real> re, std::vector<Real> im, bool symmetric = false)
    {
        if (re.size() != im.size())
            throw error("PeriodizedSymbol: real/imaginary sizes differ");
        PeriodizedSymbol s;
        s.re_ = std::move(re);
        s.im_ = std::move(im);
        s.symmetric_ = symmetric;
        s.tail_ = 0;
        s.radius_ = 0;
        s.locate_minimum();
        return s;
    }

    template <class R>
    friend PeriodizedSymbol<R> periodize(const Kernel<R>& kernel, int m, const R& tail_tol);

private:
    void locate_minimum()
    {
        min_modulus_ = std::numeric_limits<Real>::infinity();
        for (int r = 0; r < size(); ++r) {
            Real v = modulus(r);
            if (v < min_modulus_) {
                min_modulus_ = v;
                argmin_index_ = r;
            }
        }
    }

    std::vector<Real> re_;
    std::vector<Real> im_;
    Real tail_ = 0;
    int radius_ = 0;
    bool symmetric_ = false;
    Real min_modulus_ = 0;
    int argmin_index_ = 0;
};

template <class Real>
PeriodizedSymbol<Real> periodize(const Kernel<Real>& kernel, int m, const Real& tail_tol)
{
    if (m < 64 || (m & (m - 1)) != 0)
        throw error("periodize: m must be a power of two >= 64");
    const int r = truncation_radius(kernel, 0, tail_tol);
    if (2 * r + 1 > m)
        throw error("periodize: truncation radius does not fit in m samples");

    std::vector<Real> re(static_cast<std::size_t>(m), Real(0)), im(static_cast<std::size_t>(m), Real(0));
    for (int z = -r; z <= r; ++z)
        re[detail::wrap(z, static_cast<std::size_t>(m))] += kernel(Real(z));
    detail::fft(re, im, +1);
    if (kernel.symmetric())
        std::fill(im.begin(), im.end(), Real(0));

    PeriodizedSymbol<Real> s;
    s.re_ = std::move(re);
    s.im_ = std::move(im);
    s.tail_ = kernel.moment_tail(0, r);
    s.radius_ = r;
    s.symmetric_ = kernel.symmetric();
    s.locate_minimum();
    return s;
}

template <class Real>
PeriodizedSymbol<Real> periodize(const Kernel<Real>& kernel, int m = 4096)
{
    return periodize(kernel, m, default_symbol_tail<Real>());
}

/// Direct evaluation of psi~(t) by truncated summation (real and imaginary parts).
template <class Real>
std::pair<Real, Real> symbol_at(const Kernel<Real>& kernel, const Real& t, const Real& tail_tol)
{
    using std::cos;
    using std::sin;
    const int r = truncation_radius(kernel, 0, tail_tol);
    Real re = kernel(Real(0));
    Real im = 0;
    for (int z = 1; z <= r; ++z) {
        Real arg = 2 * pi<Real>() * Real(z) * t;
        Real p = kernel(Real(z));
        Real q = kernel(Real(-z));
        re += (p + q) * cos(arg);
        im += (p - q) * sin(arg);
    }
    return {re, im};
}

template <class Real>
struct WienerCheck {
    bool holds;
    Real min_modulus;
    Real argmin;
};

/// Reports the minimum modulus over the sample grid; this is evidence, not a
/// proof, that psi~ has no zero on [0, 1].
template <class Real>
WienerCheck<Real> check_wiener(const PeriodizedSymbol<Real>& sym)
{
    return {sym.wiener(), sym.min_modulus(), sym.argmin()};
}

/// Fourier coefficients a_z, |z| <= z_max, of 1/psi~.
template <class Real>
class ReciprocalCoefficients {
public:
    ReciprocalCoefficients(int z_max, std::vector<Real> re, std::vector<Real> im, Real residual)
        : z_max_(z_max), re_(std::move(re)), im_(std::move(im)), residual_(residual)
    {
    }

    int z_max() const noexcept { return z_max_; }
    /// Real part of a_z (the coefficients are real for real kernels); zero outside |z| <= z_max.
    Real operator[](long z) const
    {
        if (z < -z_max_ || z > z_max_)
            return Real(0);
        return re_[static_cast<std::size_t>(z + z_max_)];
    }
    Real imag(long z) const
    {
        if (z < -z_max_ || z > z_max_)
            return Real(0);
        return im_[static_cast<std::size_t>(z + z_max_)];
    }
    const std::vector<Real>& values() const noexcept { return re_; }

    /// max_r |sum_{|z|<=z_max} a_z e^{2 pi i z t_r} psi~(t_r) - 1|
    const Real& reconstruction_residual() const noexcept { return residual_; }

private:
    int z_max_;
    std::vector<Real> re_;
    std::vector<Real> im_;
    Real residual_;
};

/// a_z = (1/m) sum_r e^{-2 pi i z t_r} / psi~(t_r), one transform for all z.
template <class Real>
ReciprocalCoefficients<Real> reciprocal_coefficients(const PeriodizedSymbol<Real>& sym, int z_max = 32)
{
    using std::abs;
    using std::sqrt;
    if (!sym.wiener())
        throw wiener_condition_violated("symbol has a zero; reciprocal not in Wiener algebra");
    const std::size_t m = static_cast<std::size_t>(sym.size());
    if (z_max < 1 || static_cast<std::size_t>(2 * z_max + 1) > m)
        throw error("reciprocal_coefficients: z_max must satisfy 1 <= 2 z_max + 1 <= m");

    const auto& sr = sym.real_part();
    const auto& si = sym.imag_part();
    std::vector<Real> re(m), im(m);
    for (std::size_t r = 0; r < m; ++r) {
        Real d = sr[r] * sr[r] + si[r] * si[r];
        re[r] = sr[r] / d;
        im[r] = -si[r] / d;
    }
    detail::fft(re, im, -1);
    std::vector<Real> ar, ai;
    for (long z = -z_max; z <= z_max; ++z) {
        auto idx = detail::wrap(z, m);
        ar.push_back(re[idx] / Real(m));
        ai.push_back(sym.symmetric() ? Real(0) : Real(im[idx] / Real(m)));
    }

    // reconstruct the truncated series on the sample grid
    std::vector<Real> br(m, Real(0)), bi(m, Real(0));
    for (long z = -z_max; z <= z_max; ++z) {
        auto idx = detail::wrap(z, m);
        br[idx] = ar[static_cast<std::size_t>(z + z_max)];
        bi[idx] = ai[static_cast<std::size_t>(z + z_max)];
    }
    detail::fft(br, bi, +1);
    Real residual = 0;
    for (std::size_t r = 0; r < m; ++r) {
        Real pr = br[r] * sr[r] - bi[r] * si[r] - 1;
        Real pi_ = br[r] * si[r] + bi[r] * sr[r];
        residual = std::max<Real>(residual, sqrt(pr * pr + pi_ * pi_));
    }
    return {z_max, std::move(ar), std::move(ai), residual};
}

template <class Real>
struct DecayReport {
    std::vector<Real> moment_sums; // sum_{|z|<=z_max} |a_z| |z|^k, k = 0..4
    Real max_ratio;                // max |a_{z+1}| / |a_z| over 4 <= z < z_max
};

template <class Real>
DecayReport<Real> decay_report(const ReciprocalCoefficients<Real>& a)
{
    using std::abs;
    DecayReport<Real> rep;
    for (int k = 0; k <= 4; ++k) {
        Real s = 0;
        for (long z = -a.z_max(); z <= a.z_max(); ++z)
            s += abs(a[z]) * ipow(Real(z < 0 ? -z : z), k);
        rep.moment_sums.push_back(s);
    }
    rep.max_ratio = 0;
    for (long z = 4; z < a.z_max(); ++z)
        rep.max_ratio = std::max<Real>(rep.max_ratio, abs(a[z + 1]) / abs(a[z]));
    return rep;
}

/// Data on the integer window [first, first + size - 1].
template <class Real>
struct WindowedSequence {
    long first = 0;
    std::vector<Real> values;

    long last() const { return first + static_cast<long>(values.size()) - 1; }
    Real at(long j) const
    {
        if (j < first || j > last())
            return Real(0);
        return values[static_cast<std::size_t>(j - first)];
    }
};

/// c_j = sum_z a_z data(j - z), data zero-extended, on [first - z_max, last + z_max].
/// sum_j c_j psi(l - j) reproduces data(l) up to the truncation of a_z. At
/// distance d from the window edge, c_j differs from the coefficients of the
/// unwindowed data by at most max|data(j - z)| * sum_{|z| > d} |a_z|.
template <class Real>
WindowedSequence<Real> spectral_interpolate(const ReciprocalCoefficients<Real>& a, const WindowedSequence<Real>& data)
{
    WindowedSequence<Real> out;
    out.first = data.first - a.z_max();
    const long last = data.last() + a.z_max();
    for (long j = out.first; j <= last; ++j) {
        Real s = 0;
        for (long z = -a.z_max(); z <= a.z_max(); ++z)
            s += a[z] * data.at(j - z);
        out.values.push_back(s);
    }
    return out;
}

/// sum_{|z| > d} |a_z| within the stored range; a lower bound for the true tail.
template <class Real>
Real reciprocal_tail(const ReciprocalCoefficients<Real>& a, long d)
{
    using std::abs;
    Real s = 0;
    for (long z = d + 1; z <= a.z_max(); ++z)
        s += abs(a[z]) + abs(a[-z]);
    return s;
}

/// psi-hat(xi) = e^{-2 pi^2 xi^2} under f-hat(xi) = integral e^{-2 pi i xi x} f(x) dx.
template <class Real>
Real gaussian_transform(const Real& xi)
{
    using std::exp;
    return exp(-2 * pi<Real>() * pi<Real>() * xi * xi);
}

/// Both sides of sum_z psi(z) e^{2 pi i z x} = sum_z psi-hat(x + z) (real parts).
template <class Real>
IdentityCheck<Real> verify_poisson(const Kernel<Real>& kernel, const Real& x, const Real& tail_tol)
{
    using std::abs;
    using std::exp;
    using std::floor;
    if (!kernel.is_gaussian())
        throw unsupported_method("verify_poisson: kernel has no known Fourier transform");
    auto lhs = symbol_at(kernel, x, tail_tol);

    // psi-hat terms beyond |x + z| >= s shrink by e^{-2 pi^2 (2s+1)}; stop when the
    // geometric remainder is below tail_tol
    const Real c = 2 * pi<Real>() * pi<Real>();
    Real rhs = 0;
    Real shift = x - floor(x);
    int s = 0;
    for (;; ++s) {
        Real a = gaussian_transform(shift + Real(s));
        Real b = gaussian_transform(shift - Real(s + 1));
        rhs += a + b;
        Real u = Real(s + 1) - Real(1) / 2;
        Real remainder = 2 * exp(-c * u * u) / (1 - exp(-c));
        if (remainder < tail_tol || s > max_truncation_radius)
            break;
    }
    Real u = Real(s + 1) - Real(1) / 2;
    Real rhs_tail = 2 * exp(-c * u * u) / (1 - exp(-c));
    Real lhs_tail = kernel.moment_tail(0, truncation_radius(kernel, 0, tail_tol));
    Real roundoff = Real(4 * (s + 1) + 64) * epsilon<Real>() * (abs(lhs.first) + abs(rhs) + 1);
    return {lhs.first, rhs, lhs_tail + rhs_tail + roundoff};
}

} // namespace cki
