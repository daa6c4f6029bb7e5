#pragma once

#include "cki/cardinal.hpp"
#include "cki/oracle.hpp"
#include "cki/spectral.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace cki {

/// Window sizes for the sequence-valued routes. Finite-section and
/// windowing errors decay like e^{-d/2} in the distance d to the edge.
struct RouteWindows {
    int toeplitz_half_width = 100;
    int toeplitz_pad = 20;
    int spectral_half_width = 100;
    int spectral_z_max = 100;
    int symbol_samples = 4096;
};

/// Coefficient sequence for p on a window, from the spectral route.
template <class Real>
WindowedSequence<Real> spectral_sequence(const ReciprocalCoefficients<Real>& a, const Polynomial<Real>& p,
                                         int half_width)
{
    WindowedSequence<Real> data{-half_width, {}};
    for (long j = -half_width; j <= half_width; ++j)
        data.values.push_back(p(Real(j)));
    return spectral_interpolate(a, data);
}

/// Coefficient sequence for p on a window, from the Toeplitz oracle.
template <class Real>
WindowedSequence<Real> toeplitz_sequence(const Kernel<Real>& kernel, const Polynomial<Real>& p, int half_width, int pad)
{
    return solve_toeplitz(kernel, polynomial_targets(p, half_width), half_width, pad).coefficients;
}

/// Coefficient polynomials a_0..a_N from any route. Sequence-valued routes
/// are converted by a least-squares fit of degree k on |j| <= max(5, k).
template <class Real>
std::vector<Polynomial<Real>> route_polynomials(const Kernel<Real>& kernel, const MomentTable<Real>& moments, Route route,
                                                int max_degree, const RouteWindows& w = {})
{
    std::vector<Polynomial<Real>> out;
    auto from_coeffs = [&](const CardinalCoefficients<Real>& c) {
        for (int k = 0; k <= max_degree; ++k)
            out.push_back(c[k]);
    };
    switch (route) {
    case Route::triangular: from_coeffs(build_coefficients_triangular(kernel, moments, max_degree)); break;
    case Route::q_he: from_coeffs(build_coefficients_q(kernel, moments, max_degree, QBase::discrete_he)); break;
    case Route::q_ne: from_coeffs(build_coefficients_q(kernel, moments, max_degree, QBase::continuous_ne)); break;
    case Route::spectral: {
        auto a = reciprocal_coefficients(periodize(kernel, w.symbol_samples), w.spectral_z_max);
        for (int k = 0; k <= max_degree; ++k)
            out.push_back(polynomial_from_sequence(
                spectral_sequence(a, Polynomial<Real>::monomial(k), w.spectral_half_width), k, std::max(5, k)));
        break;
    }
    case Route::toeplitz:
        for (int k = 0; k <= max_degree; ++k)
            out.push_back(polynomial_from_sequence(
                toeplitz_sequence(kernel, Polynomial<Real>::monomial(k), w.toeplitz_half_width, w.toeplitz_pad), k,
                std::max(5, k)));
        break;
    }
    return out;
}

} // namespace cki
