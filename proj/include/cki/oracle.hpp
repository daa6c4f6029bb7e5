#pragma once

#include "cki/error.hpp"
#include "cki/kernel.hpp"
#include "cki/polynomial.hpp"
#include "cki/precision.hpp"
#include "cki/spectral.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace cki {

template <class Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Finite section of sum_j c_j psi(j - l) = target(l), l in [-L, L],
/// with unknowns on [-L - pad, L + pad], solved in the minimum-norm sense.
template <class Real>
struct ToeplitzProblem {
    int half_width = 0; // L
    int pad = 0;
    std::vector<Real> targets;          // indexed by l + L
    WindowedSequence<Real> coefficients; // on [-L - pad, L + pad]
    Real residual_norm = 0;             // max_l |sum_j c_j psi(j - l) - target(l)|
    double condition_estimate = 0;      // of the normal matrix A A^T

    Real target(long l) const { return targets.at(static_cast<std::size_t>(l + half_width)); }
};

template <class Real>
ToeplitzProblem<Real> solve_toeplitz(const Kernel<Real>& kernel, std::vector<Real> targets, int half_width, int pad)
{
    using std::abs;
    if (half_width < 1 || pad < 1)
        throw error("solve_toeplitz: L and pad must be positive");
    const int rows = 2 * half_width + 1;
    const int cols = 2 * (half_width + pad) + 1;
    if (static_cast<int>(targets.size()) != rows)
        throw error("solve_toeplitz: expected 2L+1 targets");

    // psi(j - l) depends only on j - l; tabulate once
    std::vector<Real> psi(static_cast<std::size_t>(cols + rows), Real(0));
    const int offset = half_width + pad + half_width; // j - l ranges over [-offset, offset]
    for (int d = -offset; d <= offset; ++d)
        psi[static_cast<std::size_t>(d + offset)] = kernel(Real(d));

    Matrix<Real> a(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const int l = r - half_width;
        for (int c = 0; c < cols; ++c) {
            const int j = c - half_width - pad;
            a(r, c) = psi[static_cast<std::size_t>(j - l + offset)];
        }
    }
    Vector<Real> b(rows);
    for (int r = 0; r < rows; ++r)
        b(r) = targets[static_cast<std::size_t>(r)];

    ToeplitzProblem<Real> out;
    out.half_width = half_width;
    out.pad = pad;
    out.targets = std::move(targets);
    out.coefficients.first = -(half_width + pad);

    Matrix<Real> gram = a * a.transpose();
    Eigen::LLT<Matrix<Real>> llt(gram);
    // (max L_ii / min L_ii)^2, a lower bound on the condition number of A A^T
    Real lmax = 0;
    Real lmin = std::numeric_limits<Real>::max();
    const Matrix<Real> factor = llt.matrixLLT();
    for (int r = 0; r < rows; ++r) {
        lmax = std::max<Real>(lmax, abs(factor(r, r)));
        lmin = std::min<Real>(lmin, abs(factor(r, r)));
    }
    const double rcond = lmax > 0 ? to_double(Real(lmin * lmin / (lmax * lmax))) : 0.0;
    out.condition_estimate = rcond > 0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (llt.info() != Eigen::Success || !(rcond > 100 * to_double(epsilon<Real>())))
        throw singular_system("solve_toeplitz: normal equations are numerically singular", out.condition_estimate);

    Vector<Real> c = a.transpose() * llt.solve(b);
    out.coefficients.values.assign(c.data(), c.data() + c.size());
    Vector<Real> res = a * c - b;
    out.residual_norm = 0;
    for (int r = 0; r < rows; ++r)
        out.residual_norm = std::max<Real>(out.residual_norm, abs(res(r)));
    return out;
}

/// Targets p(l) for l in [-L, L].
template <class Real>
std::vector<Real> polynomial_targets(const Polynomial<Real>& p, int half_width)
{
    std::vector<Real> t;
    for (int l = -half_width; l <= half_width; ++l)
        t.push_back(p(Real(l)));
    return t;
}

template <class Real>
struct RouteSequence {
    std::string name;
    WindowedSequence<Real> coefficients;
};

/// Samples of a coefficient polynomial on [first, last] as a route.
template <class Real>
RouteSequence<Real> polynomial_route(std::string name, const Polynomial<Real>& ap, long first, long last)
{
    RouteSequence<Real> r{std::move(name), {first, {}}};
    for (long j = first; j <= last; ++j)
        r.coefficients.values.push_back(ap(Real(j)));
    return r;
}

template <class Real>
struct AdjudicationEntry {
    std::string name;
    Real max_deviation; // max_{|j| <= interior} |c_route(j) - c_oracle(j)|
    Real max_residual;  // max_{|l| <= interior} |sum_j c_route(j) psi(j - l) - target(l)|
};

template <class Real>
struct AdjudicationReport {
    int interior = 0;
    Real oracle_scale = 0; // max(1, max_{|j| <= interior} |c_oracle(j)|)
    std::vector<AdjudicationEntry<Real>> entries; // ascending residual

    const AdjudicationEntry<Real>* find(const std::string& name) const
    {
        for (const auto& e : entries)
            if (e.name == name)
                return &e;
        return nullptr;
    }
};

/// sum_j c_j psi(j - l) over the stored window of c.
template <class Real>
Real apply_kernel(const Kernel<Real>& kernel, const WindowedSequence<Real>& c, long l)
{
    Real s = 0;
    for (long j = c.first; j <= c.last(); ++j)
        s += c.at(j) * kernel(Real(j - l));
    return s;
}

/// Compare each route against the oracle coefficients and the targets on |j|, |l| <= interior.
template <class Real>
AdjudicationReport<Real> adjudicate(const Kernel<Real>& kernel, const std::vector<RouteSequence<Real>>& routes,
                                    const ToeplitzProblem<Real>& problem, int interior = 5)
{
    using std::abs;
    if (interior > problem.half_width)
        throw error("adjudicate: interior exceeds the interpolation window");
    AdjudicationReport<Real> rep;
    rep.interior = interior;
    rep.oracle_scale = 1;
    for (long j = -interior; j <= interior; ++j)
        rep.oracle_scale = std::max<Real>(rep.oracle_scale, abs(problem.coefficients.at(j)));

    for (const auto& route : routes) {
        AdjudicationEntry<Real> e{route.name, Real(0), Real(0)};
        for (long j = -interior; j <= interior; ++j) {
            if (j < route.coefficients.first || j > route.coefficients.last())
                throw error("adjudicate: route '" + route.name + "' does not cover the interior window");
            e.max_deviation = std::max<Real>(e.max_deviation, abs(route.coefficients.at(j) - problem.coefficients.at(j)));
        }
        for (long l = -interior; l <= interior; ++l)
            e.max_residual =
                std::max<Real>(e.max_residual, abs(apply_kernel(kernel, route.coefficients, l) - problem.target(l)));
        rep.entries.push_back(std::move(e));
    }
    std::stable_sort(rep.entries.begin(), rep.entries.end(),
                     [](const auto& x, const auto& y) { return x.max_residual < y.max_residual; });
    return rep;
}

/// T(l, i) = sum_j j^i psi(j - l), l = 0..N, i = 0..N, by direct certified summation.
/// Row l holds the sequence value at l produced by the monomial x^i.
template <class Real>
Matrix<Real> monomial_to_sequence_matrix(const Kernel<Real>& kernel, int max_degree, const Real& tol)
{
    Matrix<Real> t(max_degree + 1, max_degree + 1);
    for (int l = 0; l <= max_degree; ++l) {
        for (int i = 0; i <= max_degree; ++i) {
            const int r = truncation_radius(kernel, i, tol) + l;
            Real s = 0;
            for (int j = -r + l; j <= r + l; ++j)
                s += ipow(Real(j), i) * kernel(Real(j - l));
            t(l, i) = s;
        }
    }
    return t;
}

/// sigma_min / sigma_max
template <class Real>
Real singular_value_ratio(const Matrix<Real>& m)
{
    Eigen::JacobiSVD<Matrix<Real>> svd(m);
    const auto& s = svd.singularValues();
    return s(s.size() - 1) / s(0);
}

/// Least-squares polynomial of the given degree through (j, seq(j)), |j| <= half_window.
template <class Real>
Polynomial<Real> polynomial_from_sequence(const WindowedSequence<Real>& seq, int degree, int half_window)
{
    const int rows = 2 * half_window + 1;
    if (rows < degree + 1)
        throw error("polynomial_from_sequence: window too small for degree");
    Matrix<Real> v(rows, degree + 1);
    Vector<Real> y(rows);
    for (int r = 0; r < rows; ++r) {
        const long j = r - half_window;
        for (int i = 0; i <= degree; ++i)
            v(r, i) = ipow(Real(j), i);
        y(r) = seq.at(j);
    }
    Vector<Real> c = v.colPivHouseholderQr().solve(y);
    return Polynomial<Real>(std::vector<Real>(c.data(), c.data() + c.size()));
}

} // namespace cki
