#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace cki {

inline constexpr int max_binomial_order = 64;

namespace detail {

inline constexpr auto pascal_triangle = [] {
    std::array<std::array<std::uint64_t, max_binomial_order + 1>, max_binomial_order + 1> t{};
    for (int n = 0; n <= max_binomial_order; ++n) {
        t[n][0] = 1;
        for (int k = 1; k <= n; ++k)
            t[n][k] = t[n - 1][k - 1] + (k < n ? t[n - 1][k] : 0);
    }
    return t;
}();

} // namespace detail

/// Exact C(n, k) from Pascal's triangle; zero outside 0 <= k <= n.
inline std::uint64_t binomial_exact(int n, int k)
{
    if (n < 0 || n > max_binomial_order)
        throw std::out_of_range("binomial order outside [0, 64]");
    if (k < 0 || k > n)
        return 0;
    return detail::pascal_triangle[n][k];
}

template <class Real>
inline Real binomial(int n, int k)
{
    return static_cast<Real>(binomial_exact(n, k));
}

} // namespace cki
