#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ios>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>

namespace cki {

/// Extended working precision: 50 significant decimal digits.
using extended = boost::multiprecision::cpp_bin_float_50;

enum class Precision { standard, extended };

inline std::optional<Precision> parse_precision(std::string_view name)
{
    if (name == "standard" || name == "double")
        return Precision::standard;
    if (name == "extended")
        return Precision::extended;
    return std::nullopt;
}

inline const char* to_string(Precision p)
{
    return p == Precision::standard ? "standard" : "extended";
}

/// Default precision, honouring the CKI_PRECISION environment variable.
inline Precision default_precision()
{
    if (const char* env = std::getenv("CKI_PRECISION")) {
        if (auto p = parse_precision(env))
            return *p;
    }
    return Precision::standard;
}

template <class Real>
inline Real pi()
{
    return boost::math::constants::pi<Real>();
}

template <class Real>
inline Real epsilon()
{
    return std::numeric_limits<Real>::epsilon();
}

template <class Real>
inline bool is_extended_v = std::numeric_limits<Real>::digits10 >= 30;

template <class Real>
inline double to_double(const Real& x)
{
    return static_cast<double>(x);
}

/// Integer power with exact integer exponent (0^0 = 1).
template <class Real>
inline Real ipow(const Real& x, int k)
{
    Real result = 1;
    Real base = x;
    while (k > 0) {
        if (k & 1)
            result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

/// Shortest representation that round-trips in the given scalar type.
template <class Real>
inline std::string format_real(const Real& x)
{
    if constexpr (std::is_floating_point_v<Real>) {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, x);
        return std::string(buf, res.ptr);
    } else {
        return x.str(std::numeric_limits<Real>::max_digits10, std::ios_base::fmtflags(0));
    }
}

} // namespace cki
