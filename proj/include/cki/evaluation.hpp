#pragma once

#include <cmath>

namespace cki {

/// A value together with a non-negative error budget
/// (certified truncation tail plus a round-off estimate).
template <class Real>
struct Evaluation {
    Real value;
    Real budget;
};

template <class Real>
struct IdentityCheck {
    Real lhs;
    Real rhs;
    Real budget;

    Real deviation() const
    {
        using std::abs;
        return abs(lhs - rhs);
    }
};

} // namespace cki
