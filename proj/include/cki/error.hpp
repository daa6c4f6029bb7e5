#pragma once

#include <stdexcept>
#include <string>

namespace cki {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A truncation tail could not be certified below the requested tolerance.
class tail_not_certifiable : public error {
public:
    tail_not_certifiable(const std::string& what, double best_bound, int degree)
        : error(what), best_bound_(best_bound), degree_(degree) {}

    double best_bound() const noexcept { return best_bound_; }
    int degree() const noexcept { return degree_; }

private:
    double best_bound_;
    int degree_;
};

class singular_system : public error {
public:
    singular_system(const std::string& what, double condition_estimate)
        : error(what), condition_(condition_estimate) {}

    double condition_estimate() const noexcept { return condition_; }

private:
    double condition_;
};

class unsupported_method : public error {
public:
    using error::error;
};

class moment_table_too_short : public error {
public:
    using error::error;
};

/// Requested grid size exceeds what the working precision can fit honestly.
class conditioning_cap : public error {
public:
    using error::error;
};

class wiener_condition_violated : public error {
public:
    using error::error;
};

} // namespace cki
