#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tfem {

/// Bad caller input (sizes, ranges, non-positive parameters).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A mesh whose spacing or element area fell below the admissible minimum.
class DegenerateMesh : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Time outside the interval on which a schedule is defined.
class OutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Linear-solve breakdown, non-finite state or detected instability.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, std::size_t step, double time)
        : std::runtime_error(what + " (step " + std::to_string(step) + ", t = " +
                             std::to_string(time) + ")"),
          step_(step), time_(time)
    {
    }
    explicit NumericalFailure(const std::string& what)
        : std::runtime_error(what), step_(0), time_(0.0)
    {
    }

    std::size_t step() const noexcept { return step_; }
    double time() const noexcept { return time_; }

private:
    std::size_t step_;
    double time_;
};

/// Malformed or schema-violating run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tfem
