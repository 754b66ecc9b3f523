#pragma once

#include <stdexcept>
#include <string>

namespace fwsn {

// Raised when an operation is called outside its documented domain.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when a numerical routine stops before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

inline void require(bool condition, const char* message) {
    if (!condition) throw PreconditionError(message);
}

inline void require(bool condition, const std::string& message) {
    if (!condition) throw PreconditionError(message);
}

}  // namespace fwsn
