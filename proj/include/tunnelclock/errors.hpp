#pragma once

#include <stdexcept>
#include <string>

namespace tunnelclock {

// Config / argument errors. The CLI maps these to exit code 2.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Numeric failures (quadrature budget, optimizer, root finder). Exit code 3.
class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ContourCrossing : public NonConvergence {
public:
    using NonConvergence::NonConvergence;
};

class IllConditioned : public NonConvergence {
public:
    using NonConvergence::NonConvergence;
};

class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

} // namespace tunnelclock
