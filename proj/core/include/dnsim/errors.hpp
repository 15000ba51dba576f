#ifndef DNSIM_ERRORS_HPP
#define DNSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dnsim {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative solver (bisection, Newton) failed to reach its tolerance.
class SolverError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration file or violated parameter constraint.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace dnsim

#endif
