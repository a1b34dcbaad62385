#pragma once

#include <stdexcept>
#include <string>

namespace mpcap {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a formula (e.g. P <= 1 under a log log).
class domain_error : public error {
public:
    using error::error;
};

/// Partial sums of a decay profile did not converge within the iteration budget.
class non_summable_error : public error {
public:
    using error::error;
};

/// The guard length does not push the residual interference below the noise floor.
class guard_too_short_error : public error {
public:
    using error::error;
};

/// Power parameter must exceed 1 for the log-uniform input law.
class invalid_power_error : public error {
public:
    using error::error;
};

class quadrature_error : public error {
public:
    using error::error;
};

/// Malformed structured-text input (profile, config).
class parse_error : public error {
public:
    using error::error;
};

} // namespace mpcap
