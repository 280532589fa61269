#pragma once

#include <stdexcept>
#include <string>

namespace logser {

/// Base class for every domain error raised by the library.
/// The CLI maps these to exit code 1.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coefficients do not sum to zero, so the series diverges.
class unbalanced_coefficients : public error {
public:
    using error::error;
};

class length_mismatch : public error {
public:
    using error::error;
};

class modulus_mismatch : public error {
public:
    using error::error;
};

/// The requested work exceeds the configured block budget.
class budget_exceeded : public error {
public:
    using error::error;
};

/// The requested accuracy is below what the working precision can deliver.
class unachievable : public error {
public:
    using error::error;
};

class no_convergence : public error {
public:
    using error::error;
};

class not_composite : public error {
public:
    using error::error;
};

/// Precondition violation on an argument (T = 0, j out of range, ...).
class invalid_argument : public error {
public:
    using error::error;
};

}  // namespace logser
