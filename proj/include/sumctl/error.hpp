#pragma once

#include <stdexcept>
#include <string>

namespace sumctl {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: out-of-range parameters, malformed files, violated preconditions.
/// The CLI maps this to exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Missing or inconsistent configuration detected before any work starts.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Summary generation failed for a single request.
class GenerationError : public Error {
public:
    using Error::Error;
};

/// Remote endpoint answered with a non-retryable status.
class RequestError : public GenerationError {
public:
    RequestError(int status, std::string body_excerpt)
        : GenerationError("request failed with HTTP " + std::to_string(status) + ": " + body_excerpt)
        , status_(status)
        , body_excerpt_(std::move(body_excerpt))
    {
    }

    int status() const noexcept { return status_; }
    const std::string& body_excerpt() const noexcept { return body_excerpt_; }

private:
    int status_;
    std::string body_excerpt_;
};

/// Connection failures, or retryable failures that exhausted the retry budget.
class TransportError : public GenerationError {
public:
    using GenerationError::GenerationError;
};

/// Power iteration did not reach the requested tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(int iterations, double residual)
        : Error("salience iteration did not converge after " + std::to_string(iterations) +
                " iterations (residual " + std::to_string(residual) + ")")
        , iterations_(iterations)
        , residual_(residual)
    {
    }

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

} // namespace sumctl
