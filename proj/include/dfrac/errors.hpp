#pragma once

#include <stdexcept>
#include <string>

namespace dfrac {

// Argument outside an operation's domain (bad index, bad order, undefined ratio).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Too few samples for the requested stencil.
struct LengthError : std::runtime_error {
    explicit LengthError(const std::string& what) : std::runtime_error(what) {}
};

// Closed form undefined because its shared denominator vanishes (alpha = 2).
struct DegenerateError : std::runtime_error {
    explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

// Elimination met a pivot below 1e-12 * scale: the system is reported
// as non-unique, never silently regularized.
struct SingularSystemError : std::runtime_error {
    explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

// Candidate solution has sup-norm <= 1e-8; the inequality report is undefined.
struct TrivialSolutionError : std::runtime_error {
    explicit TrivialSolutionError(const std::string& what) : std::runtime_error(what) {}
};

// Eigen scan received an identically zero kernel matrix.
struct ZeroKernelError : std::runtime_error {
    explicit ZeroKernelError(const std::string& what) : std::runtime_error(what) {}
};

// Iteration cap reached without meeting the convergence test.
// Fixed-point solves report non-convergence as a value; this exception is
// reserved for the eigen scan, which has no useful partial result.
struct NoConvergenceError : std::runtime_error {
    explicit NoConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dfrac
