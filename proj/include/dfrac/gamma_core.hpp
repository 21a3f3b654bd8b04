#pragma once

// Signed log-gamma evaluation and falling-factorial powers t^(nu) = G(t+1)/G(t+1-nu),
// with the reciprocal-pole convention: the ratio is exactly 0 when the denominator
// argument is a gamma pole and the numerator argument is not.

#include <string>

#include "dfrac/errors.hpp"

namespace dfrac {

// Abscissa of the form m*alpha + n. All lattice points and exponents used by the
// boundary value problem have this shape, so pole classification can be exact
// (integer arithmetic) instead of tolerance-based. Public inputs use m in {0,1};
// m = -1 appears internally when the order 2-alpha enters a composition.
struct GridValue {
    int m = 0;
    int n = 0;

    double realize(double alpha) const { return static_cast<double>(m) * alpha + n; }

    GridValue offset(int k) const { return GridValue{m, n + k}; }

    friend GridValue operator+(GridValue a, GridValue b) { return GridValue{a.m + b.m, a.n + b.n}; }
    friend GridValue operator-(GridValue a, GridValue b) { return GridValue{a.m - b.m, a.n - b.n}; }
    friend bool operator==(GridValue a, GridValue b) { return a.m == b.m && a.n == b.n; }
};

// sign 0 encodes a pole: Gamma = infinity, treated as reciprocal-zero by callers.
struct SignedLogGamma {
    int sign = 1;          // -1, 0, +1
    double log_abs = 0.0;  // ln |Gamma(x)|, meaningless when sign == 0
};

// Exact pole test for symbolic abscissae. For non-integral alpha, m*alpha + n is a
// nonpositive integer only when m = 0; an integral alpha (the alpha = 2 boundary)
// folds into exact integer arithmetic.
bool is_gamma_pole(GridValue x, double alpha);

// Tolerance path for plain reals: a pole is a nonpositive integer within 1e-12.
bool is_gamma_pole(double x);

SignedLogGamma signed_log_gamma(double x);
SignedLogGamma signed_log_gamma(GridValue x, double alpha);

// Gamma(x) as a plain value, via sign * exp(log_abs); 0-sign poles map to +inf.
double gamma_value(double x);

// t^(nu) with exact pole classification. Throws DomainError when Gamma(t+1) is a
// pole (alone or together with Gamma(t+1-nu)): the convention only covers the
// reciprocal case.
double falling_factorial(GridValue t, GridValue nu, double alpha);

// Real-argument overload (best effort, 1e-12 integrality tolerance on pole tests).
double falling_factorial(double t, double nu);

} // namespace dfrac
