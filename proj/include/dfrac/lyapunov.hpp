#pragma once

// Necessary-condition machinery: the closed-form constant C(alpha,b), inequality
// reports for candidate solutions, a Perron eigen scan that produces the
// critical forcing scale for the linear right-hand side, and the reproduction
// sweep table.

#include <string>
#include <vector>

#include "dfrac/green_bvp.hpp"

namespace dfrac {

struct LyapunovReport {
    double bound_C = 0.0;  // C(alpha, b)
    double h_sum = 0.0;    // sum of |lambda * h[s]|
    double eta = 0.0;      // max of y over abscissae alpha-1 .. alpha+b
    double f_eta = 0.0;
    double lhs = 0.0;      // = h_sum
    double rhs = 0.0;      // = C * eta / f(eta)
    bool holds = false;    // margin >= -1e-9 * max(1, rhs)
    double margin = 0.0;   // lhs - rhs
};

// C(alpha,b) = Gamma(alpha)Gamma(b)[Gamma(alpha-1)Gamma(b+2) - Gamma(alpha+b)]
//              / (Gamma(alpha-1)Gamma(b+2)Gamma(b+alpha-1)), in log-gamma space.
double lyapunov_bound(double alpha, int b);

// Report for a candidate solution y (b+3 samples on the solution lattice).
// Pre: y certified against the fixed-point equation by its producer.
// The max excludes index 0 (the clamped boundary point).
LyapunovReport check_inequality(const BvpProblem& problem, const GridFunction& y);

struct EigenResult {
    double lambda_star = 0.0;  // 1 / rho, rho the spectral radius of the kernel matrix
    double rho = 0.0;
    // Perron vector on the interior window (abscissae alpha-1 .. alpha+b-1),
    // nonnegative, sup-norm 1.
    GridFunction y_star;
    // Extension to the full lattice: endpoints recovered from the full kernel
    // rows (exactly 0 at alpha-2; the appended last point carries the global sign).
    GridFunction y_extended;
    int iterations = 0;
    double residual = 0.0;  // || K y* - sign * rho * y* ||_inf
};

// Power iteration on K[i][s] = sign * G(i+1, s) h[s] / Gamma(alpha), i,s = 0..b
// (rows are the interior lattice points): all-ones start, sup-normalized steps,
// Rayleigh-quotient drift < 1e-12, cap 100000.
EigenResult perron_smallest_lambda(double alpha, int b, const std::vector<double>& h);

struct SweepRow {
    double alpha = 0.0;
    int b = 0;
    double bound_C = 0.0;
    double g_max = 0.0;
    double lhs = 0.0;     // lambda* * sum |h| for h = ones
    double margin = 0.0;  // lhs - C
    std::string error;    // nonempty when the cell is degenerate or failed
};

// Evaluates the table over the grid; per-cell errors are recorded in the row
// and the sweep continues.
std::vector<SweepRow> bound_sweep(const std::vector<double>& alphas,
                                  const std::vector<int>& bs);

} // namespace dfrac
