#pragma once

// Green kernel of the right-focal problem
//     -D^alpha y(t) = h(t+alpha-1),  y(alpha-2) = 0,  Dy(alpha-2) = Dy(alpha+b-1)
// on the lattice {alpha-2, ..., alpha+b}, together with a dense linear-system
// solver that uses only the operator definitions (the oracle route), solution
// representations through the kernel, and a damped fixed-point solver for the
// nonlinear right-hand side.

#include <optional>
#include <string>
#include <vector>

#include "dfrac/frac_calc.hpp"

namespace dfrac {

struct GreenKernel {
    double alpha = 0.0;
    int b = 0;
    double denom = 0.0;  // Gamma(alpha-1) - (alpha+b-1)^(alpha-2), positive for alpha < 2
    // g[k][s], k = 0..b+2 (t = alpha-2+k), s = 0..b.
    std::vector<std::vector<double>> g;
};

// Single kernel entry. Row 0 is identically zero (the clamped boundary point).
double green_value(double alpha, int b, int k, int s);

GreenKernel green_kernel(double alpha, int b);

struct DiagMax {
    int s_star = 0;
    double value = 0.0;
};

// Scans the diagonal G(s+alpha-2, s), s = 0..b; ties break toward larger s.
DiagMax green_diag_max_exhaustive(double alpha, int b);

// Closed form for the diagonal maximum, evaluated in log-gamma space.
double green_max_closed_form(double alpha, int b);

// Increment factor q(s) = b(alpha-1) + s(3-2alpha); its sign matches the sign
// of the diagonal increment G(s+alpha-1, s+1) - G(s+alpha-2, s).
double diag_increment_factor(double alpha, int b, int s);

// Global sign constant relating the kernel representation to the direct solver:
// impulse responses of the direct solver equal sign * G(.,s)/Gamma(alpha).
// Measured once (write-once initialization), then fixed for the process.
int resolved_sign();

// Dense (b+3)x(b+3) solve assembled from the operator definitions only; never
// evaluates the kernel. Accepts alpha in (1,2]; at alpha = 2 the system is
// reported singular when elimination meets an exact zero pivot.
GridFunction solve_linear_bvp_direct(double alpha, int b, const std::vector<double>& h);

// Kernel representation: y(t) = sign * (1/Gamma(alpha)) * sum_s G(t,s) h[s].
GridFunction solve_linear_bvp_green(double alpha, int b, const std::vector<double>& h);

// Monotone nonlinearity tag: linear | power p >= 0 | exp | user table.
class Nonlinearity {
  public:
    enum class Kind { Linear, Power, Exp, Table };

    static Nonlinearity linear();
    static Nonlinearity power(double p);
    static Nonlinearity exponential();
    // Table rows (y, f(y)) with y ascending and f nondecreasing; evaluation
    // interpolates linearly and clamps outside the table range.
    static Nonlinearity table(std::vector<std::pair<double, double>> rows);
    // "linear" | "pow:p" | "exp" | "@file.csv" (rows "y,f").
    static Nonlinearity parse(const std::string& spec);

    Kind kind() const { return kind_; }
    double exponent() const { return p_; }
    std::string describe() const;

    // Literal evaluation (may be NaN outside the domain, e.g. fractional powers
    // of negatives); used by inequality reports.
    double eval_raw(double y) const;
    // Iteration-safe evaluation: clamps the argument to [0, inf), the domain on
    // which the tag is required to be nondecreasing.
    double operator()(double y) const { return eval_raw(y < 0.0 ? 0.0 : y); }

  private:
    Kind kind_ = Kind::Linear;
    double p_ = 1.0;
    std::vector<std::pair<double, double>> rows_;
};

struct BvpProblem {
    double alpha;
    int b;
    std::vector<double> h;  // b+1 nonnegative samples, h[s] at abscissa s+alpha-1
    double lambda;
    Nonlinearity f;

    // Validates 1 < alpha <= 2, b >= 1, h size and nonnegativity, lambda > 0.
    static BvpProblem make(double alpha, int b, std::vector<double> h, double lambda,
                           Nonlinearity f);
};

struct FixedPointResult {
    GridFunction y;
    bool converged = false;
    int iterations = 0;
    double last_step = 0.0;  // final sup-norm update
    double residual = 0.0;   // sup-norm defect of the fixed-point equation
    bool certified = false;  // residual < 10 * tol
};

// Damped iteration y <- (1-w) y + w T(y) with
// T(y)(t) = sign * (lambda/Gamma(alpha)) * sum_s G(t,s) h[s] f(y(s+alpha-1)).
// Non-convergence is a value, not an exception.
FixedPointResult solve_nonlinear_fixed_point(const BvpProblem& problem,
                                             double tol = 1e-10, int max_iter = 10000,
                                             double omega = 0.5,
                                             const std::vector<double>* y0 = nullptr);

} // namespace dfrac
