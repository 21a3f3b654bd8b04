#include "dfrac/lyapunov.hpp"

#include <algorithm>
#include <cmath>

namespace dfrac {

double lyapunov_bound(double alpha, int b) {
    if (b < 1) throw DomainError("lyapunov_bound: b must be >= 1");
    if (alpha == 2.0)
        throw DegenerateError("lyapunov_bound: alpha = 2 degenerates the bound to 0");
    if (!(alpha > 1.0 && alpha < 2.0))
        throw DomainError("lyapunov_bound: alpha must be in (1,2)");
    double lx = signed_log_gamma(alpha - 1.0).log_abs + signed_log_gamma(double(b) + 2.0).log_abs;
    double ly = signed_log_gamma(alpha + double(b)).log_abs;
    double log_bracket = lx + std::log1p(-std::exp(ly - lx));
    double log_num = signed_log_gamma(alpha).log_abs + signed_log_gamma(double(b)).log_abs +
                     log_bracket;
    double log_den = lx + signed_log_gamma(double(b) + alpha - 1.0).log_abs;
    return std::exp(log_num - log_den);
}

LyapunovReport check_inequality(const BvpProblem& problem, const GridFunction& y) {
    const int n = problem.b + 3;
    if (y.size() != static_cast<std::size_t>(n))
        throw DomainError("check_inequality: y must have b+3 samples");

    double sup = 0.0;
    for (double v : y.values) sup = std::max(sup, std::abs(v));
    if (sup <= 1e-8)
        throw TrivialSolutionError("check_inequality: trivial solution (sup-norm <= 1e-8)");

    LyapunovReport rep;
    rep.bound_C = lyapunov_bound(problem.alpha, problem.b);

    // Effective weight is lambda * h for the lambda-scaled problem.
    double hsum = 0.0;
    for (double v : problem.h) hsum += std::abs(problem.lambda * v);
    rep.h_sum = hsum;
    rep.lhs = hsum;

    // Max over abscissae alpha-1 .. alpha+b, i.e. indices 1..b+2.
    double eta = y.values[1];
    for (int k = 2; k < n; ++k) eta = std::max(eta, y.values[k]);
    rep.eta = eta;

    double f_eta = problem.f.eval_raw(eta);
    if (!(f_eta > 0.0))
        throw DomainError("check_inequality: f(eta) <= 0, the bound's quotient is undefined");
    rep.f_eta = f_eta;

    rep.rhs = rep.bound_C * eta / f_eta;
    rep.margin = rep.lhs - rep.rhs;
    rep.holds = rep.margin >= -1e-9 * std::max(1.0, rep.rhs);
    return rep;
}

EigenResult perron_smallest_lambda(double alpha, int b, const std::vector<double>& h) {
    if (b < 1) throw DomainError("perron_smallest_lambda: b must be >= 1");
    if (h.size() != static_cast<std::size_t>(b) + 1)
        throw DomainError("perron_smallest_lambda: h must have b+1 samples");
    for (double v : h)
        if (v < 0.0) throw DomainError("perron_smallest_lambda: h must be nonnegative");

    GreenKernel kern = green_kernel(alpha, b);
    const int sign = resolved_sign();
    const double inv_gamma = 1.0 / gamma_value(alpha);
    const int n = b + 1;

    // Interior square: row i is the lattice point of abscissa alpha-1+i.
    std::vector<std::vector<double>> K(n, std::vector<double>(n, 0.0));
    double max_abs = 0.0;
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < n; ++s) {
            K[i][s] = sign * kern.g[i + 1][s] * h[s] * inv_gamma;
            max_abs = std::max(max_abs, std::abs(K[i][s]));
        }
    if (max_abs == 0.0)
        throw ZeroKernelError("perron_smallest_lambda: kernel matrix is identically zero");

    auto mul = [&](const std::vector<double>& x) {
        std::vector<double> out(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int s = 0; s < n; ++s) acc += K[i][s] * x[s];
            out[i] = acc;
        }
        return out;
    };
    auto rayleigh = [&](const std::vector<double>& x, const std::vector<double>& kx) {
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            num += x[i] * kx[i];
            den += x[i] * x[i];
        }
        return num / den;
    };

    const int cap = 100000;
    std::vector<double> x(n, 1.0);
    double r_prev = 0.0;
    int it = 0;
    bool settled = false;
    for (; it < cap; ++it) {
        std::vector<double> kx = mul(x);
        double r = rayleigh(x, kx);
        double nx = 0.0;
        for (double v : kx) nx = std::max(nx, std::abs(v));
        if (nx == 0.0)
            throw ZeroKernelError("perron_smallest_lambda: iteration mapped to zero");
        for (int i = 0; i < n; ++i) x[i] = kx[i] / nx;
        if (it > 0 && std::abs(r - r_prev) < 1e-12) {
            r_prev = r;
            settled = true;
            ++it;
            break;
        }
        r_prev = r;
    }
    if (!settled)
        throw NoConvergenceError("perron_smallest_lambda: Rayleigh drift still " +
                                 std::to_string(std::abs(r_prev)) + " after cap");

    double rho = std::abs(r_prev);
    // Perron vector of the modulus matrix: strictly one-signed, stored nonnegative.
    std::vector<double> v(n);
    double sup = 0.0;
    for (int i = 0; i < n; ++i) sup = std::max(sup, std::abs(x[i]));
    for (int i = 0; i < n; ++i) v[i] = std::abs(x[i]) / sup;

    std::vector<double> kv = mul(v);
    double resid = 0.0;
    for (int i = 0; i < n; ++i) resid = std::max(resid, std::abs(kv[i] - sign * rho * v[i]));

    EigenResult res;
    res.rho = rho;
    res.lambda_star = 1.0 / rho;
    res.iterations = it;
    res.residual = resid;
    res.y_star.base = LatticeBase{GridValue{1, -1}, 0.0};
    res.y_star.values = v;

    // Extend to the full lattice through the full kernel rows: the clamped end
    // is exactly 0, the appended last point keeps the kernel's global sign.
    std::vector<double> ext(b + 3, 0.0);
    for (int i = 0; i < n; ++i) ext[i + 1] = v[i];
    double tail = 0.0;
    for (int s = 0; s < n; ++s) tail += sign * kern.g[b + 2][s] * h[s] * inv_gamma * v[s];
    ext[b + 2] = res.lambda_star * tail;
    ext[0] = 0.0;
    res.y_extended.base = LatticeBase{GridValue{1, -2}, 0.0};
    res.y_extended.values = std::move(ext);
    return res;
}

std::vector<SweepRow> bound_sweep(const std::vector<double>& alphas,
                                  const std::vector<int>& bs) {
    std::vector<SweepRow> rows;
    rows.reserve(alphas.size() * bs.size());
    for (double alpha : alphas)
        for (int b : bs) {
            SweepRow row;
            row.alpha = alpha;
            row.b = b;
            try {
                row.bound_C = lyapunov_bound(alpha, b);
                row.g_max = green_max_closed_form(alpha, b);
                EigenResult eig = perron_smallest_lambda(alpha, b,
                                                         std::vector<double>(b + 1, 1.0));
                row.lhs = eig.lambda_star * (b + 1);
                row.margin = row.lhs - row.bound_C;
            } catch (const DegenerateError&) {
                row.error = "degenerate";
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    return rows;
}

} // namespace dfrac
