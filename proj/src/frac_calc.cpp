#include "dfrac/frac_calc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dfrac {

GridFunction forward_difference(const GridFunction& f, int n) {
    if (n < 1) throw DomainError("forward_difference: n must be >= 1");
    if (f.size() < static_cast<std::size_t>(n) + 1)
        throw LengthError("forward_difference: need at least n+1 samples, have " +
                          std::to_string(f.size()));
    GridFunction out = f;
    for (int pass = 0; pass < n; ++pass) {
        std::vector<double> next(out.size() - 1);
        for (std::size_t k = 0; k + 1 < out.size(); ++k)
            next[k] = out.values[k + 1] - out.values[k];
        out.values = std::move(next);
    }
    return out;
}

namespace {

// Shared convolution: out[k] = scale * sum_{j=0..k} w[k-j] * f[j], summed in
// ascending j so the order-1 case reproduces the running sum bit for bit.
GridFunction convolve_kernel(const GridFunction& f, const std::vector<double>& w,
                             double scale, LatticeBase out_base) {
    GridFunction out;
    out.base = out_base;
    out.values.resize(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= k; ++j)
            acc += w[k - j] * f.values[j];
        out.values[k] = scale * acc;
    }
    return out;
}

} // namespace

GridFunction fractional_sum(const GridFunction& f, GridValue order, double alpha) {
    if (!(order.realize(alpha) > 0.0))
        throw DomainError("fractional_sum: order must be positive");
    if (f.values.empty()) throw LengthError("fractional_sum: empty input");

    // Kernel weight i steps below the diagonal: (order-1+i)^(order-1), evaluated
    // on the exact path; weight 0 is Gamma(order)/Gamma(1).
    GridValue expo = order.offset(-1);
    std::vector<double> w(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        w[i] = falling_factorial(expo.offset(static_cast<int>(i)), expo, alpha);

    SignedLogGamma g = signed_log_gamma(order, alpha);
    if (g.sign == 0) throw DomainError("fractional_sum: Gamma(order) is a pole");
    double scale = g.sign > 0 ? std::exp(-g.log_abs) : -std::exp(-g.log_abs);

    LatticeBase out_base{f.base.sym + order, f.base.shift};
    return convolve_kernel(f, w, scale, out_base);
}

GridFunction fractional_sum(const GridFunction& f, double order) {
    if (!(order > 0.0)) throw DomainError("fractional_sum: order must be positive");
    if (f.values.empty()) throw LengthError("fractional_sum: empty input");

    std::vector<double> w(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        w[i] = falling_factorial(order - 1.0 + static_cast<double>(i), order - 1.0);

    SignedLogGamma g = signed_log_gamma(order);
    if (g.sign == 0) throw DomainError("fractional_sum: Gamma(order) is a pole");
    double scale = g.sign > 0 ? std::exp(-g.log_abs) : -std::exp(-g.log_abs);

    LatticeBase out_base{f.base.sym, f.base.shift + order};
    return convolve_kernel(f, w, scale, out_base);
}

GridFunction fractional_difference(const GridFunction& f, double alpha) {
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw DomainError("fractional_difference: order must be in (1,2]");
    if (f.size() < 3)
        throw LengthError("fractional_difference: need at least 3 samples");
    if (alpha == 2.0) return forward_difference(f, 2);  // order-0 sum is the identity
    // Inner sum of order 2-alpha, kept symbolic so the kernel stays exact.
    GridFunction s = fractional_sum(f, GridValue{-1, 2}, alpha);
    return forward_difference(s, 2);
}

CompositionFit composition_residual(const GridFunction& y, double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw DomainError("composition_residual: order must be in (1,2)");
    if (y.size() < 5) throw LengthError("composition_residual: need at least 5 samples");

    GridFunction d = fractional_difference(y, alpha);          // length N-2
    GridFunction s = fractional_sum(d, GridValue{1, 0}, alpha);  // back up, same length

    // s sits two lattice steps above y's base; compare on the common window.
    std::size_t n = s.size();
    std::vector<double> r(n);
    for (std::size_t j = 0; j < n; ++j)
        r[j] = s.values[j] - y.values[j + 2];

    // Design columns t^(alpha-1), t^(alpha-2) at t = alpha + j.
    std::vector<double> col1(n), col2(n);
    for (std::size_t j = 0; j < n; ++j) {
        GridValue t{1, static_cast<int>(j)};
        col1[j] = falling_factorial(t, GridValue{1, -1}, alpha);
        col2[j] = falling_factorial(t, GridValue{1, -2}, alpha);
    }

    // 2x2 normal equations; the columns are independent on >= 2 interior points.
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    for (std::size_t j = 0; j < n; ++j) {
        a11 += col1[j] * col1[j];
        a12 += col1[j] * col2[j];
        a22 += col2[j] * col2[j];
        b1 += col1[j] * r[j];
        b2 += col2[j] * r[j];
    }
    double det = a11 * a22 - a12 * a12;
    CompositionFit fit;
    if (det != 0.0) {
        fit.c1 = (b1 * a22 - b2 * a12) / det;
        fit.c2 = (a11 * b2 - a12 * b1) / det;
    }
    double sup = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        sup = std::max(sup, std::abs(r[j] - fit.c1 * col1[j] - fit.c2 * col2[j]));
    fit.residual = sup;
    return fit;
}

} // namespace dfrac
