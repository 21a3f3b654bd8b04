#pragma once

// Grid functions on shifted integer lattices and the discrete operators:
// forward difference, fractional sum (order > 0), fractional difference
// (order in (1,2]). Sums shift the output base by the order; that shift is
// stored, never re-derived at call sites.

#include <cstddef>
#include <vector>

#include "dfrac/gamma_core.hpp"

namespace dfrac {

// Base point of a lattice {a, a+1, ...}: symbolic part plus a real shift.
// The shift stays 0 on the symbolic path; generic (real) orders accumulate
// their offsets there.
struct LatticeBase {
    GridValue sym{};
    double shift = 0.0;

    double realize(double alpha) const { return sym.realize(alpha) + shift; }
};

struct GridFunction {
    LatticeBase base{};
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    // Abscissa of sample k, realized against the order.
    double abscissa(std::size_t k, double alpha) const {
        return base.realize(alpha) + static_cast<double>(k);
    }
};

// n-fold forward difference; output shrinks by n samples, base unchanged.
GridFunction forward_difference(const GridFunction& f, int n);

// Fractional sum of symbolic order (exact kernel path; order realized against
// alpha). Output lives on the lattice shifted by the order.
GridFunction fractional_sum(const GridFunction& f, GridValue order, double alpha);

// Fractional sum of real order > 0 (tolerance kernel path).
GridFunction fractional_sum(const GridFunction& f, double order);

// Fractional difference of order alpha in (1,2]: the 2-fold difference of the
// (2-alpha)-order sum; at alpha = 2 the inner sum is the identity and the
// result is the plain second difference.
GridFunction fractional_difference(const GridFunction& f, double alpha);

struct CompositionFit {
    double c1 = 0.0;        // coefficient on t^(alpha-1)
    double c2 = 0.0;        // coefficient on t^(alpha-2)
    double residual = 0.0;  // sup-norm after removing the fitted span
};

// Applies sum-after-difference to y, subtracts y on the common lattice, and
// least-squares-fits the remainder to span{t^(alpha-1), t^(alpha-2)}.
CompositionFit composition_residual(const GridFunction& y, double alpha);

} // namespace dfrac
