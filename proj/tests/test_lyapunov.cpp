#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dfrac/lyapunov.hpp"

using namespace dfrac;

namespace {

// At b = 1 the interior matrix is 2x2 and everything has a closed form:
// C = 1 - alpha(alpha-1)/2 and the critical scale solves a quadratic.
double bound_b1(double alpha) { return 1.0 - alpha * (alpha - 1.0) / 2.0; }

double lambda_star_b1(double alpha) {
    double c = bound_b1(alpha);
    double t = 2.0 * alpha - 1.0;
    return 2.0 * c / (t + std::sqrt(t * t + 4.0 * c));
}

GridFunction solution_like(std::vector<double> values) {
    GridFunction y;
    y.base = LatticeBase{GridValue{1, -2}, 0.0};
    y.values = std::move(values);
    return y;
}

} // namespace

TEST_CASE("bound constant: frozen values and the b=1 closed form") {
    CHECK(lyapunov_bound(1.5, 3) == doctest::Approx(0.3875).epsilon(1e-12));
    CHECK(lyapunov_bound(1.5, 1) == doctest::Approx(0.625).epsilon(1e-12));
    for (double alpha : {1.1, 1.25, 1.5, 1.75, 1.9})
        CHECK(lyapunov_bound(alpha, 1) == doctest::Approx(bound_b1(alpha)).epsilon(1e-12));
    // Large-b evaluation stays stable in log space.
    CHECK(lyapunov_bound(1.1, 50) == doctest::Approx(0.6419607268115529).epsilon(1e-9));
}

TEST_CASE("bound constant from the gamma-ratio definition") {
    double num = std::tgamma(1.5) * std::tgamma(3.0) *
                 (std::tgamma(0.5) * std::tgamma(5.0) - std::tgamma(4.5));
    double den = std::tgamma(0.5) * std::tgamma(5.0) * std::tgamma(3.5);
    CHECK(lyapunov_bound(1.5, 3) == doctest::Approx(num / den).epsilon(1e-12));
}

TEST_CASE("bound and kernel maximum are dual: C * G_max = Gamma(alpha)") {
    for (double alpha : {1.1, 1.5, 1.9})
        for (int b : {1, 5, 10}) {
            double prod = lyapunov_bound(alpha, b) * green_max_closed_form(alpha, b);
            CHECK(prod == doctest::Approx(std::tgamma(alpha)).epsilon(1e-12));
        }
}

TEST_CASE("bound constant parameter validation") {
    CHECK_THROWS_AS(lyapunov_bound(2.0, 3), DegenerateError);
    CHECK_THROWS_AS(lyapunov_bound(1.0, 3), DomainError);
    CHECK_THROWS_AS(lyapunov_bound(2.5, 3), DomainError);
    CHECK_THROWS_AS(lyapunov_bound(1.5, 0), DomainError);
}

TEST_CASE("critical scale at alpha=3/2, b=1 equals (sqrt(26)-4)/4") {
    EigenResult eig = perron_smallest_lambda(1.5, 1, {1.0, 1.0});
    double expect = (std::sqrt(26.0) - 4.0) / 4.0;
    CHECK(eig.lambda_star == doctest::Approx(expect).epsilon(1e-10));
    CHECK(eig.rho == doctest::Approx(1.0 / expect).epsilon(1e-10));
    CHECK(eig.residual <= 1e-10);
    CHECK(eig.iterations < 100000);

    REQUIRE(eig.y_star.size() == 2);
    double sup = 0.0;
    for (double v : eig.y_star.values) {
        CHECK(v > 0.0);
        sup = std::max(sup, v);
    }
    CHECK(sup == 1.0);

    REQUIRE(eig.y_extended.size() == 4);
    CHECK(eig.y_extended.values[0] == 0.0);
    CHECK(eig.y_extended.values[1] == eig.y_star.values[0]);
    CHECK(eig.y_extended.values[2] == eig.y_star.values[1]);
    CHECK(eig.y_extended.values[3] < 0.0);
}

TEST_CASE("critical scale matches the b=1 closed form across orders") {
    for (double alpha : {1.1, 1.25, 1.5, 1.75, 1.9}) {
        EigenResult eig = perron_smallest_lambda(alpha, 1, {1.0, 1.0});
        CHECK(eig.lambda_star == doctest::Approx(lambda_star_b1(alpha)).epsilon(1e-10));
    }
}

TEST_CASE("critical scale: frozen values at b=3") {
    EigenResult ones = perron_smallest_lambda(1.5, 3, {1.0, 1.0, 1.0, 1.0});
    CHECK(ones.lambda_star == doctest::Approx(0.13970929035525972).epsilon(1e-9));
    EigenResult weighted = perron_smallest_lambda(1.5, 3, {0.5, 2.0, 1.0, 0.25});
    CHECK(weighted.lambda_star == doctest::Approx(0.19900642923306752).epsilon(1e-9));
}

TEST_CASE("halving the weights doubles the critical scale") {
    std::vector<double> h{1.0, 0.5, 2.0, 1.5};
    std::vector<double> half(h);
    for (double& v : half) v *= 0.5;
    EigenResult a = perron_smallest_lambda(1.6, 3, h);
    EigenResult b = perron_smallest_lambda(1.6, 3, half);
    CHECK(b.lambda_star == doctest::Approx(2.0 * a.lambda_star).epsilon(1e-12));
}

TEST_CASE("eigen scan parameter validation") {
    CHECK_THROWS_AS(perron_smallest_lambda(1.5, 0, {1.0}), DomainError);
    CHECK_THROWS_AS(perron_smallest_lambda(1.5, 1, {1.0}), DomainError);
    CHECK_THROWS_AS(perron_smallest_lambda(1.5, 1, {1.0, -1.0}), DomainError);
    CHECK_THROWS_AS(perron_smallest_lambda(2.0, 1, {1.0, 1.0}), DegenerateError);
    CHECK_THROWS_AS(perron_smallest_lambda(1.5, 1, {0.0, 0.0}), ZeroKernelError);
}

TEST_CASE("inequality report rejects trivial and sign-breaking inputs") {
    BvpProblem prob = BvpProblem::make(1.5, 1, {1.0, 1.0}, 0.5, Nonlinearity::linear());
    CHECK_THROWS_AS(check_inequality(prob, solution_like({0.0, 0.0, 0.0, 0.0})),
                    TrivialSolutionError);
    CHECK_THROWS_AS(check_inequality(prob, solution_like({0.0, 1e-9, -1e-9, 0.0})),
                    TrivialSolutionError);
    // All candidate values nonpositive: f(eta) <= 0 for the identity nonlinearity.
    CHECK_THROWS_AS(check_inequality(prob, solution_like({0.0, -1.0, -2.0, -1.0})), DomainError);
    // Wrong sample count.
    CHECK_THROWS_AS(check_inequality(prob, solution_like({0.0, 1.0, 1.0})), DomainError);
}

TEST_CASE("inequality report arithmetic") {
    BvpProblem prob = BvpProblem::make(1.5, 1, {1.0, 1.0}, 0.3, Nonlinearity::linear());
    LyapunovReport rep = check_inequality(prob, solution_like({0.0, 0.5, 1.0, -0.2}));
    CHECK(rep.bound_C == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(rep.h_sum == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(rep.eta == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rep.f_eta == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rep.lhs == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(rep.rhs == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(rep.margin == doctest::Approx(-0.025).epsilon(1e-10));
    CHECK_FALSE(rep.holds);

    BvpProblem heavier = BvpProblem::make(1.5, 1, {1.0, 1.0}, 0.4, Nonlinearity::linear());
    LyapunovReport rep2 = check_inequality(heavier, solution_like({0.0, 0.5, 1.0, -0.2}));
    CHECK(rep2.margin == doctest::Approx(0.175).epsilon(1e-10));
    CHECK(rep2.holds);
}

TEST_CASE("exponential fixed point: the report holds vacuously") {
    BvpProblem prob = BvpProblem::make(1.5, 3, {1.0, 1.0, 1.0, 1.0}, 0.1,
                                       Nonlinearity::exponential());
    FixedPointResult res = solve_nonlinear_fixed_point(prob);
    REQUIRE(res.converged);
    LyapunovReport rep = check_inequality(prob, res.y);
    CHECK(rep.eta < 0.0);
    // The solution is nonpositive, so the clamped exponential forcing is the
    // constant 1 and the fixed point is exactly lambda times the linear solve.
    GridFunction lin = solve_linear_bvp_green(1.5, 3, {1.0, 1.0, 1.0, 1.0});
    CHECK(rep.eta == doctest::Approx(0.1 * lin.values[1]).epsilon(1e-8));
    CHECK(rep.eta == doctest::Approx(-0.301075).epsilon(1e-5));
    CHECK(rep.f_eta == doctest::Approx(std::exp(rep.eta)).epsilon(1e-12));
    CHECK(rep.f_eta > 0.0);
    CHECK(rep.rhs < 0.0);
    CHECK(rep.holds);
}

TEST_CASE("eigen solution at the critical scale reproduces the known margin gap") {
    EigenResult eig = perron_smallest_lambda(1.5, 1, {1.0, 1.0});
    BvpProblem prob = BvpProblem::make(1.5, 1, {1.0, 1.0}, eig.lambda_star,
                                       Nonlinearity::linear());
    LyapunovReport rep = check_inequality(prob, eig.y_extended);
    CHECK(rep.eta == doctest::Approx(1.0).epsilon(1e-12));
    double expect_margin = (std::sqrt(26.0) - 4.0) / 2.0 - 0.625;
    CHECK(rep.margin == doctest::Approx(expect_margin).epsilon(1e-9));
    CHECK_FALSE(rep.holds);
}

TEST_CASE("full sweep: margins clear the tolerance except at three known cells") {
    std::vector<double> alphas{1.1, 1.25, 1.5, 1.75, 1.9};
    std::vector<int> bs{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<SweepRow> rows = bound_sweep(alphas, bs);
    REQUIRE(rows.size() == 50);

    int violations = 0;
    for (const auto& row : rows) {
        REQUIRE(row.error.empty());
        bool violated = row.margin < -1e-9;
        if (violated) {
            ++violations;
            CHECK(row.b == 1);
            double expect = 2.0 * lambda_star_b1(row.alpha) - bound_b1(row.alpha);
            CHECK(row.margin == doctest::Approx(expect).epsilon(1e-9));
            CHECK((row.alpha == 1.5 || row.alpha == 1.75 || row.alpha == 1.9));
        }
    }
    CHECK(violations == 3);
}

TEST_CASE("sweep records degenerate cells instead of failing") {
    std::vector<SweepRow> rows = bound_sweep({2.0}, {1, 2});
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) CHECK(row.error == "degenerate");
}
