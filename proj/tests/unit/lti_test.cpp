#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fracfit/identify.hpp"
#include "fracfit/lti.hpp"
#include "unit/test_util.hpp"

using namespace fracfit;
using testutil::max_abs_diff;

TEST_CASE("PolynomialTF validates and reports its degree") {
    CHECK_THROWS_AS(PolynomialTF({}), std::invalid_argument);
    CHECK_THROWS_AS(PolynomialTF({1.0, std::nan("")}), std::invalid_argument);
    CHECK(PolynomialTF({1.0, 1.0}).degree() == 1);
    CHECK(PolynomialTF({1.0, 0.5, 0.0, 0.0}).degree() == 1);
    CHECK(PolynomialTF({0.0, 0.0}).degree() == -1);
}

TEST_CASE("to_state_space realizes 1/(s+1) as a single pole at -1") {
    const CompanionForm f = to_state_space(PolynomialTF({1.0, 1.0}));
    CHECK(f.dim == 1);
    CHECK(f.a_row[0] == 1.0);  // pole at -a_row[0]
    CHECK(f.input_gain == 1.0);
    CHECK(f.feedthrough == 0.0);
}

TEST_CASE("to_state_space normalizes by the leading coefficient") {
    const CompanionForm a = to_state_space(PolynomialTF({2.0, 4.0, 2.0}));
    const CompanionForm b = to_state_space(PolynomialTF({1.0, 2.0, 1.0}));
    CHECK(a.dim == b.dim);
    CHECK(a.a_row == b.a_row);  // same dynamics, pole -1 doubled
    CHECK(a.input_gain == doctest::Approx(0.5 * b.input_gain));
}

TEST_CASE("to_state_space shrinks the realization over dead leading coefficients") {
    const CompanionForm f = to_state_space(PolynomialTF({1.0, 0.5, 0.0, 0.0}));
    CHECK(f.dim == 1);
    CHECK(f.a_row[0] == 2.0);
    CHECK(f.input_gain == 2.0);
}

TEST_CASE("to_state_space handles a pure static denominator") {
    const CompanionForm f = to_state_space(PolynomialTF({4.0}));
    CHECK(f.dim == 0);
    CHECK(f.feedthrough == 0.25);
}

TEST_CASE("to_state_space rejects an all-degenerate candidate") {
    CHECK_THROWS_AS(to_state_space(PolynomialTF({1e-9, 1e-8, 0.0}), 1e-6),
                    DegenerateLeadingCoefficient);
    CHECK_THROWS_AS(to_state_space(PolynomialTF({1.0}), -1.0), std::invalid_argument);
}

TEST_CASE("simulate_integer step response of 1/(s+1) is RK4 accurate") {
    const TimeGrid grid = grid_over(0.05, 10.0);
    const Signal y = simulate_integer(PolynomialTF({1.0, 1.0}), unit_step(grid));
    double err = 0.0;
    for (std::size_t k = 0; k < grid.n_samples; ++k)
        err = std::max(err, std::abs(y.values[k] - (1.0 - std::exp(-grid.t(k)))));
    CHECK(err <= 1e-6);
}

TEST_CASE("simulate_integer ramp response of 1/(s+1) is RK4 accurate") {
    const TimeGrid grid = grid_over(0.05, 10.0);
    const Signal y = simulate_integer(PolynomialTF({1.0, 1.0}), unit_ramp(grid));
    double err = 0.0;
    for (std::size_t k = 0; k < grid.n_samples; ++k) {
        const double t = grid.t(k);
        err = std::max(err, std::abs(y.values[k] - (t - 1.0 + std::exp(-t))));
    }
    CHECK(err <= 1e-6);
}

TEST_CASE("simulate_integer integrates the pure integrator exactly") {
    const TimeGrid grid = grid_over(0.05, 10.0);
    const Signal y = simulate_integer(PolynomialTF({0.0, 1.0}), unit_step(grid));
    double err = 0.0;
    for (std::size_t k = 0; k < grid.n_samples; ++k)
        err = std::max(err, std::abs(y.values[k] - grid.t(k)));
    CHECK(err <= 1e-9);
}

TEST_CASE("simulate_integer output scales inversely with the coefficients") {
    std::mt19937_64 rng(21);
    const TimeGrid grid = grid_over(0.05, 10.0);
    const Signal u = unit_step(grid);
    for (int trial = 0; trial < 120; ++trial) {
        const int deg = 1 + static_cast<int>(testutil::u01(rng) * 3.0);
        std::vector<double> c(static_cast<std::size_t>(deg) + 1);
        for (auto& v : c)
            v = testutil::uniform(rng, 0.1, 2.0);
        if (deg == 3 && !(c[1] * c[2] > c[0] * c[3]))
            continue;  // keep the sample stable so neither run blows up
        const double lambda = testutil::uniform(rng, 0.25, 4.0);
        std::vector<double> scaled = c;
        for (auto& v : scaled)
            v *= lambda;

        const Signal y = simulate_integer(PolynomialTF(c), u);
        const Signal ys = simulate_integer(PolynomialTF(scaled), u);
        double scale = 1e-12;
        for (double v : y.values)
            scale = std::max(scale, std::abs(v));
        for (std::size_t k = 0; k < grid.n_samples; ++k)
            CHECK(std::abs(ys.values[k] * lambda - y.values[k]) <= 1e-9 * scale);
    }
}

TEST_CASE("simulate_integer is linear in the input") {
    const TimeGrid grid = grid_over(0.05, 10.0);
    const PolynomialTF tf({1.2, 0.7, 1.0});
    const Signal step = unit_step(grid);
    const Signal ramp = unit_ramp(grid);
    std::vector<double> sum(grid.n_samples);
    for (std::size_t k = 0; k < sum.size(); ++k)
        sum[k] = step.values[k] + ramp.values[k];

    const Signal y_sum = simulate_integer(tf, Signal{grid, sum});
    const Signal y_step = simulate_integer(tf, step);
    const Signal y_ramp = simulate_integer(tf, ramp);
    double scale = 1.0;
    for (double v : y_sum.values)
        scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < grid.n_samples; ++k)
        CHECK(std::abs(y_sum.values[k] - (y_step.values[k] + y_ramp.values[k])) <=
              1e-9 * scale);
}

TEST_CASE("simulate_integer reports blow-up instead of producing non-finite samples") {
    // 1/(s-3): the step response grows like e^(3t)/3, past 1e12 before t=10
    const TimeGrid grid = grid_over(0.05, 10.0);
    CHECK_THROWS_AS(simulate_integer(PolynomialTF({-3.0, 1.0}), unit_step(grid)),
                    UnstableBlowUp);
}

TEST_CASE("simulate_integer validates options and inputs") {
    const TimeGrid grid(0.05, 20);
    IntegrateOptions opts;
    opts.substeps = 0;
    CHECK_THROWS_AS(simulate_integer(PolynomialTF({1.0, 1.0}), unit_step(grid), opts),
                    std::invalid_argument);
    Signal bad{grid, std::vector<double>(20, 1.0)};
    bad.values[3] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(simulate_integer(PolynomialTF({1.0, 1.0}), bad), std::invalid_argument);
}

TEST_CASE("substeps refine the integration without changing the result materially") {
    const TimeGrid grid = grid_over(0.1, 10.0);
    const PolynomialTF tf({1.0, 0.4, 1.0});
    IntegrateOptions fine;
    fine.substeps = 8;
    const Signal y1 = simulate_integer(tf, unit_step(grid));
    const Signal y8 = simulate_integer(tf, unit_step(grid), fine);
    CHECK(max_abs_diff(y1.values, y8.values) <= 1e-5);  // dt^4 truncation at dt = 0.1
}

TEST_CASE("GL and RK4 step responses agree on slow systems and converge together") {
    // Gap at dt = 0.05 for systems with poles at unit scale, plus the O(dt)
    // shrink when dt halves; fast poles (|p|*dt near 1) are checked for the
    // shrink only since a first-order scheme cannot hold a fixed gap there.
    auto gap = [](const PolynomialTF& ptf, double dt) {
        const FractionalTF ftf = fractional_from_polynomial(ptf);
        const TimeGrid grid = grid_over(dt, 10.0);
        const Signal u = unit_step(grid);
        return max_abs_diff(simulate_integer(ptf, u).values,
                            simulate_fractional(ftf, u).values);
    };

    const std::vector<std::vector<double>> slow = {
        {1.0, 1.0},             // 1/(s+1)
        {1.0, 1.4, 1.0},        // moderately damped quadratic
        {2.0, 3.0, 1.0},        // overdamped quadratic
        {1.0, 2.0, 1.5, 0.5},   // well-damped cubic, poles -1 and -1 +- i
    };
    for (const auto& c : slow) {
        const PolynomialTF ptf(c);
        const double g1 = gap(ptf, 0.05);
        const double g2 = gap(ptf, 0.025);
        CHECK(g1 <= 0.02);
        CHECK(g2 < g1);
    }

    // Lightly damped poles take the brunt of the GL scheme's numerical
    // damping; the gap roughly halves with dt but sits above 0.02.
    {
        const PolynomialTF ptf({1.2, 0.7, 1.0});
        const double g1 = gap(ptf, 0.05);
        const double g2 = gap(ptf, 0.025);
        CHECK(g1 <= 0.05);
        CHECK(g2 < g1);
    }

    const std::vector<std::vector<double>> fast = {
        {2.0, 0.1},        // pole at -20
        {1.8, 0.3, 0.1},   // fast quadratic
    };
    for (const auto& c : fast) {
        const PolynomialTF ptf(c);
        CHECK(gap(ptf, 0.025) < gap(ptf, 0.05));
    }
}
