#include "fracfit/lti.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracfit {

PolynomialTF::PolynomialTF(std::vector<double> coeffs_by_power) {
    if (coeffs_by_power.empty())
        throw std::invalid_argument("PolynomialTF: at least one coefficient required");
    for (double c : coeffs_by_power)
        if (!std::isfinite(c))
            throw std::invalid_argument("PolynomialTF: coefficients must be finite");
    coeffs_ = std::move(coeffs_by_power);
}

int PolynomialTF::degree() const noexcept {
    for (int p = static_cast<int>(coeffs_.size()) - 1; p >= 0; --p)
        if (coeffs_[static_cast<std::size_t>(p)] != 0.0)
            return p;
    return -1;
}

CompanionForm to_state_space(const PolynomialTF& tf, double leading_tol) {
    if (!(leading_tol > 0.0) || !std::isfinite(leading_tol))
        throw std::invalid_argument("to_state_space: leading_tol must be finite and > 0");

    const auto& c = tf.coeffs();
    int dg = -1;
    for (int p = static_cast<int>(c.size()) - 1; p >= 0; --p) {
        if (std::abs(c[static_cast<std::size_t>(p)]) >= leading_tol) {
            dg = p;
            break;
        }
    }
    if (dg < 0)
        throw DegenerateLeadingCoefficient(
            "to_state_space: all coefficients below leading tolerance");

    CompanionForm f;
    f.dim = static_cast<std::size_t>(dg);
    if (dg == 0) {
        f.feedthrough = 1.0 / c[0];
        return f;
    }
    f.a_row.resize(f.dim);
    const double lead = c[f.dim];
    for (std::size_t p = 0; p < f.dim; ++p)
        f.a_row[p] = c[p] / lead;
    f.input_gain = 1.0 / lead;
    return f;
}

namespace {

// dx/dt for the companion system at input value uv.
void companion_deriv(const CompanionForm& f, const std::vector<double>& x, double uv,
                     std::vector<double>& dx) {
    const std::size_t m = f.dim;
    for (std::size_t i = 0; i + 1 < m; ++i)
        dx[i] = x[i + 1];
    double acc = uv * f.input_gain;
    for (std::size_t i = 0; i < m; ++i)
        acc -= f.a_row[i] * x[i];
    dx[m - 1] = acc;
}

void check_bounded(const std::vector<double>& x, double bound, double t) {
    for (double xi : x) {
        if (!(std::abs(xi) <= bound))  // catches NaN as well
            throw UnstableBlowUp("simulate_integer: state exceeded overflow bound at t = " +
                                 std::to_string(t));
    }
}

}  // namespace

Signal simulate_integer(const PolynomialTF& tf, const Signal& u, const IntegrateOptions& opts) {
    if (u.values.size() != u.grid.n_samples)
        throw std::invalid_argument("simulate_integer: signal length does not match grid");
    for (double v : u.values)
        if (!std::isfinite(v))
            throw std::invalid_argument("simulate_integer: input contains non-finite samples");
    if (opts.substeps < 1)
        throw std::invalid_argument("simulate_integer: substeps must be >= 1");
    if (!(opts.overflow_bound > 0.0))
        throw std::invalid_argument("simulate_integer: overflow bound must be > 0");

    const CompanionForm f = to_state_space(tf, opts.leading_tol);
    const std::size_t n = u.grid.n_samples;
    std::vector<double> y(n);

    if (f.dim == 0) {
        for (std::size_t k = 0; k < n; ++k)
            y[k] = f.feedthrough * u.values[k];
        return Signal{u.grid, std::move(y)};
    }

    const std::size_t m = f.dim;
    const int sub = opts.substeps;
    const double h = u.grid.dt / sub;

    std::vector<double> x(m, 0.0), xt(m), k1(m), k2(m), k3(m), k4(m);
    y[0] = 0.0;

    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double u0 = u.values[k];
        const double du = u.values[k + 1] - u0;
        for (int s = 0; s < sub; ++s) {
            const double ua = u0 + du * (static_cast<double>(s) / sub);
            const double um = u0 + du * ((static_cast<double>(s) + 0.5) / sub);
            const double ub = u0 + du * ((static_cast<double>(s) + 1.0) / sub);

            companion_deriv(f, x, ua, k1);
            for (std::size_t i = 0; i < m; ++i) xt[i] = x[i] + 0.5 * h * k1[i];
            companion_deriv(f, xt, um, k2);
            for (std::size_t i = 0; i < m; ++i) xt[i] = x[i] + 0.5 * h * k2[i];
            companion_deriv(f, xt, um, k3);
            for (std::size_t i = 0; i < m; ++i) xt[i] = x[i] + h * k3[i];
            companion_deriv(f, xt, ub, k4);

            for (std::size_t i = 0; i < m; ++i)
                x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            check_bounded(x, opts.overflow_bound, u.grid.t(k) + (s + 1) * h);
        }
        y[k + 1] = x[0];
    }
    return Signal{u.grid, std::move(y)};
}

}  // namespace fracfit
