#include "fracfit/gl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracfit {

namespace {

void check_input_signal(const Signal& x, const char* who) {
    if (x.values.size() != x.grid.n_samples)
        throw std::invalid_argument(std::string(who) + ": signal length does not match grid");
    if (x.grid.n_samples < 2 || !(x.grid.dt > 0.0))
        throw std::invalid_argument(std::string(who) + ": invalid grid");
    for (double v : x.values)
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string(who) + ": input contains non-finite samples");
}

// Number of history samples reachable under the memory setting.
std::size_t history_span(const TimeGrid& grid, std::optional<double> memory_len, const char* who) {
    const std::size_t full = grid.n_samples - 1;
    if (!memory_len)
        return full;
    if (!std::isfinite(*memory_len) || !(*memory_len > 0.0))
        throw std::invalid_argument(std::string(who) + ": memory length must be > 0 seconds");
    const double spans = std::floor(*memory_len / grid.dt);
    if (spans >= static_cast<double>(full))
        return full;
    return static_cast<std::size_t>(spans);
}

}  // namespace

FractionalTF::FractionalTF(std::vector<FractionalTerm> terms) {
    if (terms.empty())
        throw std::invalid_argument("FractionalTF: at least one term required");
    for (const auto& t : terms) {
        if (!std::isfinite(t.coeff))
            throw std::invalid_argument("FractionalTF: coefficients must be finite");
        if (!std::isfinite(t.order) || t.order < 0.0)
            throw std::invalid_argument("FractionalTF: orders must be finite and >= 0");
    }
    std::sort(terms.begin(), terms.end(),
              [](const FractionalTerm& a, const FractionalTerm& b) { return a.order > b.order; });
    std::vector<FractionalTerm> merged;
    merged.reserve(terms.size());
    for (const auto& t : terms) {
        if (!merged.empty() && merged.back().order == t.order)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(t);
    }
    if (merged.front().coeff == 0.0)
        throw std::invalid_argument("FractionalTF: highest-order coefficient must be nonzero");
    terms_ = std::move(merged);
}

namespace detail {

std::vector<double> gl_weight_row(double order, std::size_t count) {
    std::vector<double> w(count + 1);
    w[0] = 1.0;
    for (std::size_t j = 1; j <= count; ++j) {
        w[j] = (1.0 - (1.0 + order) / static_cast<double>(j)) * w[j - 1];
        if (w[j] == 0.0)
            w[j] = 0.0;  // clear the sign so integer orders pad with plain zeros
    }
    return w;
}

}  // namespace detail

GlWeights gl_weights(double order, std::size_t count) {
    if (!std::isfinite(order) || order < 0.0)
        throw std::invalid_argument("gl_weights: order must be finite and >= 0");
    return GlWeights{order, detail::gl_weight_row(order, count)};
}

Signal gl_differintegral(const Signal& x, double order, std::optional<double> memory_len) {
    check_input_signal(x, "gl_differintegral");
    if (!std::isfinite(order))
        throw std::invalid_argument("gl_differintegral: order must be finite");

    const std::size_t n = x.grid.n_samples;
    const std::size_t span = history_span(x.grid, memory_len, "gl_differintegral");
    const std::vector<double> w = detail::gl_weight_row(order, span);
    const double scale = std::pow(x.grid.dt, -order);

    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t jmax = std::min(k, span);
        double acc = 0.0;
        for (std::size_t j = 0; j <= jmax; ++j)
            acc += w[j] * x.values[k - j];
        y[k] = scale * acc;
    }
    return Signal{x.grid, std::move(y)};
}

Signal simulate_fractional(const FractionalTF& tf, const Signal& u,
                           std::optional<double> memory_len, double denominator_tol) {
    check_input_signal(u, "simulate_fractional");

    const std::size_t n = u.grid.n_samples;
    const double dt = u.grid.dt;
    const std::size_t span = history_span(u.grid, memory_len, "simulate_fractional");

    // Terms share the output history, so their scaled weight rows fold into
    // one combined row W; W[0] is the implicit-step denominator.
    std::vector<double> combined(span + 1, 0.0);
    for (const auto& term : tf.terms()) {
        const double r = term.coeff * std::pow(dt, -term.order);
        const std::vector<double> w = detail::gl_weight_row(term.order, span);
        for (std::size_t j = 0; j <= span; ++j)
            combined[j] += r * w[j];
    }

    const double denom = combined[0];
    if (!std::isfinite(denom) || std::abs(denom) < denominator_tol)
        throw SimulationError("simulate_fractional: implicit-step denominator below tolerance");

    // Strictly proper systems start at rest, y(0) = 0, and the per-step solve
    // runs from k = 1. A pure static denominator has no dynamics and maps the
    // input through at every sample including k = 0.
    const bool strictly_proper = tf.max_order() > 0.0;

    std::vector<double> y(n);
    const std::size_t first = strictly_proper ? 1 : 0;
    if (strictly_proper)
        y[0] = 0.0;
    for (std::size_t k = first; k < n; ++k) {
        double acc = u.values[k];
        const std::size_t jmax = std::min(k, span);
        for (std::size_t j = 1; j <= jmax; ++j)
            acc -= combined[j] * y[k - j];
        y[k] = acc / denom;
        if (!std::isfinite(y[k]))
            throw SimulationError("simulate_fractional: non-finite output at t = " +
                                  std::to_string(u.grid.t(k)));
    }
    return Signal{u.grid, std::move(y)};
}

}  // namespace fracfit
