#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fracfit {

/// Thrown when a numerical scheme fails at run time (singular implicit step,
/// non-finite samples, state blow-up). Invalid arguments and malformed
/// configuration throw std::invalid_argument instead.
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Uniform sampling grid t_k = k*dt, k = 0..n_samples-1.
struct TimeGrid {
    double dt = 0.0;
    std::size_t n_samples = 0;

    TimeGrid() = default;
    TimeGrid(double dt_, std::size_t n) : dt(dt_), n_samples(n) {
        if (!(dt > 0.0) || !std::isfinite(dt))
            throw std::invalid_argument("TimeGrid: dt must be finite and > 0");
        if (n_samples < 2)
            throw std::invalid_argument("TimeGrid: need at least 2 samples");
    }

    double t(std::size_t k) const { return dt * static_cast<double>(k); }
    double t_end() const { return dt * static_cast<double>(n_samples); }

    bool operator==(const TimeGrid&) const = default;
};

/// Grid covering [0, t_end) with spacing dt; n_samples = round(t_end/dt).
inline TimeGrid grid_over(double dt, double t_end) {
    if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(t_end))
        throw std::invalid_argument("grid_over: dt and t_end must be finite, dt > 0");
    const auto n = static_cast<long long>(std::llround(t_end / dt));
    if (n < 2)
        throw std::invalid_argument("grid_over: horizon shorter than two samples");
    return TimeGrid(dt, static_cast<std::size_t>(n));
}

/// Uniformly sampled real-valued time series.
struct Signal {
    TimeGrid grid;
    std::vector<double> values;

    double operator[](std::size_t k) const { return values[k]; }
    std::size_t size() const { return values.size(); }
};

inline Signal make_signal(TimeGrid grid, std::vector<double> values) {
    if (values.size() != grid.n_samples)
        throw std::invalid_argument("Signal: value count does not match grid");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("Signal: values must be finite");
    return Signal{grid, std::move(values)};
}

/// u(t_k) = 1 for all k.
inline Signal unit_step(TimeGrid grid) {
    return Signal{grid, std::vector<double>(grid.n_samples, 1.0)};
}

/// u(t_k) = t_k.
inline Signal unit_ramp(TimeGrid grid) {
    std::vector<double> v(grid.n_samples);
    for (std::size_t k = 0; k < v.size(); ++k)
        v[k] = grid.t(k);
    return Signal{grid, std::move(v)};
}

}  // namespace fracfit
