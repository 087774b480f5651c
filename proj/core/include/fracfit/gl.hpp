#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fracfit/signal.hpp"

namespace fracfit {

/// One denominator term coeff * s^order of a fractional transfer function.
struct FractionalTerm {
    double coeff = 0.0;
    double order = 0.0;  // >= 0; 0 denotes the constant term
};

/// Transfer function 1 / (sum_i coeff_i * s^order_i) with unit numerator.
///
/// Terms are stored in strictly descending order of exponent; construction
/// merges terms of equal order by summing their coefficients and rejects a
/// zero leading coefficient.
class FractionalTF {
public:
    explicit FractionalTF(std::vector<FractionalTerm> terms);

    const std::vector<FractionalTerm>& terms() const noexcept { return terms_; }
    double max_order() const noexcept { return terms_.front().order; }

private:
    std::vector<FractionalTerm> terms_;
};

/// Backward-difference weight row w[0..J] for a given differentiation order.
/// w[0] = 1 and w[j] = (1 - (1+order)/j) * w[j-1]; for non-negative integer
/// orders the row collapses to the signed binomial row padded with zeros.
struct GlWeights {
    double order = 0.0;
    std::vector<double> w;
};

/// Computes w[0..count]. Rejects negative or non-finite order.
GlWeights gl_weights(double order, std::size_t count);

/// Discrete differintegral of a sampled signal with zero pre-history:
///
///   y(t_k) = dt^(-order) * sum_{j=0..min(k,J)} w_j * x(t_{k-j})
///
/// where J spans the whole record for full memory (memory_len == nullopt)
/// or floor(memory_len/dt) samples otherwise. Positive order differentiates,
/// zero is the identity, negative order integrates.
Signal gl_differintegral(const Signal& x, double order,
                         std::optional<double> memory_len = std::nullopt);

/// Fixed-step time-domain response of a fractional transfer function, zero
/// initial conditions. Each step solves the discretized equation for y_k:
///
///   y_k = (u_k - sum_{j=1..min(k,J)} W_j * y_{k-j}) / W_0,
///   W_j = sum_i coeff_i * dt^(-order_i) * w_j^(order_i).
///
/// Strictly proper systems (max order > 0) are at rest at t = 0, so y_0 = 0
/// and the solve runs from k = 1; a pure static denominator yields
/// y = u / W_0 at every sample. Throws SimulationError when
/// |W_0| < denominator_tol or when any output sample comes out non-finite.
Signal simulate_fractional(const FractionalTF& tf, const Signal& u,
                           std::optional<double> memory_len = std::nullopt,
                           double denominator_tol = 1e-12);

namespace detail {
/// Weight recursion without the order >= 0 gate (integration needs order < 0).
std::vector<double> gl_weight_row(double order, std::size_t count);
}  // namespace detail

}  // namespace fracfit
