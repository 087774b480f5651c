#pragma once

#include <cstddef>
#include <vector>

#include "fracfit/signal.hpp"

namespace fracfit {

/// All coefficients at or above the leading tolerance vanished; the candidate
/// has no realizable dynamics. Fitness layers map this to a penalty.
class DegenerateLeadingCoefficient : public SimulationError {
public:
    using SimulationError::SimulationError;
};

/// A state magnitude crossed the overflow bound during integration.
class UnstableBlowUp : public SimulationError {
public:
    using SimulationError::SimulationError;
};

/// Transfer function 1 / (sum_p coeffs[p] * s^p) with unit numerator.
/// coeffs is indexed by power of s; coefficients may be any finite values.
class PolynomialTF {
public:
    explicit PolynomialTF(std::vector<double> coeffs_by_power);

    const std::vector<double>& coeffs() const noexcept { return coeffs_; }

    /// Largest power with a nonzero coefficient, -1 if all are zero.
    int degree() const noexcept;

private:
    std::vector<double> coeffs_;
};

/// Controllable-companion realization of 1/(sum coeffs[p] s^p), normalized by
/// the leading coefficient. States are y, y', ..., y^(dim-1); the state
/// matrix is the shift row-block with last row -a_row, the input enters the
/// last state scaled by input_gain, and the output selects state 0. dim == 0
/// degenerates to pure feedthrough y = feedthrough * u.
struct CompanionForm {
    std::size_t dim = 0;
    std::vector<double> a_row;   // coeffs[p]/coeffs[dim] for p = 0..dim-1
    double input_gain = 0.0;     // 1/coeffs[dim] (0 when dim == 0)
    double feedthrough = 0.0;    // 1/coeffs[0] when dim == 0, else 0
};

/// The effective degree is the largest power whose coefficient magnitude is
/// at least leading_tol; coefficients above it are treated as absent, so
/// near-zero leading coefficients shrink the realization instead of blowing
/// it up. Throws DegenerateLeadingCoefficient when every coefficient is
/// below the tolerance.
CompanionForm to_state_space(const PolynomialTF& tf, double leading_tol = 1e-6);

struct IntegrateOptions {
    double leading_tol = 1e-6;
    double overflow_bound = 1e12;
    int substeps = 1;  // RK4 substeps per output sample
};

/// Classical fixed-step RK4 response of the companion system on u's grid,
/// zero initial state, input held by linear interpolation between samples.
/// Throws DegenerateLeadingCoefficient or UnstableBlowUp.
Signal simulate_integer(const PolynomialTF& tf, const Signal& u,
                        const IntegrateOptions& opts = {});

}  // namespace fracfit
