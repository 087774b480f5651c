#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracfit/gl.hpp"
#include "fracfit/lti.hpp"
#include "fracfit/signal.hpp"
#include "fracfit/swarm.hpp"

namespace fracfit {

enum class Excitation { step, ramp };

const char* to_string(Excitation e);
std::optional<Excitation> excitation_from_string(const std::string& name);

struct ExperimentConfig {
    double dt = 0.05;
    double t_end = 10.0;
    std::optional<double> memory_len;  // nullopt = full memory
    swarm::SwarmConfig swarm;          // dims is set by identify from the template
    double penalty_fitness = 1e9;
    std::vector<Excitation> inputs = {Excitation::step, Excitation::ramp};
    IntegrateOptions integrator;

    TimeGrid grid() const { return grid_over(dt, t_end); }
    void validate() const;
};

/// Input/output record for one excitation; all signals share one grid.
struct Observation {
    Excitation kind = Excitation::step;
    Signal input;
    Signal output;
};

struct ObservationSet {
    std::vector<Observation> entries;

    const Observation* find(Excitation kind) const;
};

/// Integer powers a candidate model may use, sorted descending. Each term of
/// non-integer order a contributes floor(a) and floor(a)+1; integer-order
/// terms contribute their own power. The search dimension is the set's size
/// and dimension 0 pairs with the highest power.
std::vector<int> derive_template(const FractionalTF& tf);

/// Applies the configured excitations to the fractional system and records
/// the sampled responses (simulate_fractional, zero initial conditions).
ObservationSet generate_observations(const FractionalTF& tf, const ExperimentConfig& cfg);

/// FractionalTF with one term per polynomial power; bridges candidates into
/// the fractional simulator for cross-scheme comparisons.
FractionalTF fractional_from_polynomial(const PolynomialTF& tf);

/// Candidate coefficients paired with template powers (descending order).
PolynomialTF polynomial_from_template(std::span<const double> coeffs,
                                      const std::vector<int>& powers);

struct FitnessPart {
    Excitation kind = Excitation::step;
    double value = 0.0;
};

struct FitnessBreakdown {
    double total = 0.0;
    std::vector<FitnessPart> parts;  // one per observation, in set order
    bool penalized = false;
};

/// Sum over excitations of the per-sample squared deviation between observed
/// outputs and the candidate's RK4 response. Plain sums over the grid, no dt
/// weighting, t = 0 included. Degenerate or blown-up candidates yield
/// cfg.penalty_fitness, so the function is total over any finite input.
double fitness(std::span<const double> coeffs, const std::vector<int>& powers,
               const ObservationSet& obs, const ExperimentConfig& cfg);

FitnessBreakdown fitness_breakdown(std::span<const double> coeffs,
                                   const std::vector<int>& powers,
                                   const ObservationSet& obs,
                                   const ExperimentConfig& cfg);

struct CurvePair {
    Excitation kind = Excitation::step;
    Signal observed;
    Signal model;
};

struct IdentificationReport {
    std::vector<int> template_powers;   // descending
    std::vector<double> coefficients;   // aligned with template_powers
    double best_f = 0.0;
    double f_step = 0.0;
    double f_ramp = 0.0;
    std::vector<CurvePair> curves;
    std::vector<double> history;        // per-iteration gbest_f
    ExperimentConfig config;
    std::uint64_t seed = 0;
};

/// Full pipeline: derive the template, synthesize observations, minimize the
/// fitness with the swarm, and assemble the report (model curves simulated at
/// the best coefficients).
IdentificationReport identify(const FractionalTF& tf, const ExperimentConfig& cfg);

/// Same, but against externally supplied observations (measured data or any
/// pre-built set) and an explicit template.
IdentificationReport identify_observed(const std::vector<int>& powers,
                                       const ObservationSet& obs,
                                       const ExperimentConfig& cfg);

}  // namespace fracfit
