#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace fracfit::swarm {

/// Fitness over a D-dimensional box. Must return a finite value (possibly a
/// penalty) for every in-box point and must be a pure function: evaluations
/// may run concurrently within an iteration.
using FitnessFn = std::function<double(std::span<const double>)>;

/// Source of uniform draws on [0,1); lets tests stub the stochastic factors.
using UnitDrawFn = std::function<double()>;

struct SwarmConfig {
    std::size_t dims = 0;
    std::size_t pop = 20;
    std::vector<double> lo;  // empty means 0 per dimension
    std::vector<double> hi;  // empty means 2 per dimension
    double c1 = 1.4;
    double c2 = 1.4;
    double omega_start = 0.9;
    double omega_end = 0.4;
    std::size_t max_iters = 200;
    double stop_fitness = 1e-8;
    std::uint64_t seed = 0;
    unsigned threads = 1;  // intra-iteration fitness evaluation threads

    /// Throws std::invalid_argument on an inconsistent configuration and
    /// fills empty bound vectors with the [0, 2] default box.
    void validate_and_resolve();
};

struct Particle {
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> pbest_x;
    double pbest_f = 0.0;
};

struct SwarmState {
    std::vector<Particle> particles;
    std::vector<double> gbest_x;
    double gbest_f = 0.0;
    std::size_t iter = 0;
    std::mt19937_64 rng;  // draw stream shared by init and all steps
};

/// Inertia schedule: linear from omega_start (iter 0) to omega_end
/// (iter max_iters-1); constant when max_iters <= 1.
double omega_at(const SwarmConfig& cfg, std::size_t iter);

/// Maps engine output to a uniform double in [0,1) via the top 53 bits, so
/// the draw sequence is reproducible independent of the standard library's
/// distribution implementations.
double unit_draw(std::mt19937_64& rng);

/// Seeds the generator with cfg.seed and draws, particle-major and
/// dimension-minor, each particle's position (uniform over [lo,hi]) followed
/// by its velocity (uniform over [-(hi-lo)/2, +(hi-lo)/2]). pbest starts at
/// the initial position; gbest is the best initial pbest, lowest particle
/// index winning exact ties.
SwarmState init_swarm(SwarmConfig cfg, const FitnessFn& fitness);

/// One synchronous iteration. For each particle, for each dimension, draws
/// phi1 then phi2 and applies
///
///   v' = omega(iter)*v + c1*phi1*(pbest - x) + c2*phi2*(gbest - x)
///   x' = x + v'
///
/// using the gbest of the previous iteration throughout, then clamps x' into
/// [lo, hi], zeroing the clamped velocity component. Fitness at the new
/// positions (evaluated with cfg.threads workers; results are reduced in
/// particle-index order), updates pbest on strict improvement and gbest from
/// the pbests. Preconditions: state.iter < cfg.max_iters and cfg has been
/// through validate_and_resolve (run() handles both).
void step(SwarmState& state, const SwarmConfig& cfg, const FitnessFn& fitness);

/// As above with the stochastic factors supplied by `draw` instead of the
/// state's own generator.
void step(SwarmState& state, const SwarmConfig& cfg, const FitnessFn& fitness,
          const UnitDrawFn& draw);

struct RunResult {
    std::vector<double> best_x;
    double best_f = 0.0;
    /// gbest_f after initialization followed by one entry per iteration run;
    /// non-increasing by construction.
    std::vector<double> history;
};

/// Iterates until max_iters iterations have run or gbest_f <= stop_fitness.
RunResult run(SwarmConfig cfg, const FitnessFn& fitness);

}  // namespace fracfit::swarm
