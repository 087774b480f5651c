#include "fracfit/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace fracfit::swarm {

void SwarmConfig::validate_and_resolve() {
    if (dims == 0)
        throw std::invalid_argument("SwarmConfig: dims must be >= 1");
    if (pop < 2)
        throw std::invalid_argument("SwarmConfig: pop must be >= 2");
    if (lo.empty())
        lo.assign(dims, 0.0);
    if (hi.empty())
        hi.assign(dims, 2.0);
    if (lo.size() != dims || hi.size() != dims)
        throw std::invalid_argument("SwarmConfig: bound vectors must have dims entries");
    for (std::size_t d = 0; d < dims; ++d) {
        if (!std::isfinite(lo[d]) || !std::isfinite(hi[d]) || !(lo[d] < hi[d]))
            throw std::invalid_argument("SwarmConfig: need lo < hi per dimension");
    }
    if (!(c1 >= 0.0) || !(c2 >= 0.0))
        throw std::invalid_argument("SwarmConfig: c1 and c2 must be >= 0");
    if (!std::isfinite(omega_start) || !std::isfinite(omega_end) || omega_start < omega_end)
        throw std::invalid_argument("SwarmConfig: need omega_start >= omega_end");
    if (max_iters == 0)
        throw std::invalid_argument("SwarmConfig: max_iters must be >= 1");
    if (!(stop_fitness >= 0.0))
        throw std::invalid_argument("SwarmConfig: stop_fitness must be >= 0");
    if (threads == 0)
        throw std::invalid_argument("SwarmConfig: threads must be >= 1");
}

double omega_at(const SwarmConfig& cfg, std::size_t iter) {
    if (cfg.max_iters <= 1)
        return cfg.omega_start;
    const double frac =
        static_cast<double>(iter) / static_cast<double>(cfg.max_iters - 1);
    return cfg.omega_start - (cfg.omega_start - cfg.omega_end) * frac;
}

double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace {

// Evaluates fitness for all positions; results land in index order so the
// outcome is independent of the worker count.
std::vector<double> evaluate_all(const std::vector<const std::vector<double>*>& positions,
                                 const FitnessFn& fitness, unsigned threads) {
    const std::size_t n = positions.size();
    std::vector<double> out(n);
    const unsigned workers =
        std::min<unsigned>(threads, static_cast<unsigned>(n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = fitness(*positions[i]);
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers)
                out[i] = fitness(*positions[i]);
        });
    }
    for (auto& th : pool)
        th.join();
    return out;
}

void refresh_gbest(SwarmState& state) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < state.particles.size(); ++i)
        if (state.particles[i].pbest_f < state.particles[best].pbest_f)
            best = i;
    state.gbest_f = state.particles[best].pbest_f;
    state.gbest_x = state.particles[best].pbest_x;
}

}  // namespace

SwarmState init_swarm(SwarmConfig cfg, const FitnessFn& fitness) {
    cfg.validate_and_resolve();

    SwarmState state;
    state.rng.seed(cfg.seed);
    state.particles.resize(cfg.pop);

    for (auto& p : state.particles) {
        p.x.resize(cfg.dims);
        p.v.resize(cfg.dims);
        for (std::size_t d = 0; d < cfg.dims; ++d) {
            const double width = cfg.hi[d] - cfg.lo[d];
            p.x[d] = cfg.lo[d] + unit_draw(state.rng) * width;
        }
        for (std::size_t d = 0; d < cfg.dims; ++d) {
            const double width = cfg.hi[d] - cfg.lo[d];
            p.v[d] = -0.5 * width + unit_draw(state.rng) * width;
        }
        p.pbest_x = p.x;
    }

    std::vector<const std::vector<double>*> positions;
    positions.reserve(cfg.pop);
    for (const auto& p : state.particles)
        positions.push_back(&p.x);
    const std::vector<double> f = evaluate_all(positions, fitness, cfg.threads);
    for (std::size_t i = 0; i < state.particles.size(); ++i)
        state.particles[i].pbest_f = f[i];

    refresh_gbest(state);
    return state;
}

void step(SwarmState& state, const SwarmConfig& cfg, const FitnessFn& fitness,
          const UnitDrawFn& draw) {
    if (cfg.lo.size() != cfg.dims || cfg.hi.size() != cfg.dims)
        throw std::invalid_argument("step: config bounds unresolved, call validate_and_resolve");
    const double omega = omega_at(cfg, state.iter);

    // Velocity/position updates first, for every particle, so each uses the
    // gbest of the previous iteration and the draw order stays fixed.
    for (auto& p : state.particles) {
        for (std::size_t d = 0; d < cfg.dims; ++d) {
            const double phi1 = draw();
            const double phi2 = draw();
            double v = omega * p.v[d] + cfg.c1 * phi1 * (p.pbest_x[d] - p.x[d]) +
                       cfg.c2 * phi2 * (state.gbest_x[d] - p.x[d]);
            double x = p.x[d] + v;
            if (x < cfg.lo[d]) {
                x = cfg.lo[d];
                v = 0.0;
            } else if (x > cfg.hi[d]) {
                x = cfg.hi[d];
                v = 0.0;
            }
            p.v[d] = v;
            p.x[d] = x;
        }
    }

    std::vector<const std::vector<double>*> positions;
    positions.reserve(state.particles.size());
    for (const auto& p : state.particles)
        positions.push_back(&p.x);
    const std::vector<double> f = evaluate_all(positions, fitness, cfg.threads);

    for (std::size_t i = 0; i < state.particles.size(); ++i) {
        auto& p = state.particles[i];
        if (f[i] < p.pbest_f) {  // ties keep the incumbent
            p.pbest_f = f[i];
            p.pbest_x = p.x;
        }
    }
    refresh_gbest(state);
    ++state.iter;
}

void step(SwarmState& state, const SwarmConfig& cfg, const FitnessFn& fitness) {
    step(state, cfg, fitness, [&state] { return unit_draw(state.rng); });
}

RunResult run(SwarmConfig cfg, const FitnessFn& fitness) {
    cfg.validate_and_resolve();
    SwarmState state = init_swarm(cfg, fitness);

    RunResult result;
    result.history.reserve(cfg.max_iters + 1);
    result.history.push_back(state.gbest_f);
    while (state.iter < cfg.max_iters && state.gbest_f > cfg.stop_fitness) {
        step(state, cfg, fitness);
        result.history.push_back(state.gbest_f);
    }
    result.best_x = state.gbest_x;
    result.best_f = state.gbest_f;
    return result;
}

}  // namespace fracfit::swarm
