#include <doctest.h>

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "fracfit/swarm.hpp"

using namespace fracfit::swarm;

namespace {

double sphere_at_one(std::span<const double> x) {
    double s = 0.0;
    for (double xi : x)
        s += (xi - 1.0) * (xi - 1.0);
    return s;
}

SwarmConfig default_cfg(std::size_t dims, std::uint64_t seed) {
    SwarmConfig cfg;
    cfg.dims = dims;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("config validation catches inconsistent setups") {
    SwarmConfig cfg = default_cfg(4, 1);
    CHECK_NOTHROW(cfg.validate_and_resolve());
    CHECK(cfg.lo == std::vector<double>(4, 0.0));
    CHECK(cfg.hi == std::vector<double>(4, 2.0));

    SwarmConfig bad = default_cfg(0, 1);
    CHECK_THROWS_AS(bad.validate_and_resolve(), std::invalid_argument);
    bad = default_cfg(2, 1);
    bad.pop = 1;
    CHECK_THROWS_AS(bad.validate_and_resolve(), std::invalid_argument);
    bad = default_cfg(2, 1);
    bad.lo = {0.0, 1.0};
    bad.hi = {2.0, 1.0};  // lo < hi violated in dim 1
    CHECK_THROWS_AS(bad.validate_and_resolve(), std::invalid_argument);
    bad = default_cfg(2, 1);
    bad.omega_start = 0.3;  // below omega_end
    CHECK_THROWS_AS(bad.validate_and_resolve(), std::invalid_argument);
}

TEST_CASE("init places every coordinate inside the box") {
    SwarmConfig cfg = default_cfg(4, 42);
    const SwarmState state = init_swarm(cfg, sphere_at_one);
    CHECK(state.particles.size() == 20);
    for (const auto& p : state.particles)
        for (double xi : p.x) {
            CHECK(xi >= 0.0);
            CHECK(xi <= 2.0);
        }
}

TEST_CASE("init stays inside a very thin box") {
    SwarmConfig cfg = default_cfg(2, 3);
    cfg.lo = {1.0, 1.0};
    cfg.hi = {1.0 + 1e-12, 1.0 + 1e-12};
    const SwarmState state = init_swarm(cfg, sphere_at_one);
    for (const auto& p : state.particles)
        for (std::size_t d = 0; d < 2; ++d) {
            CHECK(p.x[d] >= cfg.lo[d]);
            CHECK(p.x[d] <= cfg.hi[d]);
        }
}

TEST_CASE("same seed gives bit-identical states") {
    SwarmConfig cfg = default_cfg(4, 99);
    const SwarmState a = init_swarm(cfg, sphere_at_one);
    const SwarmState b = init_swarm(cfg, sphere_at_one);
    REQUIRE(a.particles.size() == b.particles.size());
    for (std::size_t i = 0; i < a.particles.size(); ++i) {
        CHECK(a.particles[i].x == b.particles[i].x);
        CHECK(a.particles[i].v == b.particles[i].v);
        CHECK(a.particles[i].pbest_f == b.particles[i].pbest_f);
    }
    CHECK(a.gbest_x == b.gbest_x);
    CHECK(a.gbest_f == b.gbest_f);
}

TEST_CASE("velocity update matches the hand-computed reference") {
    // 1-D, v=0.1, x=0.5, pbest=0.7, gbest=0.9, omega=0.9, phi1=phi2=1:
    // v' = 0.09 + 1.4*0.2 + 1.4*0.4 = 0.93, x' = 1.43
    SwarmConfig cfg = default_cfg(1, 0);
    cfg.pop = 2;
    cfg.omega_start = 0.9;
    cfg.omega_end = 0.4;
    cfg.validate_and_resolve();

    SwarmState state;
    state.particles.resize(2);
    auto& p = state.particles[0];
    p.x = {0.5};
    p.v = {0.1};
    p.pbest_x = {0.7};
    p.pbest_f = 0.5;
    auto& q = state.particles[1];  // carries the gbest
    q.x = {0.9};
    q.v = {0.0};
    q.pbest_x = {0.9};
    q.pbest_f = 0.1;
    state.gbest_x = {0.9};
    state.gbest_f = 0.1;
    state.iter = 0;

    const auto flat = [](std::span<const double>) { return 10.0; };
    step(state, cfg, flat, [] { return 1.0; });

    CHECK(state.particles[0].v[0] == doctest::Approx(0.93).epsilon(1e-12));
    CHECK(state.particles[0].x[0] == doctest::Approx(1.43).epsilon(1e-12));
}

TEST_CASE("a particle sitting on both bests keeps only its inertia") {
    SwarmConfig cfg = default_cfg(2, 0);
    cfg.pop = 2;
    cfg.validate_and_resolve();

    SwarmState state;
    state.particles.resize(2);
    for (auto& p : state.particles) {
        p.x = {1.0, 1.5};
        p.v = {0.25, -0.125};
        p.pbest_x = p.x;
        p.pbest_f = 1.0;
    }
    state.gbest_x = {1.0, 1.5};
    state.gbest_f = 1.0;

    const auto flat = [](std::span<const double>) { return 5.0; };
    step(state, cfg, flat);  // real draws; the difference terms vanish anyway

    const double w0 = omega_at(cfg, 0);
    CHECK(state.particles[0].v[0] == w0 * 0.25);
    CHECK(state.particles[0].v[1] == w0 * -0.125);
}

TEST_CASE("with zero stochastic factors the swarm drifts on decaying inertia") {
    SwarmConfig cfg = default_cfg(1, 0);
    cfg.pop = 2;
    cfg.lo = {-100.0};
    cfg.hi = {100.0};
    cfg.validate_and_resolve();

    SwarmState state;
    state.particles.resize(2);
    for (auto& p : state.particles) {
        p.x = {0.0};
        p.v = {1.0};
        p.pbest_x = {50.0};  // irrelevant under phi = 0
        p.pbest_f = 1.0;
    }
    state.gbest_x = {50.0};
    state.gbest_f = 1.0;

    const auto flat = [](std::span<const double>) { return 1.0; };
    const auto zero = [] { return 0.0; };
    step(state, cfg, flat, zero);
    const double w0 = omega_at(cfg, 0);
    CHECK(state.particles[0].v[0] == w0);
    CHECK(state.particles[0].x[0] == w0);
    step(state, cfg, flat, zero);
    const double w1 = omega_at(cfg, 1);
    CHECK(state.particles[0].v[0] == w0 * w1);
    CHECK(state.particles[0].x[0] == w0 + w0 * w1);
}

TEST_CASE("omega schedule hits both endpoints exactly") {
    SwarmConfig cfg = default_cfg(1, 0);
    cfg.max_iters = 200;
    CHECK(omega_at(cfg, 0) == 0.9);
    CHECK(omega_at(cfg, 199) == doctest::Approx(0.4).epsilon(1e-15));
    cfg.max_iters = 1;
    CHECK(omega_at(cfg, 0) == 0.9);
}

TEST_CASE("positions remain inside the box across iterations") {
    SwarmConfig cfg = default_cfg(3, 17);
    cfg.validate_and_resolve();
    SwarmState state = init_swarm(cfg, sphere_at_one);
    for (int it = 0; it < 50; ++it) {
        step(state, cfg, sphere_at_one);
        for (const auto& p : state.particles)
            for (std::size_t d = 0; d < cfg.dims; ++d) {
                CHECK(p.x[d] >= cfg.lo[d]);
                CHECK(p.x[d] <= cfg.hi[d]);
            }
    }
}

TEST_CASE("run converges on the 4-D sphere with the default settings") {
    SwarmConfig cfg = default_cfg(4, 1);
    const RunResult r = run(cfg, sphere_at_one);
    CHECK(r.best_f <= 1e-6);
    for (double xi : r.best_x)
        CHECK(xi == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("gbest history is non-increasing") {
    SwarmConfig cfg = default_cfg(4, 5);
    const RunResult r = run(cfg, sphere_at_one);
    for (std::size_t i = 1; i < r.history.size(); ++i)
        CHECK(r.history[i] <= r.history[i - 1]);
}

TEST_CASE("a constant fitness never changes gbest") {
    SwarmConfig cfg = default_cfg(2, 9);
    cfg.max_iters = 30;
    cfg.stop_fitness = 0.0;
    const auto flat = [](std::span<const double>) { return 3.25; };
    const RunResult r = run(cfg, flat);
    CHECK(r.best_f == 3.25);
    for (double h : r.history)
        CHECK(h == 3.25);
}

TEST_CASE("pbest ties keep the incumbent and gbest ties keep the lowest index") {
    SwarmConfig cfg = default_cfg(1, 13);
    cfg.pop = 4;
    cfg.max_iters = 5;
    cfg.stop_fitness = 0.0;
    cfg.validate_and_resolve();

    const auto flat = [](std::span<const double>) { return 2.0; };
    SwarmState state = init_swarm(cfg, flat);
    // All pbests are equal, so the first particle's initial position wins.
    CHECK(state.gbest_x == state.particles[0].pbest_x);

    const std::vector<double> incumbent = state.particles[2].pbest_x;
    step(state, cfg, flat);
    CHECK(state.particles[2].pbest_x == incumbent);  // equal fitness, no update
    CHECK(state.gbest_x == state.particles[0].pbest_x);
}

TEST_CASE("run stops immediately when the initial gbest meets the target") {
    SwarmConfig cfg = default_cfg(2, 4);
    cfg.stop_fitness = 100.0;
    const auto flat = [](std::span<const double>) { return 1.0; };
    const RunResult r = run(cfg, flat);
    CHECK(r.history.size() == 1);  // init only, zero iterations
    CHECK(r.best_f == 1.0);
}

TEST_CASE("identical runs are identical regardless of evaluation threads") {
    SwarmConfig serial = default_cfg(4, 31);
    SwarmConfig parallel = default_cfg(4, 31);
    parallel.threads = 4;
    const RunResult a = run(serial, sphere_at_one);
    const RunResult b = run(parallel, sphere_at_one);
    CHECK(a.best_x == b.best_x);
    CHECK(a.best_f == b.best_f);
    CHECK(a.history == b.history);
}
