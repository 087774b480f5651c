#include "fracfit/identify.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace fracfit {

const char* to_string(Excitation e) {
    switch (e) {
        case Excitation::step: return "step";
        case Excitation::ramp: return "ramp";
    }
    return "?";
}

std::optional<Excitation> excitation_from_string(const std::string& name) {
    if (name == "step")
        return Excitation::step;
    if (name == "ramp")
        return Excitation::ramp;
    return std::nullopt;
}

void ExperimentConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("ExperimentConfig: dt must be finite and > 0");
    if (!std::isfinite(t_end) || t_end < 10.0 * dt)
        throw std::invalid_argument("ExperimentConfig: t_end must be at least 10*dt");
    if (memory_len && !(*memory_len > 0.0))
        throw std::invalid_argument("ExperimentConfig: memory length must be > 0 seconds");
    if (!(penalty_fitness > 0.0) || !std::isfinite(penalty_fitness))
        throw std::invalid_argument("ExperimentConfig: penalty_fitness must be finite and > 0");
    if (inputs.empty())
        throw std::invalid_argument("ExperimentConfig: at least one excitation required");
    std::set<Excitation> seen(inputs.begin(), inputs.end());
    if (seen.size() != inputs.size())
        throw std::invalid_argument("ExperimentConfig: duplicate excitation");
}

const Observation* ObservationSet::find(Excitation kind) const {
    for (const auto& o : entries)
        if (o.kind == kind)
            return &o;
    return nullptr;
}

std::vector<int> derive_template(const FractionalTF& tf) {
    std::set<int> powers;
    for (const auto& term : tf.terms()) {
        const double fl = std::floor(term.order);
        if (fl == term.order) {
            powers.insert(static_cast<int>(fl));
        } else {
            powers.insert(static_cast<int>(fl));
            powers.insert(static_cast<int>(fl) + 1);
        }
    }
    return std::vector<int>(powers.rbegin(), powers.rend());
}

ObservationSet generate_observations(const FractionalTF& tf, const ExperimentConfig& cfg) {
    cfg.validate();
    const TimeGrid grid = cfg.grid();
    ObservationSet obs;
    obs.entries.reserve(cfg.inputs.size());
    for (Excitation kind : cfg.inputs) {
        Signal input = kind == Excitation::step ? unit_step(grid) : unit_ramp(grid);
        Signal output = simulate_fractional(tf, input, cfg.memory_len);
        obs.entries.push_back(Observation{kind, std::move(input), std::move(output)});
    }
    return obs;
}

FractionalTF fractional_from_polynomial(const PolynomialTF& tf) {
    std::vector<FractionalTerm> terms;
    const auto& c = tf.coeffs();
    for (std::size_t p = 0; p < c.size(); ++p)
        terms.push_back(FractionalTerm{c[p], static_cast<double>(p)});
    return FractionalTF(std::move(terms));
}

PolynomialTF polynomial_from_template(std::span<const double> coeffs,
                                      const std::vector<int>& powers) {
    if (coeffs.size() != powers.size())
        throw std::invalid_argument("polynomial_from_template: coefficient count mismatch");
    if (powers.empty())
        throw std::invalid_argument("polynomial_from_template: empty template");
    int top = powers.front();
    for (int p : powers) {
        if (p < 0)
            throw std::invalid_argument("polynomial_from_template: negative power");
        top = std::max(top, p);
    }
    std::vector<double> by_power(static_cast<std::size_t>(top) + 1, 0.0);
    for (std::size_t i = 0; i < powers.size(); ++i)
        by_power[static_cast<std::size_t>(powers[i])] = coeffs[i];
    return PolynomialTF(std::move(by_power));
}

FitnessBreakdown fitness_breakdown(std::span<const double> coeffs,
                                   const std::vector<int>& powers,
                                   const ObservationSet& obs,
                                   const ExperimentConfig& cfg) {
    FitnessBreakdown bd;
    const PolynomialTF candidate = polynomial_from_template(coeffs, powers);
    try {
        for (const auto& entry : obs.entries) {
            const Signal model = simulate_integer(candidate, entry.input, cfg.integrator);
            double part = 0.0;
            for (std::size_t k = 0; k < model.values.size(); ++k) {
                const double d = entry.output.values[k] - model.values[k];
                part += d * d;
            }
            bd.parts.push_back(FitnessPart{entry.kind, part});
            bd.total += part;
        }
    } catch (const SimulationError&) {
        // Degenerate or blown-up candidate: deterministic penalty.
        bd = FitnessBreakdown{};
        bd.total = cfg.penalty_fitness;
        bd.penalized = true;
    }
    return bd;
}

double fitness(std::span<const double> coeffs, const std::vector<int>& powers,
               const ObservationSet& obs, const ExperimentConfig& cfg) {
    return fitness_breakdown(coeffs, powers, obs, cfg).total;
}

namespace {

void check_observations(const ObservationSet& obs) {
    if (obs.entries.empty())
        throw std::invalid_argument("identify: empty observation set");
    const TimeGrid& grid = obs.entries.front().input.grid;
    for (const auto& e : obs.entries) {
        if (e.input.grid != grid || e.output.grid != grid)
            throw std::invalid_argument("identify: observations on mismatched grids");
        if (e.input.values.size() != grid.n_samples || e.output.values.size() != grid.n_samples)
            throw std::invalid_argument("identify: observation length does not match grid");
    }
}

}  // namespace

IdentificationReport identify_observed(const std::vector<int>& powers,
                                       const ObservationSet& obs,
                                       const ExperimentConfig& cfg) {
    cfg.validate();
    check_observations(obs);
    if (powers.empty())
        throw std::invalid_argument("identify: empty template");

    swarm::SwarmConfig scfg = cfg.swarm;
    scfg.dims = powers.size();
    scfg.validate_and_resolve();

    const auto objective = [&](std::span<const double> x) {
        return fitness(x, powers, obs, cfg);
    };
    const swarm::RunResult result = swarm::run(scfg, objective);

    const FitnessBreakdown bd = fitness_breakdown(result.best_x, powers, obs, cfg);
    if (bd.penalized)
        throw SimulationError("identify: no evaluable candidate found (best stayed penalized)");

    IdentificationReport report;
    report.template_powers = powers;
    report.coefficients = result.best_x;
    report.best_f = bd.total;
    for (const auto& part : bd.parts) {
        if (part.kind == Excitation::step)
            report.f_step = part.value;
        else
            report.f_ramp = part.value;
    }
    const PolynomialTF best = polynomial_from_template(result.best_x, powers);
    for (const auto& entry : obs.entries) {
        Signal model = simulate_integer(best, entry.input, cfg.integrator);
        report.curves.push_back(CurvePair{entry.kind, entry.output, std::move(model)});
    }
    report.history = result.history;
    report.config = cfg;
    report.config.swarm = scfg;
    report.seed = scfg.seed;
    return report;
}

IdentificationReport identify(const FractionalTF& tf, const ExperimentConfig& cfg) {
    const std::vector<int> powers = derive_template(tf);
    const ObservationSet obs = generate_observations(tf, cfg);
    return identify_observed(powers, obs, cfg);
}

}  // namespace fracfit
