#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_io.hpp"
#include "fracfit/gl.hpp"
#include "fracfit/identify.hpp"
#include "fracfit/lti.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace fracfit;
using cli::ConfigError;

namespace {

std::vector<FractionalTerm> terms_from_flags(const std::string& target_spec,
                                             const std::vector<double>& coeffs,
                                             const std::vector<double>& orders) {
    if (!target_spec.empty() && !coeffs.empty())
        throw ConfigError("give either --target or --coeff/--order pairs, not both");
    if (!target_spec.empty())
        return cli::parse_target_spec(target_spec);
    if (coeffs.empty())
        return {};
    if (coeffs.size() != orders.size())
        throw ConfigError("--coeff and --order must come in pairs");
    std::vector<FractionalTerm> terms;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        terms.push_back(FractionalTerm{coeffs[i], orders[i]});
    return terms;
}

bool all_integer_orders(const std::vector<FractionalTerm>& terms) {
    for (const auto& t : terms)
        if (t.order != std::floor(t.order))
            return false;
    return true;
}

PolynomialTF polynomial_from_terms(const std::vector<FractionalTerm>& terms) {
    int top = 0;
    for (const auto& t : terms) {
        if (t.order != std::floor(t.order))
            throw ConfigError("integer-order engine needs integer exponents");
        top = std::max(top, static_cast<int>(t.order));
    }
    std::vector<double> by_power(static_cast<std::size_t>(top) + 1, 0.0);
    for (const auto& t : terms)
        by_power[static_cast<std::size_t>(t.order)] += t.coeff;
    return PolynomialTF(std::move(by_power));
}

Excitation parse_excitation(const std::string& name) {
    const auto kind = excitation_from_string(name);
    if (!kind)
        throw ConfigError("unknown input kind '" + name + "', expected step or ramp");
    return *kind;
}

void merge_observation_flags(const std::vector<std::string>& specs, cli::RunConfig& rc) {
    for (const auto& spec : specs) {
        const std::size_t eq = spec.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--observations expects kind=path, got '" + spec + "'");
        rc.observations[parse_excitation(spec.substr(0, eq))] = spec.substr(eq + 1);
    }
}

// Reads the per-excitation CSVs, reconciles the grid with any explicit dt or
// t_end, and rebuilds the excitation list in canonical order.
ObservationSet ingest_observations(cli::RunConfig& rc) {
    ObservationSet obs;
    std::optional<TimeGrid> grid;
    for (const auto& [kind, path] : rc.observations) {
        Signal output = cli::read_curve_csv(path);
        if (grid && !(output.grid == *grid))
            throw ConfigError("observation files disagree on the sampling grid");
        grid = output.grid;
        Signal input = kind == Excitation::step ? unit_step(*grid) : unit_ramp(*grid);
        obs.entries.push_back(Observation{kind, std::move(input), std::move(output)});
    }
    if (rc.dt_explicit && std::abs(grid->dt - rc.experiment.dt) > 1e-9 * rc.experiment.dt)
        throw ConfigError("observation grid dt does not match the configured dt");
    if (rc.t_end_explicit &&
        std::llround(rc.experiment.t_end / grid->dt) != static_cast<long long>(grid->n_samples))
        throw ConfigError("observation length does not match the configured horizon");
    rc.experiment.dt = grid->dt;
    rc.experiment.t_end = grid->dt * static_cast<double>(grid->n_samples);

    std::vector<Excitation> kinds;
    for (const auto& e : obs.entries)
        kinds.push_back(e.kind);
    if (rc.inputs_explicit && kinds != rc.experiment.inputs)
        throw ConfigError("configured inputs do not match the supplied observation kinds");
    rc.experiment.inputs = kinds;
    return obs;
}

void broadcast_box(cli::RunConfig& rc, std::size_t dims) {
    if (rc.box_lo)
        rc.experiment.swarm.lo.assign(dims, *rc.box_lo);
    if (rc.box_hi)
        rc.experiment.swarm.hi.assign(dims, *rc.box_hi);
}

std::string derived_curve_path(const std::string& report_path, const char* suffix) {
    fs::path p(report_path);
    p.replace_extension();
    return p.string() + "_" + suffix + ".csv";
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string target_spec;
    std::vector<double> coeffs, orders;
    std::string input = "step";
    double dt = 0.05;
    double t_end = 10.0;
    std::string memory = "full";
    std::string engine = "auto";
    int substeps = 1;
    std::string out = "-";
};

int cmd_simulate(const SimulateArgs& args) {
    const auto terms = terms_from_flags(args.target_spec, args.coeffs, args.orders);
    if (terms.empty())
        throw ConfigError("simulate needs a target (--target or --coeff/--order)");
    const TimeGrid grid = grid_over(args.dt, args.t_end);
    const Signal u =
        parse_excitation(args.input) == Excitation::step ? unit_step(grid) : unit_ramp(grid);

    std::string engine = args.engine;
    if (engine == "auto")
        engine = all_integer_orders(terms) ? "rk4" : "gl";

    Signal y;
    if (engine == "gl") {
        y = simulate_fractional(FractionalTF(terms), u, cli::parse_memory(args.memory));
    } else if (engine == "rk4") {
        IntegrateOptions opts;
        opts.substeps = args.substeps;
        y = simulate_integer(polynomial_from_terms(terms), u, opts);
    } else {
        throw ConfigError("unknown engine '" + args.engine + "', expected auto, gl or rk4");
    }
    cli::write_file_atomic(args.out, cli::curve_csv(y));
    return 0;
}

// ---------------------------------------------------------------------------

struct WeightsArgs {
    double order = 0.0;
    int count = 0;
    std::string out = "-";
};

int cmd_weights(const WeightsArgs& args) {
    if (args.count < 0)
        throw ConfigError("--count must be >= 0");
    const GlWeights gw = gl_weights(args.order, static_cast<std::size_t>(args.count));
    std::ostringstream csv;
    csv << "j,w\n";
    for (std::size_t j = 0; j < gw.w.size(); ++j)
        csv << j << ',' << cli::format_double(gw.w[j]) << '\n';
    cli::write_file_atomic(args.out, csv.str());
    return 0;
}

// ---------------------------------------------------------------------------

struct IdentifyArgs {
    std::string config_path;
    std::string target_spec;
    std::vector<double> coeffs, orders;
    std::string powers;
    std::vector<std::string> observations;
    std::vector<std::string> inputs;
    std::string memory;
    double dt = 0.0;
    double t_end = 0.0;
    std::uint64_t seed = 0;
    long iters = 0;
    long particles = 0;
    unsigned threads = 0;
    double stop_fitness = -1.0;
    double penalty = 0.0;
    double lo = 0.0, hi = 0.0;
    bool lo_set = false, hi_set = false;
    bool dt_set = false, t_end_set = false, seed_set = false, iters_set = false;
    bool particles_set = false, threads_set = false, stop_set = false, penalty_set = false;
    bool memory_set = false;
    std::string out;
    bool out_set = false;
};

void apply_identify_overrides(const IdentifyArgs& args, cli::RunConfig& rc) {
    const auto terms = terms_from_flags(args.target_spec, args.coeffs, args.orders);
    if (!terms.empty())
        rc.target = terms;
    if (!args.powers.empty())
        rc.powers = cli::parse_int_list(args.powers, "--powers");
    merge_observation_flags(args.observations, rc);
    if (!args.inputs.empty()) {
        rc.experiment.inputs.clear();
        for (const auto& name : args.inputs)
            rc.experiment.inputs.push_back(parse_excitation(name));
        rc.inputs_explicit = true;
    }
    if (args.dt_set) {
        rc.experiment.dt = args.dt;
        rc.dt_explicit = true;
    }
    if (args.t_end_set) {
        rc.experiment.t_end = args.t_end;
        rc.t_end_explicit = true;
    }
    if (args.memory_set)
        rc.experiment.memory_len = cli::parse_memory(args.memory);
    if (args.seed_set)
        rc.experiment.swarm.seed = args.seed;
    if (args.iters_set) {
        if (args.iters < 1)
            throw ConfigError("--iters must be >= 1");
        rc.experiment.swarm.max_iters = static_cast<std::size_t>(args.iters);
    }
    if (args.particles_set) {
        if (args.particles < 2)
            throw ConfigError("--particles must be >= 2");
        rc.experiment.swarm.pop = static_cast<std::size_t>(args.particles);
    }
    if (args.threads_set)
        rc.experiment.swarm.threads = args.threads;
    if (args.stop_set)
        rc.experiment.swarm.stop_fitness = args.stop_fitness;
    if (args.penalty_set)
        rc.experiment.penalty_fitness = args.penalty;
    if (args.lo_set)
        rc.box_lo = args.lo;
    if (args.hi_set)
        rc.box_hi = args.hi;
    if (args.out_set)
        rc.outputs.report = args.out;
}

int cmd_identify(const IdentifyArgs& args) {
    cli::RunConfig rc =
        args.config_path.empty() ? cli::RunConfig{} : cli::load_run_config(args.config_path);
    apply_identify_overrides(args, rc);

    ObservationSet obs;
    std::vector<int> powers = rc.powers;
    if (!rc.observations.empty()) {
        obs = ingest_observations(rc);
        if (powers.empty()) {
            if (rc.target.empty())
                throw ConfigError("identify from observations needs --powers or a target");
            powers = derive_template(FractionalTF(rc.target));
        }
    } else {
        if (rc.target.empty())
            throw ConfigError("identify needs a target system or observation files");
        const FractionalTF tf(rc.target);
        if (powers.empty())
            powers = derive_template(tf);
        obs = generate_observations(tf, rc.experiment);
    }
    broadcast_box(rc, powers.size());

    const IdentificationReport report = identify_observed(powers, obs, rc.experiment);

    std::ostringstream line;
    line << "powers:";
    for (int p : report.template_powers)
        line << ' ' << p;
    line << "\ncoefficients:";
    for (double c : report.coefficients)
        line << ' ' << cli::format_double(c);
    line << "\nF = " << cli::format_double(report.best_f)
         << " (F1 = " << cli::format_double(report.f_step)
         << ", F2 = " << cli::format_double(report.f_ramp) << ")\n";
    std::cout << line.str();

    cli::write_file_atomic(rc.outputs.report, cli::report_json(report, rc).dump(2) + "\n");

    for (const auto& curve : report.curves) {
        std::string path = curve.kind == Excitation::step ? rc.outputs.step_curve
                                                          : rc.outputs.ramp_curve;
        if (path.empty()) {
            if (rc.outputs.report == "-")
                continue;  // no stable stem to derive a path from
            path = derived_curve_path(rc.outputs.report, to_string(curve.kind));
        }
        cli::write_file_atomic(path, cli::overlay_csv(curve.observed, curve.model));
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string target_spec;
    std::vector<double> coeffs, orders;
    std::string candidate;  // comma-separated, descending template powers
    std::string powers;
    std::vector<std::string> observations;
    double dt = 0.05;
    double t_end = 10.0;
    bool dt_set = false, t_end_set = false;
    std::string memory = "full";
};

int cmd_eval(const EvalArgs& args) {
    cli::RunConfig rc;
    rc.experiment.dt = args.dt;
    rc.experiment.t_end = args.t_end;
    rc.dt_explicit = args.dt_set;
    rc.t_end_explicit = args.t_end_set;
    rc.experiment.memory_len = cli::parse_memory(args.memory);
    rc.target = terms_from_flags(args.target_spec, args.coeffs, args.orders);
    merge_observation_flags(args.observations, rc);

    std::vector<int> powers;
    if (!args.powers.empty())
        powers = cli::parse_int_list(args.powers, "--powers");
    else if (!rc.target.empty())
        powers = derive_template(FractionalTF(rc.target));
    else
        throw ConfigError("eval needs --powers or a target to derive the template");

    ObservationSet obs;
    if (!rc.observations.empty()) {
        obs = ingest_observations(rc);
    } else {
        if (rc.target.empty())
            throw ConfigError("eval needs a target system or observation files");
        obs = generate_observations(FractionalTF(rc.target), rc.experiment);
    }

    const std::vector<double> candidate = cli::parse_double_list(args.candidate, "--coeffs");
    if (candidate.size() != powers.size())
        throw ConfigError("--coeffs must list one value per template power");

    const FitnessBreakdown bd = fitness_breakdown(candidate, powers, obs, rc.experiment);
    double f_step = 0.0, f_ramp = 0.0;
    for (const auto& part : bd.parts)
        (part.kind == Excitation::step ? f_step : f_ramp) = part.value;
    std::cout << "F = " << cli::format_double(bd.total) << '\n'
              << "F1 = " << cli::format_double(f_step) << '\n'
              << "F2 = " << cli::format_double(f_ramp) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracfit: simulate fractional-order systems and fit integer-order models"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Simulate a transfer function and write the response as CSV");
    simulate->add_option("--target", sim.target_spec,
                         "denominator as coeff:order terms, e.g. 0.8:2.2,0.5:0.9,1:0");
    simulate->add_option("--coeff", sim.coeffs, "term coefficient (pair with --order)");
    simulate->add_option("--order", sim.orders, "term exponent (pair with --coeff)");
    simulate->add_option("--input", sim.input, "excitation: step or ramp")
        ->default_str("step");
    simulate->add_option("--dt", sim.dt, "sampling interval in seconds")->default_str("0.05");
    simulate->add_option("--t-end", sim.t_end, "horizon in seconds")->default_str("10");
    simulate->add_option("--memory", sim.memory, "'full' or a history length in seconds")
        ->default_str("full");
    simulate->add_option("--engine", sim.engine, "auto, gl or rk4")->default_str("auto");
    simulate->add_option("--substeps", sim.substeps, "RK4 substeps per sample")
        ->default_str("1");
    simulate->add_option("--out", sim.out, "output CSV path, '-' for stdout")
        ->default_str("-");

    WeightsArgs wts;
    CLI::App* weights =
        app.add_subcommand("weights", "Emit the backward-difference weight row as CSV");
    weights->add_option("--order", wts.order, "differintegral order (>= 0)")->required();
    weights->add_option("--count", wts.count, "largest index J")->required();
    weights->add_option("--out", wts.out, "output CSV path, '-' for stdout")
        ->default_str("-");

    IdentifyArgs idn;
    CLI::App* identify_cmd = app.add_subcommand(
        "identify", "Fit an integer-order model to a fractional system or measured data");
    identify_cmd->add_option("--config", idn.config_path, "JSON run configuration");
    identify_cmd->add_option("--target", idn.target_spec, "denominator as coeff:order terms");
    identify_cmd->add_option("--coeff", idn.coeffs, "term coefficient (pair with --order)");
    identify_cmd->add_option("--order", idn.orders, "term exponent (pair with --coeff)");
    identify_cmd->add_option("--powers", idn.powers, "explicit template powers, e.g. 3,2,1,0");
    identify_cmd->add_option("--observations", idn.observations,
                             "measured data as kind=path, repeatable");
    identify_cmd->add_option("--input", idn.inputs, "excitations to use (step, ramp)");
    auto* odt = identify_cmd->add_option("--dt", idn.dt, "sampling interval in seconds");
    auto* ote = identify_cmd->add_option("--t-end", idn.t_end, "horizon in seconds");
    auto* omem = identify_cmd->add_option("--memory", idn.memory, "'full' or seconds");
    auto* oseed = identify_cmd->add_option("--seed", idn.seed, "swarm seed");
    auto* oiters = identify_cmd->add_option("--iters", idn.iters, "swarm iterations");
    auto* opart = identify_cmd->add_option("--particles", idn.particles, "swarm size");
    auto* othr = identify_cmd->add_option("--threads", idn.threads,
                                          "parallel fitness evaluation threads");
    auto* ostop = identify_cmd->add_option("--stop-fitness", idn.stop_fitness,
                                           "early-stop fitness threshold");
    auto* open = identify_cmd->add_option("--penalty", idn.penalty,
                                          "fitness for degenerate or unstable candidates");
    auto* olo = identify_cmd->add_option("--lo", idn.lo, "search box lower bound (all dims)");
    auto* ohi = identify_cmd->add_option("--hi", idn.hi, "search box upper bound (all dims)");
    auto* oout = identify_cmd->add_option("--out", idn.out, "report JSON path");

    EvalArgs evl;
    CLI::App* eval_cmd = app.add_subcommand(
        "eval", "Evaluate the fitness of a fixed candidate model");
    eval_cmd->add_option("--target", evl.target_spec, "denominator as coeff:order terms");
    eval_cmd->add_option("--coeff", evl.coeffs, "term coefficient (pair with --order)");
    eval_cmd->add_option("--order", evl.orders, "term exponent (pair with --coeff)");
    eval_cmd->add_option("--coeffs", evl.candidate,
                         "candidate coefficients by descending template power")
        ->required();
    eval_cmd->add_option("--powers", evl.powers, "explicit template powers");
    eval_cmd->add_option("--observations", evl.observations,
                         "measured data as kind=path, repeatable");
    auto* edt = eval_cmd->add_option("--dt", evl.dt, "sampling interval in seconds");
    auto* ete = eval_cmd->add_option("--t-end", evl.t_end, "horizon in seconds");
    eval_cmd->add_option("--memory", evl.memory, "'full' or seconds")->default_str("full");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    idn.dt_set = odt->count() > 0;
    idn.t_end_set = ote->count() > 0;
    idn.memory_set = omem->count() > 0;
    idn.seed_set = oseed->count() > 0;
    idn.iters_set = oiters->count() > 0;
    idn.particles_set = opart->count() > 0;
    idn.threads_set = othr->count() > 0;
    idn.stop_set = ostop->count() > 0;
    idn.penalty_set = open->count() > 0;
    idn.lo_set = olo->count() > 0;
    idn.hi_set = ohi->count() > 0;
    idn.out_set = oout->count() > 0;
    evl.dt_set = edt->count() > 0;
    evl.t_end_set = ete->count() > 0;

    try {
        if (simulate->parsed())
            return cmd_simulate(sim);
        if (weights->parsed())
            return cmd_weights(wts);
        if (identify_cmd->parsed())
            return cmd_identify(idn);
        if (eval_cmd->parsed())
            return cmd_eval(evl);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const SimulationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
