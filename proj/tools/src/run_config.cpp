#include "run_config.hpp"

#include <cmath>
#include <fstream>

#include "cli_io.hpp"

using nlohmann::json;
using nlohmann::ordered_json;

namespace fracfit::cli {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number())
        fail(where, "expected a number");
    return v.get<double>();
}

double opt_number(const json& obj, const char* key, const std::string& prefix, double fallback,
                  bool* present = nullptr) {
    if (present)
        *present = obj.contains(key);
    if (!obj.contains(key))
        return fallback;
    return as_number(obj.at(key), prefix + key);
}

std::uint64_t opt_uint(const json& obj, const char* key, const std::string& prefix,
                       std::uint64_t fallback) {
    if (!obj.contains(key))
        return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned() && !v.is_number_integer())
        fail(prefix + key, "expected a non-negative integer");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0)
        fail(prefix + key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::vector<double> bound_list(const json& v, const std::string& where) {
    std::vector<double> out;
    if (!v.is_array())
        fail(where, "expected an array of numbers");
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(as_number(v.at(i), where + "[" + std::to_string(i) + "]"));
    return out;
}

void parse_swarm_block(const json& obj, RunConfig& rc) {
    const std::string prefix = "swarm.";
    auto& sw = rc.experiment.swarm;
    const double pop = opt_number(obj, "pop", prefix, static_cast<double>(sw.pop));
    if (pop < 2 || pop != std::floor(pop))
        fail(prefix + "pop", "expected an integer >= 2");
    sw.pop = static_cast<std::size_t>(pop);
    const double iters = opt_number(obj, "iters", prefix, static_cast<double>(sw.max_iters));
    if (iters < 1 || iters != std::floor(iters))
        fail(prefix + "iters", "expected an integer >= 1");
    sw.max_iters = static_cast<std::size_t>(iters);
    sw.c1 = opt_number(obj, "c1", prefix, sw.c1);
    sw.c2 = opt_number(obj, "c2", prefix, sw.c2);
    sw.omega_start = opt_number(obj, "omega_start", prefix, sw.omega_start);
    sw.omega_end = opt_number(obj, "omega_end", prefix, sw.omega_end);
    sw.stop_fitness = opt_number(obj, "stop_fitness", prefix, sw.stop_fitness);
    sw.seed = opt_uint(obj, "seed", prefix, sw.seed);
    const double threads = opt_number(obj, "threads", prefix, sw.threads);
    if (threads < 1 || threads != std::floor(threads))
        fail(prefix + "threads", "expected an integer >= 1");
    sw.threads = static_cast<unsigned>(threads);

    if (obj.contains("lo")) {
        if (obj.at("lo").is_number())
            rc.box_lo = obj.at("lo").get<double>();
        else
            sw.lo = bound_list(obj.at("lo"), prefix + "lo");
    }
    if (obj.contains("hi")) {
        if (obj.at("hi").is_number())
            rc.box_hi = obj.at("hi").get<double>();
        else
            sw.hi = bound_list(obj.at("hi"), prefix + "hi");
    }
}

}  // namespace

std::vector<FractionalTerm> parse_target_spec(const std::string& spec) {
    std::vector<FractionalTerm> terms;
    std::size_t start = 0;
    while (start < spec.size()) {
        std::size_t comma = spec.find(',', start);
        if (comma == std::string::npos)
            comma = spec.size();
        const std::string item = spec.substr(start, comma - start);
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("target term '" + item + "': expected coeff:order");
        try {
            std::size_t used = 0;
            const double coeff = std::stod(item.substr(0, colon), &used);
            const double order = std::stod(item.substr(colon + 1), &used);
            terms.push_back(FractionalTerm{coeff, order});
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("target term '" + item + "': expected coeff:order numbers");
        }
        start = comma + 1;
    }
    if (terms.empty())
        throw ConfigError("target: no terms given");
    return terms;
}

std::vector<double> parse_double_list(const std::string& spec, const std::string& what) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start < spec.size()) {
        std::size_t comma = spec.find(',', start);
        if (comma == std::string::npos)
            comma = spec.size();
        const std::string item = spec.substr(start, comma - start);
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError(what + ": expected a number, got '" + item + "'");
        }
        start = comma + 1;
    }
    if (out.empty())
        throw ConfigError(what + ": empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& spec, const std::string& what) {
    std::vector<int> out;
    for (double v : parse_double_list(spec, what)) {
        if (v != std::floor(v))
            throw ConfigError(what + ": expected integers");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::optional<double> parse_memory(const std::string& spec) {
    if (spec == "full")
        return std::nullopt;
    try {
        const double seconds = std::stod(spec);
        if (!(seconds > 0.0))
            throw ConfigError("memory: must be 'full' or a positive number of seconds");
        return seconds;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("memory: must be 'full' or a positive number of seconds");
    }
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    if (!doc.is_object())
        throw ConfigError(path + ": top level must be an object");

    RunConfig rc;

    if (doc.contains("target")) {
        const json& t = doc.at("target");
        if (!t.is_array() || t.empty())
            fail("target", "expected a non-empty array of {coeff, order} terms");
        for (std::size_t i = 0; i < t.size(); ++i) {
            const std::string where = "target[" + std::to_string(i) + "]";
            const json& term = t.at(i);
            if (!term.is_object() || !term.contains("coeff") || !term.contains("order"))
                fail(where, "expected an object with coeff and order");
            rc.target.push_back(FractionalTerm{as_number(term.at("coeff"), where + ".coeff"),
                                               as_number(term.at("order"), where + ".order")});
        }
    }
    if (doc.contains("powers")) {
        const json& p = doc.at("powers");
        if (!p.is_array())
            fail("powers", "expected an array of integers");
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double v = as_number(p.at(i), "powers[" + std::to_string(i) + "]");
            if (v != std::floor(v))
                fail("powers[" + std::to_string(i) + "]", "expected an integer");
            rc.powers.push_back(static_cast<int>(v));
        }
    }

    rc.experiment.dt = opt_number(doc, "dt", "", rc.experiment.dt, &rc.dt_explicit);
    rc.experiment.t_end = opt_number(doc, "t_end", "", rc.experiment.t_end, &rc.t_end_explicit);
    if (doc.contains("memory")) {
        const json& m = doc.at("memory");
        if (m.is_string())
            rc.experiment.memory_len = parse_memory(m.get<std::string>());
        else
            rc.experiment.memory_len = as_number(m, "memory");
    }
    rc.experiment.penalty_fitness =
        opt_number(doc, "penalty_fitness", "", rc.experiment.penalty_fitness);

    if (doc.contains("inputs")) {
        const json& ins = doc.at("inputs");
        if (!ins.is_array() || ins.empty())
            fail("inputs", "expected a non-empty array of excitation names");
        rc.inputs_explicit = true;
        rc.experiment.inputs.clear();
        for (std::size_t i = 0; i < ins.size(); ++i) {
            const std::string where = "inputs[" + std::to_string(i) + "]";
            if (!ins.at(i).is_string())
                fail(where, "expected \"step\" or \"ramp\"");
            const auto kind = excitation_from_string(ins.at(i).get<std::string>());
            if (!kind)
                fail(where, "expected \"step\" or \"ramp\"");
            rc.experiment.inputs.push_back(*kind);
        }
    }

    if (doc.contains("integrator")) {
        const json& ig = doc.at("integrator");
        if (!ig.is_object())
            fail("integrator", "expected an object");
        auto& opts = rc.experiment.integrator;
        opts.leading_tol = opt_number(ig, "leading_tol", "integrator.", opts.leading_tol);
        opts.overflow_bound = opt_number(ig, "overflow_bound", "integrator.", opts.overflow_bound);
        const double sub = opt_number(ig, "substeps", "integrator.", opts.substeps);
        if (sub < 1 || sub != std::floor(sub))
            fail("integrator.substeps", "expected an integer >= 1");
        opts.substeps = static_cast<int>(sub);
    }

    if (doc.contains("swarm")) {
        if (!doc.at("swarm").is_object())
            fail("swarm", "expected an object");
        parse_swarm_block(doc.at("swarm"), rc);
    }

    if (doc.contains("observations")) {
        const json& obs = doc.at("observations");
        if (!obs.is_object())
            fail("observations", "expected an object of excitation -> csv path");
        for (const auto& [key, value] : obs.items()) {
            const auto kind = excitation_from_string(key);
            if (!kind)
                fail("observations." + key, "expected keys \"step\" or \"ramp\"");
            if (!value.is_string())
                fail("observations." + key, "expected a file path string");
            rc.observations[*kind] = value.get<std::string>();
        }
    }

    if (doc.contains("outputs")) {
        const json& out = doc.at("outputs");
        if (!out.is_object())
            fail("outputs", "expected an object");
        if (out.contains("report")) {
            if (!out.at("report").is_string())
                fail("outputs.report", "expected a file path string");
            rc.outputs.report = out.at("report").get<std::string>();
        }
        if (out.contains("step_curve")) {
            if (!out.at("step_curve").is_string())
                fail("outputs.step_curve", "expected a file path string");
            rc.outputs.step_curve = out.at("step_curve").get<std::string>();
        }
        if (out.contains("ramp_curve")) {
            if (!out.at("ramp_curve").is_string())
                fail("outputs.ramp_curve", "expected a file path string");
            rc.outputs.ramp_curve = out.at("ramp_curve").get<std::string>();
        }
    }
    return rc;
}

ordered_json config_echo_json(const RunConfig& rc) {
    const ExperimentConfig& ex = rc.experiment;
    ordered_json c;
    if (!rc.target.empty()) {
        ordered_json terms = ordered_json::array();
        for (const auto& t : rc.target)
            terms.push_back(ordered_json{{"coeff", t.coeff}, {"order", t.order}});
        c["target"] = terms;
    }
    if (!rc.observations.empty()) {
        ordered_json obs = ordered_json::object();
        for (const auto& [kind, path] : rc.observations)
            obs[to_string(kind)] = path;
        c["observations"] = obs;
    }
    c["dt"] = ex.dt;
    c["t_end"] = ex.t_end;
    if (ex.memory_len)
        c["memory"] = *ex.memory_len;
    else
        c["memory"] = "full";
    ordered_json inputs = ordered_json::array();
    for (Excitation kind : ex.inputs)
        inputs.push_back(to_string(kind));
    c["inputs"] = inputs;
    c["penalty_fitness"] = ex.penalty_fitness;
    c["integrator"] = ordered_json{{"leading_tol", ex.integrator.leading_tol},
                                   {"overflow_bound", ex.integrator.overflow_bound},
                                   {"substeps", ex.integrator.substeps}};
    const auto& sw = ex.swarm;
    c["swarm"] = ordered_json{{"pop", sw.pop},
                              {"iters", sw.max_iters},
                              {"c1", sw.c1},
                              {"c2", sw.c2},
                              {"omega_start", sw.omega_start},
                              {"omega_end", sw.omega_end},
                              {"lo", sw.lo},
                              {"hi", sw.hi},
                              {"seed", sw.seed},
                              {"stop_fitness", sw.stop_fitness}};
    return c;
}

ordered_json report_json(const IdentificationReport& report, const RunConfig& rc) {
    ordered_json j;
    j["template_powers"] = report.template_powers;
    ordered_json coeffs = ordered_json::object();
    for (std::size_t i = 0; i < report.template_powers.size(); ++i)
        coeffs[std::to_string(report.template_powers[i])] = report.coefficients[i];
    j["coefficients"] = coeffs;
    j["best_f"] = report.best_f;
    j["f_step"] = report.f_step;
    j["f_ramp"] = report.f_ramp;
    j["history"] = report.history;

    RunConfig echo = rc;
    echo.experiment = report.config;  // resolved swarm bounds and dims
    j["config"] = config_echo_json(echo);
    j["seed"] = report.seed;

    ordered_json curves = ordered_json::object();
    for (const auto& curve : report.curves) {
        ordered_json entry;
        ordered_json t = ordered_json::array();
        for (std::size_t k = 0; k < curve.observed.size(); ++k)
            t.push_back(curve.observed.grid.t(k));
        entry["t"] = t;
        entry["observed"] = curve.observed.values;
        entry["model"] = curve.model.values;
        curves[to_string(curve.kind)] = entry;
    }
    j["curves"] = curves;
    return j;
}

}  // namespace fracfit::cli
