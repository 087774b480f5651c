#include "cli_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

namespace fs = std::filesystem;

namespace fracfit::cli {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw SimulationError("cannot open output file: " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw SimulationError("failed writing output file: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw SimulationError("failed to move output into place: " + target.string());
    }
}

std::string curve_csv(const Signal& y) {
    std::ostringstream out;
    out << "t,y\n";
    for (std::size_t k = 0; k < y.size(); ++k)
        out << format_double(y.grid.t(k)) << ',' << format_double(y.values[k]) << '\n';
    return out.str();
}

std::string overlay_csv(const Signal& observed, const Signal& model) {
    std::ostringstream out;
    out << "t,observed,model\n";
    for (std::size_t k = 0; k < observed.size(); ++k)
        out << format_double(observed.grid.t(k)) << ',' << format_double(observed.values[k])
            << ',' << format_double(model.values[k]) << '\n';
    return out.str();
}

namespace {

std::vector<double> split_row(const std::string& line, const std::string& path, int lineno) {
    std::vector<double> cells;
    std::size_t start = 0;
    while (start <= line.size()) {
        const std::size_t comma = line.find(',', start);
        const std::string cell =
            line.substr(start, comma == std::string::npos ? comma : comma - start);
        try {
            std::size_t used = 0;
            cells.push_back(std::stod(cell, &used));
            if (used == 0)
                throw std::invalid_argument("empty");
        } catch (const std::exception&) {
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected a number, got '" + cell + "'");
        }
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return cells;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return line;
}

}  // namespace

Signal read_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open observations file: " + path);

    std::string line;
    if (!std::getline(in, line))
        throw ConfigError(path + ": empty file");
    line = strip_cr(line);
    if (line != "t,y")
        throw ConfigError(path + ":1: expected header 't,y', got '" + line + "'");

    std::vector<double> t, y;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty())
            continue;
        const std::vector<double> cells = split_row(line, path, lineno);
        if (cells.size() != 2)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 2 columns");
        t.push_back(cells[0]);
        y.push_back(cells[1]);
    }
    if (t.size() < 2)
        throw ConfigError(path + ": need at least 2 samples");

    const double dt = t[1] - t[0];
    if (!(dt > 0.0))
        throw ConfigError(path + ": time column must be strictly increasing");
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (std::abs(t[k] - dt * static_cast<double>(k)) > 1e-6 * dt)
            throw ConfigError(path + ": time column is not a uniform grid starting at 0");
        if (!std::isfinite(y[k]))
            throw ConfigError(path + ": non-finite sample at line " + std::to_string(k + 2));
    }
    return Signal{TimeGrid(dt, t.size()), std::move(y)};
}

}  // namespace fracfit::cli
