#pragma once

#include <stdexcept>
#include <string>

#include "fracfit/signal.hpp"

namespace fracfit::cli {

/// Malformed configuration, flags, or input files. Mapped to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Full round-trip precision formatting (17 significant digits).
std::string format_double(double v);

/// Writes content to path via a temporary file renamed on success, so a
/// failed run never leaves a partial output behind. path "-" is stdout.
void write_file_atomic(const std::string& path, const std::string& content);

/// Serializes a curve as CSV with the header `t,y`.
std::string curve_csv(const Signal& y);

/// Serializes an overlay as CSV with the header `t,observed,model`.
std::string overlay_csv(const Signal& observed, const Signal& model);

/// Parses a `t,y` CSV produced by the simulate subcommand (or measured data
/// in the same shape) back into a Signal; the grid is inferred from the time
/// column and must be uniform.
Signal read_curve_csv(const std::string& path);

}  // namespace fracfit::cli
