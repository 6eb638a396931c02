#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rankthresh {

inline constexpr const char* kVersion = "1.0.0";

/// Runs one command line (args excludes the program name).  CSV goes to
/// `--output` when given, otherwise to `out`; diagnostics go to `err`.
/// Returns 0 on success, 2 on a usage error, 1 on a runtime failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv);

/// "BxM" phase grid: beta = k/B for k = 1..B, mu = 0.1 + 0.9 j/M for j = 1..M.
/// Throws std::invalid_argument on bad syntax.
void parse_phase_grid(const std::string& text, std::vector<double>& betas, std::vector<double>& mus);

}  // namespace rankthresh
