#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rankthresh/mesh_width.hpp"
#include "rankthresh/phase_lab.hpp"
#include "rankthresh/thresholds.hpp"

namespace rankthresh {

/// Shortest decimal that parses back to the same double ("nan", "inf" for
/// the special values).
std::string format_double(double x);
/// Parses what format_double writes.  Throws std::invalid_argument.
double parse_double(std::string_view text);

/// "start:stop:count" (inclusive, evenly spaced) or a comma-separated list.
/// Throws std::invalid_argument on malformed input.
std::vector<double> parse_grid(std::string_view text);
/// count points evenly spaced on [start, stop].
std::vector<double> linspace(double start, double stop, int count);

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Writes "# key=value" lines.
void write_metadata(std::ostream& os, const Metadata& meta);

void write_threshold_csv(std::ostream& os, ThresholdKind kind, const std::vector<ThresholdPoint>& points);
void write_width_csv(std::ostream& os, const std::vector<WidthEstimate>& rows);
void write_phase_header(std::ostream& os);
void write_phase_row(std::ostream& os, PhaseProgram program, const PhaseCell& cell);
void write_boundary_csv(std::ostream& os, PhaseProgram program, int n, const std::vector<BoundaryPoint>& points);

/// Readers skip '#' lines and the header, and throw std::invalid_argument on
/// malformed rows.
std::vector<std::pair<ThresholdKind, ThresholdPoint>> read_threshold_csv(std::istream& is);
std::vector<std::pair<PhaseProgram, PhaseCell>> read_phase_csv(std::istream& is);

}  // namespace rankthresh
