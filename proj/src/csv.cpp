#include "rankthresh/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace rankthresh {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view text) {
  text = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  return v;
}

// Data rows of a CSV stream: comments and the header dropped.
std::vector<std::vector<std::string_view>> data_rows(std::istream& is, std::vector<std::string>& storage,
                                                     std::size_t columns) {
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    storage.push_back(line);
  }
  std::vector<std::vector<std::string_view>> rows;
  for (const auto& s : storage) {
    auto fields = split(s, ',');
    if (fields.size() != columns) throw std::invalid_argument("csv row has wrong number of fields: " + s);
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return v;
}

std::vector<double> linspace(double start, double stop, int count) {
  if (count < 1) throw std::invalid_argument("linspace: count must be positive");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = start;
    return out;
  }
  for (int i = 0; i < count; ++i) out[i] = start + (stop - start) * i / (count - 1);
  out.back() = stop;
  return out;
}

std::vector<double> parse_grid(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty grid");
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("grid must be start:stop:count");
    return linspace(parse_double(parts[0]), parse_double(parts[1]), parse_int(parts[2]));
  }
  std::vector<double> out;
  for (auto p : split(text, ',')) out.push_back(parse_double(p));
  return out;
}

void write_metadata(std::ostream& os, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
}

void write_threshold_csv(std::ostream& os, ThresholdKind kind, const std::vector<ThresholdPoint>& points) {
  os << "kind,beta,delta,mu,theta,oversampling\n";
  for (const auto& p : points) {
    os << to_string(kind) << ',' << format_double(p.beta) << ',' << (p.delta ? format_double(*p.delta) : "") << ','
       << format_double(p.mu) << ',' << format_double(p.theta) << ',' << format_double(p.oversampling) << '\n';
  }
}

void write_width_csv(std::ostream& os, const std::vector<WidthEstimate>& rows) {
  os << "kind,n,beta,samples,mean_bound,std_err,mu_implied\n";
  for (const auto& w : rows) {
    os << to_string(w.kind) << ',' << w.n << ',' << format_double(w.beta) << ',' << w.samples << ','
       << format_double(w.mean_bound) << ',' << format_double(w.std_err) << ',' << format_double(w.mu_implied)
       << '\n';
  }
}

void write_phase_header(std::ostream& os) { os << "program,n,beta,mu,m,trials,successes,non_converged\n"; }

void write_phase_row(std::ostream& os, PhaseProgram program, const PhaseCell& c) {
  os << to_string(program) << ',' << c.n << ',' << format_double(c.beta) << ',' << format_double(c.mu) << ','
     << c.m << ',' << c.trials << ',' << c.successes << ',' << c.non_converged << '\n';
}

void write_boundary_csv(std::ostream& os, PhaseProgram program, int n, const std::vector<BoundaryPoint>& points) {
  os << "program,n,beta,mu50,censoring\n";
  for (const auto& p : points) {
    os << to_string(program) << ',' << n << ',' << format_double(p.beta) << ','
       << (p.censoring == Censoring::None ? format_double(p.mu50) : "") << ',' << to_string(p.censoring) << '\n';
  }
}

std::vector<std::pair<ThresholdKind, ThresholdPoint>> read_threshold_csv(std::istream& is) {
  std::vector<std::string> storage;
  std::vector<std::pair<ThresholdKind, ThresholdPoint>> out;
  for (const auto& f : data_rows(is, storage, 6)) {
    const auto kind = parse_threshold_kind(trim(f[0]));
    if (!kind) throw std::invalid_argument("unknown threshold kind: " + std::string(f[0]));
    ThresholdPoint p;
    p.beta = parse_double(f[1]);
    if (!trim(f[2]).empty()) p.delta = parse_double(f[2]);
    p.mu = parse_double(f[3]);
    p.theta = parse_double(f[4]);
    p.oversampling = parse_double(f[5]);
    out.emplace_back(*kind, p);
  }
  return out;
}

std::vector<std::pair<PhaseProgram, PhaseCell>> read_phase_csv(std::istream& is) {
  std::vector<std::string> storage;
  std::vector<std::pair<PhaseProgram, PhaseCell>> out;
  for (const auto& f : data_rows(is, storage, 8)) {
    const auto program = parse_phase_program(trim(f[0]));
    if (!program) throw std::invalid_argument("unknown program: " + std::string(f[0]));
    PhaseCell c;
    c.n = parse_int(f[1]);
    c.beta = parse_double(f[2]);
    c.mu = parse_double(f[3]);
    c.m = parse_int(f[4]);
    c.trials = parse_int(f[5]);
    c.successes = parse_int(f[6]);
    c.non_converged = parse_int(f[7]);
    c.r = static_cast<int>(std::lround(c.beta * c.n));
    out.emplace_back(*program, c);
  }
  return out;
}

}  // namespace rankthresh
