#include "presto/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "presto/errors.hpp"

namespace presto {

Trace::Trace(double dt, std::vector<std::string> names, double t0)
    : dt_(dt), t0_(t0), names_(std::move(names)), columns_(names_.size()) {
  if (!(dt > 0.0)) throw DomainError("Trace: dt must be > 0");
}

bool Trace::has(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t Trace::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw LookupError(fmt::format("trace has no column '{}'", name));
  return static_cast<std::size_t>(it - names_.begin());
}

void Trace::push(std::span<const double> row) {
  if (row.size() != columns_.size())
    throw DomainError(fmt::format("Trace::push: row has {} values, trace has {} columns", row.size(), columns_.size()));
  for (std::size_t c = 0; c < row.size(); ++c) columns_[c].push_back(row[c]);
}

void Trace::reserve(std::size_t n) {
  for (auto& c : columns_) c.reserve(n);
}

std::span<const double> Trace::column(std::string_view name) const { return columns_[index_of(name)]; }

double l2_norm(const Trace& tr, std::string_view column) {
  double acc = 0.0;
  for (double v : tr.column(column)) acc += v * v;
  return std::sqrt(acc);
}

double linf_norm(const Trace& tr, std::string_view column) {
  double m = 0.0;
  for (double v : tr.column(column)) m = std::max(m, std::fabs(v));
  return m;
}

std::optional<double> settling_time(const Trace& tr, const SettleRule& rule) {
  if (tr.empty()) throw DomainError("settling_time: empty trace");
  if (!(rule.threshold_fraction > 0.0 && rule.threshold_fraction < 1.0))
    throw DomainError("settling_time: threshold_fraction must lie in (0, 1)");
  if (!(rule.hold_duration >= 0.0)) throw DomainError("settling_time: hold_duration must be >= 0");
  if (rule.signals.empty()) throw DomainError("settling_time: no signals selected");

  std::vector<std::span<const double>> cols;
  for (const auto& name : rule.signals) cols.push_back(tr.column(name));

  const std::size_t n = tr.size();
  std::vector<double> envelope(n, 0.0);
  for (const auto& c : cols)
    for (std::size_t i = 0; i < n; ++i) envelope[i] = std::max(envelope[i], std::fabs(c[i]));

  const double band = rule.threshold_fraction * envelope.front();
  // Number of samples after t* that the window must cover.
  const auto hold = static_cast<std::size_t>(std::ceil(rule.hold_duration / tr.dt() - 1e-9));
  if (hold >= n) return std::nullopt;

  // Scan backwards: run[i] = length of the in-band run starting at i.
  std::size_t run = 0;
  std::optional<std::size_t> first;
  for (std::size_t i = n; i-- > 0;) {
    run = envelope[i] <= band ? run + 1 : 0;
    if (run >= hold + 1) first = i;
  }
  if (!first) return std::nullopt;
  return tr.time(*first);
}

void export_trace(const Trace& tr, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write trace '{}'", path.string()));
  std::string line = "t";
  for (const auto& n : tr.names()) {
    line += ',';
    line += n;
  }
  line += '\n';
  out << line;

  std::vector<std::span<const double>> cols;
  for (const auto& n : tr.names()) cols.push_back(tr.column(n));
  fmt::memory_buffer buf;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{:.17g}", tr.time(i));
    for (const auto& c : cols) fmt::format_to(std::back_inserter(buf), ",{:.17g}", c[i]);
    buf.push_back('\n');
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw std::runtime_error(fmt::format("error while writing trace '{}'", path.string()));
}

Trace import_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot read trace '{}'", path.string()));
  std::string header;
  if (!std::getline(in, header)) throw DomainError("import_trace: missing header");
  std::vector<std::string> names;
  {
    std::stringstream ss(header);
    std::string tok;
    while (std::getline(ss, tok, ',')) names.push_back(tok);
  }
  if (names.empty() || names.front() != "t") throw DomainError("import_trace: first column must be 't'");
  names.erase(names.begin());

  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    if (row.size() != names.size() + 1) throw DomainError("import_trace: ragged row");
    rows.push_back(std::move(row));
  }
  const double t0 = rows.empty() ? 0.0 : rows.front()[0];
  const double dt = rows.size() >= 2 ? rows[1][0] - rows[0][0] : 1.0;
  Trace tr(dt, names, t0);
  tr.reserve(rows.size());
  for (const auto& r : rows) tr.push(std::span<const double>(r).subspan(1));
  return tr;
}

}  // namespace presto
