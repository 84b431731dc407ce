#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace presto {

/// Uniformly sampled record of named signals. Sample i sits at time
/// t0 + i * dt; every column has the same length.
class Trace {
 public:
  Trace() = default;
  Trace(double dt, std::vector<std::string> names, double t0 = 0.0);

  double dt() const { return dt_; }
  double t0() const { return t0_; }
  double time(std::size_t i) const { return t0_ + static_cast<double>(i) * dt_; }
  std::size_t size() const { return columns_.empty() ? 0 : columns_.front().size(); }
  bool empty() const { return size() == 0; }

  const std::vector<std::string>& names() const { return names_; }
  bool has(std::string_view name) const;

  /// Appends one sample; `row` is ordered like names().
  void push(std::span<const double> row);
  void reserve(std::size_t n);

  /// Throws LookupError if absent.
  std::span<const double> column(std::string_view name) const;

 private:
  std::size_t index_of(std::string_view name) const;

  double dt_ = 1.0;
  double t0_ = 0.0;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

/// Euclidean norm of the raw sample sequence (no dt weighting).
double l2_norm(const Trace& tr, std::string_view column);
double linf_norm(const Trace& tr, std::string_view column);

struct SettleRule {
  double threshold_fraction = 0.02;
  double hold_duration = 0.5;
  std::vector<std::string> signals{"x1", "x2"};
};

/// First sample time t* such that max_k |signal_k(t)| stays at or below
/// threshold_fraction * max_k |signal_k(0)| for every sample in
/// [t*, t* + hold_duration]. std::nullopt means "not settled": no such window
/// fits inside the trace.
std::optional<double> settling_time(const Trace& tr, const SettleRule& rule = {});

/// CSV: header "t,<names...>", 17 significant digits, LF endings.
void export_trace(const Trace& tr, const std::filesystem::path& path);
Trace import_trace(const std::filesystem::path& path);

}  // namespace presto
