#include "presto/report.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "presto/errors.hpp"

namespace presto {

namespace {

std::string num(double v) { return fmt::format("{:.6g}", v); }
std::string num(const std::optional<double>& v, const char* absent = "-") { return v ? num(*v) : absent; }

std::string status(const RunReport& r) {
  if (r.diverged) return fmt::format("diverged at t={:.4g}", r.diverged_at);
  return r.settling ? "ok" : "not settled";
}

std::string settling_cell(const RunReport& r) {
  if (r.diverged) return "failed";
  return num(r.settling, "not settled");
}

std::vector<std::string> text_cells(const RunReport& r) {
  return {r.name,     to_string(r.kind), num(r.u_l2),      num(r.u_linf),      num(r.ey_l2),
          num(r.ey_linf), num(r.ex_l2),  num(r.ex_linf),   num(r.uc_linf),     settling_cell(r),
          r.trace_path.empty() ? "-" : r.trace_path.string()};
}

const std::vector<std::string> kTextHeader{"scenario", "kind",    "|u|_2",   "|u|_inf", "|e_y|_2", "|e_y|_inf",
                                           "|e_x|_2",  "|e_x|_inf", "|u_c|_inf", "t_s",     "trace"};

std::string csv_opt(const std::optional<double>& v) { return v ? fmt::format("{:.17g}", *v) : ""; }

std::string csv_row(const RunReport& r) {
  return fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g},{},{},{},{},{},{},{}\n", r.name, to_string(r.kind), r.u_l2,
                     r.u_linf, r.ey_l2, r.ey_linf, csv_opt(r.ex_l2), csv_opt(r.ex_linf), csv_opt(r.uc_l2),
                     csv_opt(r.uc_linf), r.diverged ? "" : csv_opt(r.settling), status(r), r.trace_path.string());
}

const char* kCsvHeader = "scenario,kind,u_l2,u_linf,ey_l2,ey_linf,ex_l2,ex_linf,uc_l2,uc_linf,settling_time,status,trace\n";

}  // namespace

std::string format_comparison_text(const Comparison& c) {
  std::vector<std::vector<std::string>> rows{kTextHeader};
  for (const auto& r : c.rows) rows.push_back(text_cells(r));
  std::vector<std::size_t> width(kTextHeader.size(), 0);
  for (const auto& row : rows)
    for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());

  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string line;
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (j) line += "  ";
      line += j < 2 || j + 1 == rows[i].size() ? fmt::format("{:<{}}", rows[i][j], width[j])
                                               : fmt::format("{:>{}}", rows[i][j], width[j]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
    if (i == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      out += std::string(total - 2, '-') + '\n';
    }
  }
  for (const auto& r : c.rows)
    for (const auto& w : r.warnings) out += fmt::format("warning [{}]: {}\n", r.name, w);
  return out;
}

std::string format_comparison_csv(const Comparison& c) {
  std::string out = kCsvHeader;
  for (const auto& r : c.rows) out += csv_row(r);
  return out;
}

std::string format_run_text(const RunReport& r) {
  std::string out;
  out += fmt::format("scenario      {}\n", r.name);
  out += fmt::format("kind          {}\n", to_string(r.kind));
  out += fmt::format("|u|_2         {}\n", num(r.u_l2));
  out += fmt::format("|u|_inf       {}\n", num(r.u_linf));
  if (r.uc_l2) out += fmt::format("|u_c|_2       {}\n", num(r.uc_l2));
  if (r.uc_linf) out += fmt::format("|u_c|_inf     {}\n", num(r.uc_linf));
  out += fmt::format("|e_y|_2       {}\n", num(r.ey_l2));
  out += fmt::format("|e_y|_inf     {}\n", num(r.ey_linf));
  if (r.ex_l2) out += fmt::format("|e_x|_2       {}\n", num(r.ex_l2));
  if (r.ex_linf) out += fmt::format("|e_x|_inf     {}\n", num(r.ex_linf));
  out += fmt::format("t_s           {}\n", settling_cell(r));
  out += fmt::format("status        {}\n", status(r));
  if (!r.trace_path.empty()) out += fmt::format("trace         {}\n", r.trace_path.string());
  for (const auto& w : r.warnings) out += fmt::format("warning       {}\n", w);
  return out;
}

std::string format_run_csv(const RunReport& r) { return std::string(kCsvHeader) + csv_row(r); }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

}  // namespace presto
