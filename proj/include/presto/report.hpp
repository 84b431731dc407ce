#pragma once

#include <string>

#include "presto/harness.hpp"

namespace presto {

/// Aligned plain-text table with the comparison columns.
std::string format_comparison_text(const Comparison& c);
/// Machine-readable twin of the text table.
std::string format_comparison_csv(const Comparison& c);

std::string format_run_text(const RunReport& r);
std::string format_run_csv(const RunReport& r);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace presto
