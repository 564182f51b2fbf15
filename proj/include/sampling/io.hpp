#pragma once

#include <string>
#include <vector>

#include "sampling/survey.hpp"

namespace sampling::io {

/// Shortest decimal representation that round-trips to the same double.
[[nodiscard]] std::string format_double(double v);

/// Population CSV: header row required, columns value[,stratum][,cluster] in
/// any order, UTF-8. Errors carry 1-based line numbers.
[[nodiscard]] survey::FinitePopulation load_population(const std::string& path);
[[nodiscard]] survey::FinitePopulation parse_population_csv(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sampling::io
