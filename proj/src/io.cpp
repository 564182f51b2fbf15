#include "sampling/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sampling::io {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    // Trim surrounding whitespace and a possible trailing CR.
    const auto b = tok.find_first_not_of(" \t\r");
    const auto e = tok.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? "" : tok.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

[[noreturn]] void csv_error(std::size_t line_no, const std::string& what) {
  throw std::invalid_argument("CSV line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

survey::FinitePopulation parse_population_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(ss, line)) throw std::invalid_argument("CSV is empty");
  ++line_no;
  const auto header = split_csv_line(line);
  int value_col = -1, stratum_col = -1, cluster_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "value")
      value_col = static_cast<int>(i);
    else if (header[i] == "stratum")
      stratum_col = static_cast<int>(i);
    else if (header[i] == "cluster")
      cluster_col = static_cast<int>(i);
    else
      csv_error(line_no, "unknown column '" + header[i] + "' (expected value, stratum, cluster)");
  }
  if (value_col < 0) csv_error(line_no, "missing required column 'value'");

  survey::FinitePopulation pop;
  while (std::getline(ss, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      csv_error(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
    try {
      pop.values.push_back(std::stod(fields[value_col]));
    } catch (const std::exception&) {
      csv_error(line_no, "bad numeric value '" + fields[value_col] + "'");
    }
    if (stratum_col >= 0) {
      if (fields[stratum_col].empty())
        csv_error(line_no, "partial labeling not allowed (empty stratum)");
      try {
        pop.strata.push_back(std::stoi(fields[stratum_col]));
      } catch (const std::exception&) {
        csv_error(line_no, "bad stratum label '" + fields[stratum_col] + "'");
      }
    }
    if (cluster_col >= 0) {
      if (fields[cluster_col].empty())
        csv_error(line_no, "partial labeling not allowed (empty cluster)");
      try {
        pop.clusters.push_back(std::stoi(fields[cluster_col]));
      } catch (const std::exception&) {
        csv_error(line_no, "bad cluster label '" + fields[cluster_col] + "'");
      }
    }
  }
  pop.validate();
  return pop;
}

survey::FinitePopulation load_population(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_population_csv(buf.str());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

}  // namespace sampling::io
