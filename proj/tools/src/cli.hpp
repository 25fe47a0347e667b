#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace pseudolap::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kNumericalError = 3, kDiagnosticFailure = 4 };

struct RunConfig {
  std::string command;
  std::string model = "synthetic-beta1";
  std::vector<double> heights;  // empty: 10 in every cusp
  std::optional<std::pair<double, double>> window;
  double t_max = 10.0;
  int grid = 1000;
  double tol = 1e-12;
  std::optional<int> branch;
  double lambda_max = 0.25;
  std::pair<double, double> scales{1.0, 100.0};
  int samples = 40;
  std::string out_dir;  // empty: write the table to stdout
  std::string format = "delimited";
};

nlohmann::json to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

using Cell = std::variant<std::string, long long, double>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// 15 significant digits
std::string format_number(double v);

void write_delimited(const Table& t, std::ostream& out);
nlohmann::json structured_report(const RunConfig& c, const std::vector<Table>& tables, const nlohmann::json& summary);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv into a RunConfig and runs it.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pseudolap::cli
