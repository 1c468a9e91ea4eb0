#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "logopt/backtest_engine.hpp"

namespace logopt::cli {

struct RunConfig {
  std::filesystem::path prices;
  Date split;
  std::vector<std::size_t> windows{5, 10, 30, 60, 100};
  double risk_free_rate = 0.0;
  double v0 = 1.0;
  std::filesystem::path report;
  std::filesystem::path series;
  bool flip = false;
  unsigned threads = 1;
};

/// Parses "5,10,30" into distinct positive sizes; throws InvalidArgument.
std::vector<std::size_t> parse_windows(const std::string& text);

/// The machine-readable report. Field order is fixed; `runtime_secs` is the
/// only field that varies between runs on identical inputs.
nlohmann::ordered_json report_to_json(const RunConfig& config, const BacktestReport& report,
                                      const nlohmann::ordered_json& series_paths);

/// Human-readable tables rendered from the JSON report.
std::string render_tables(const nlohmann::ordered_json& report);

/// Writes equity.csv and weights_M<M>.csv under `dir`; returns the paths
/// in the shape stored under "series_paths".
nlohmann::ordered_json write_series(const std::filesystem::path& dir, const BacktestReport& report);

int cmd_backtest(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_solve(const std::filesystem::path& prices, const Date& from, const Date& to,
              std::ostream& out, std::ostream& err);
int cmd_flip(const std::filesystem::path& in, const std::filesystem::path& out_path,
             std::ostream& out, std::ostream& err);

/// Full command-line entry point: `logopt <backtest|solve|flip> [flags]`.
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace logopt::cli
