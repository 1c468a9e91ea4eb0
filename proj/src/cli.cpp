#include "logopt/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "logopt/error.hpp"

namespace logopt::cli {

namespace {

using nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json metrics_json(const MetricsSummary& m) {
  ordered_json j;
  j["max_drawdown"] = m.max_drawdown;
  j["cumulative_return"] = m.cumulative_return;
  j["realized_log_growth"] = m.realized_log_growth;
  j["annualized_volatility"] = m.annualized_volatility;
  j["sharpe_per_period"] = optional_number(m.sharpe_per_period);
  j["sharpe_n_period"] = optional_number(m.sharpe_n_period);
  j["sharpe_annualized_252"] = optional_number(m.sharpe_annualized);
  j["n_periods"] = m.n_periods;
  j["risk_free_rate"] = m.risk_free_rate;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw Error(ErrorCode::IoError, fmt::format("write failed for {}", path.string()));
}

std::string percent(const ordered_json& v) {
  return v.is_null() ? "n/a" : fmt::format("{:.2f}%", v.get<double>() * 100.0);
}

std::string fixed3(const ordered_json& v) {
  return v.is_null() ? "n/a" : fmt::format("{:.3f}", v.get<double>());
}

void render_table(std::ostringstream& os, const std::string& title,
                  const std::vector<const ordered_json*>& columns, bool show_windows) {
  struct Row {
    std::string label;
    std::string (*format)(const ordered_json&);
    const char* field;
    bool from_metrics;
  };
  static const Row rows[] = {
      {"Maximum percentage drawdown d*", percent, "max_drawdown", true},
      {"Cumulative rate of return (V(N)-V0)/V0", percent, "cumulative_return", true},
      {"Realized log-growth log(V(N)/V(0))", percent, "realized_log_growth", true},
      {"Volatility (annualized) sigma", percent, "annualized_volatility", true},
      {"Sharpe ratio sqrt(N)*SR", fixed3, "sharpe_n_period", true},
      {"Sharpe ratio sqrt(252)*SR", fixed3, "sharpe_annualized_252", true},
      {"Running times (secs)", fixed3, "runtime_secs", false},
  };

  std::size_t label_width = std::string("Sliding window sizes M").size();
  for (const auto& r : rows) label_width = std::max(label_width, r.label.size());
  constexpr std::size_t kCell = 12;

  os << title << '\n';
  const std::size_t width = label_width + columns.size() * (kCell + 3) + 2;
  os << std::string(width, '-') << '\n';
  if (show_windows) {
    os << fmt::format("{:<{}}", "Sliding window sizes M", label_width);
    for (const auto* c : columns) os << " | " << fmt::format("{:>{}}", (*c)["window"].dump(), kCell);
    os << '\n';
  }
  for (const auto& r : rows) {
    os << fmt::format("{:<{}}", r.label, label_width);
    for (const auto* c : columns) {
      const auto& v = r.from_metrics ? (*c)["metrics"][r.field] : (*c)[r.field];
      os << " | " << fmt::format("{:>{}}", r.format(v), kCell);
    }
    os << '\n';
  }
  os << std::string(width, '-') << '\n';
}

}  // namespace

std::vector<std::size_t> parse_windows(const std::string& text) {
  std::vector<std::size_t> windows;
  std::set<std::size_t> seen;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long long value = 0;
    try {
      value = std::stoll(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size() || value <= 0) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("bad window size '{}'", item));
    }
    if (!seen.insert(static_cast<std::size_t>(value)).second) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("window size {} listed twice", value));
    }
    windows.push_back(static_cast<std::size_t>(value));
  }
  if (windows.empty()) throw Error(ErrorCode::InvalidArgument, "no window sizes given");
  return windows;
}

ordered_json report_to_json(const RunConfig& config, const BacktestReport& report,
                            const ordered_json& series_paths) {
  ordered_json j;
  auto& cfg = j["config"];
  cfg["prices"] = config.prices.string();
  cfg["flip"] = config.flip;
  cfg["split_requested"] = format_date(config.split);
  cfg["split_used"] = format_date(report.split);
  cfg["windows"] = config.windows;
  cfg["risk_free_rate"] = config.risk_free_rate;
  cfg["v0"] = config.v0;
  cfg["assets"] = report.assets;
  cfg["in_sample"] = {{"first_price_date", format_date(report.in_sample_start)},
                      {"last_price_date", format_date(report.split)},
                      {"return_stages", report.in_sample_stages}};
  cfg["out_of_sample"] = {{"first_price_date", format_date(report.curve_dates.front())},
                          {"last_price_date", format_date(report.out_of_sample_end)},
                          {"return_stages", report.stage_dates.size()}};
  cfg["window_alignment"] = "sliding windows start from the last M in-sample returns";

  auto& strategies = j["strategies"];
  strategies = ordered_json::array();
  for (const auto& run : report.strategies) {
    ordered_json s;
    s["name"] = run.name;
    s["window"] = run.window ? ordered_json(*run.window) : ordered_json(nullptr);
    s["weights_final"] = run.schedule.entries.back().values();
    double max_gap = 0.0;
    std::size_t iterations = 0;
    for (const auto& d : run.schedule.diagnostics) {
      max_gap = std::max(max_gap, d.gap);
      iterations += d.iterations;
    }
    s["solver"] = {{"max_gap", max_gap}, {"total_iterations", iterations}};
    s["final_value"] = run.curve.values.back();
    s["metrics"] = metrics_json(run.metrics);
    s["runtime_secs"] = run.runtime_secs;
    strategies.push_back(std::move(s));
  }
  j["series_paths"] = series_paths;
  return j;
}

std::string render_tables(const ordered_json& report) {
  std::ostringstream os;
  std::vector<const ordered_json*> classical;
  std::vector<const ordered_json*> sliding;
  for (const auto& s : report["strategies"]) {
    (s["window"].is_null() ? classical : sliding).push_back(&s);
  }
  const auto& cfg = report["config"];
  os << fmt::format("Assets: {}  In-sample: {} .. {}  Out-of-sample: {} .. {} ({} stages){}\n\n",
                    fmt::join(cfg["assets"].get<std::vector<std::string>>(), ", "),
                    cfg["in_sample"]["first_price_date"].get<std::string>(),
                    cfg["in_sample"]["last_price_date"].get<std::string>(),
                    cfg["out_of_sample"]["first_price_date"].get<std::string>(),
                    cfg["out_of_sample"]["last_price_date"].get<std::string>(),
                    cfg["out_of_sample"]["return_stages"].get<std::size_t>(),
                    cfg["flip"].get<bool>() ? "  [flipped prices]" : "");
  for (const auto* c : classical) {
    std::vector<std::string> weights;
    for (const auto& w : (*c)["weights_final"]) weights.push_back(fmt::format("{:.4f}", w.get<double>()));
    render_table(os, fmt::format("Classical log-optimal portfolio K* = [{}]", fmt::join(weights, " ")),
                 {c}, false);
    os << '\n';
  }
  if (!sliding.empty()) {
    render_table(os, "Log-optimal portfolio with sliding window approach", sliding, true);
  }
  return os.str();
}

ordered_json write_series(const std::filesystem::path& dir, const BacktestReport& report) {
  std::filesystem::create_directories(dir);
  ordered_json paths;

  {
    std::ostringstream os;
    os << "date";
    for (const auto& s : report.strategies) os << ',' << s.name;
    os << '\n';
    for (std::size_t k = 0; k < report.curve_dates.size(); ++k) {
      os << format_date(report.curve_dates[k]);
      for (const auto& s : report.strategies) os << ',' << fmt::format("{}", s.curve.values[k]);
      os << '\n';
    }
    const auto path = dir / "equity.csv";
    write_text(path, os.str());
    paths["equity"] = path.string();
  }

  auto& weights = paths["weights"];
  weights = ordered_json::object();
  for (const auto& s : report.strategies) {
    if (!s.window) continue;
    std::ostringstream os;
    os << "date";
    for (const auto& a : report.assets) os << ',' << a;
    os << '\n';
    for (std::size_t t = 0; t < s.schedule.size(); ++t) {
      os << format_date(report.stage_dates[t]);
      for (double w : s.schedule.entries[t].values()) os << ',' << fmt::format("{}", w);
      os << '\n';
    }
    const auto path = dir / fmt::format("weights_M{}.csv", *s.window);
    write_text(path, os.str());
    weights[fmt::format("M{}", *s.window)] = path.string();
  }
  return paths;
}

int cmd_backtest(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    auto prices = load_price_csv(config.prices);
    if (config.flip) prices = flip_prices(prices);

    RunSpec spec;
    spec.split = config.split;
    spec.windows = config.windows;
    spec.risk_free_rate = config.risk_free_rate;
    spec.v0 = config.v0;
    spec.threads = config.threads;
    const auto report = run_backtest(prices, spec);

    ordered_json series_paths = nullptr;
    if (!config.series.empty()) series_paths = write_series(config.series, report);
    const auto json = report_to_json(config, report, series_paths);
    const auto tables = render_tables(json);
    if (!config.report.empty()) {
      write_text(config.report, json.dump(2) + "\n");
      auto text_path = config.report;
      text_path += ".txt";
      write_text(text_path, tables);
    }
    out << tables;
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_solve(const std::filesystem::path& prices_path, const Date& from, const Date& to,
              std::ostream& out, std::ostream& err) {
  try {
    const auto prices = restrict_dates(load_price_csv(prices_path), from, to);
    const auto returns = compute_returns(prices);
    SolveResult result{WeightVector::uniform(returns.num_assets())};
    int status = 0;
    try {
      result = classical_log_optimal(returns);
    } catch (const DidNotConverge& e) {
      err << "error: " << e.what() << '\n';
      result = e.best();
      status = 1;
    }
    out << fmt::format("range: {} .. {} ({} return stages)\n", format_date(prices.dates().front()),
                       format_date(prices.dates().back()), returns.num_stages());
    for (std::size_t i = 0; i < returns.num_assets(); ++i) {
      out << fmt::format("weight {}: {:.10f}\n", returns.assets()[i], result.weights[i]);
    }
    out << fmt::format("objective: {:.12g}\ngap: {:.3e}\niterations: {}\nconverged: {}\n",
                       result.objective, result.gap, result.iterations, result.converged);
    return status;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_flip(const std::filesystem::path& in, const std::filesystem::path& out_path,
             std::ostream& out, std::ostream& err) {
  try {
    const auto flipped = flip_prices(load_price_csv(in));
    if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
    write_price_csv(out_path, flipped);
    out << fmt::format("wrote {} rows x {} assets to {}\n", flipped.num_dates(),
                       flipped.num_assets(), out_path.string());
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sliding-window log-optimal portfolio backtester", "logopt"};
  app.require_subcommand(1);

  auto date_check = CLI::Validator(
      [](std::string& s) { return parse_date(s) ? std::string{} : "expected YYYY-MM-DD, got " + s; },
      "DATE");

  RunConfig config;
  std::string split, windows = "5,10,30,60,100";
  auto* backtest = app.add_subcommand("backtest", "classical vs sliding-window backtest");
  backtest->add_option("--prices", config.prices, "price CSV (date,<asset>,...)")->required();
  backtest->add_option("--split", split, "last in-sample price date")->required()->check(date_check);
  backtest->add_option("--windows", windows, "comma-separated sliding window sizes")
      ->capture_default_str();
  backtest->add_option("--rf", config.risk_free_rate, "per-period risk-free rate")->capture_default_str();
  backtest->add_option("--v0", config.v0, "initial account value")->capture_default_str();
  backtest->add_option("--report", config.report, "report JSON path (tables go to <path>.txt)");
  backtest->add_option("--series", config.series, "directory for equity/weight CSV series");
  backtest->add_flag("--flip", config.flip, "run on flipped upside-down prices");
  backtest->add_option("--threads", config.threads, "worker threads for window solves")
      ->capture_default_str()
      ->check(CLI::Range(1u, 256u));

  std::filesystem::path solve_prices;
  std::string from, to;
  auto* solve = app.add_subcommand("solve", "single log-optimal solve over a date range");
  solve->add_option("--prices", solve_prices, "price CSV")->required();
  solve->add_option("--from", from, "first price date")->required()->check(date_check);
  solve->add_option("--to", to, "last price date")->required()->check(date_check);

  std::filesystem::path flip_in, flip_out;
  auto* flip = app.add_subcommand("flip", "write flipped upside-down prices");
  flip->add_option("--prices", flip_in, "input price CSV")->required();
  flip->add_option("--out", flip_out, "output price CSV")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return 1;
  }

  if (backtest->parsed()) {
    try {
      config.split = *parse_date(split);
      config.windows = parse_windows(windows);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return 1;
    }
    return cmd_backtest(config, out, err);
  }
  if (solve->parsed()) {
    return cmd_solve(solve_prices, *parse_date(from), *parse_date(to), out, err);
  }
  return cmd_flip(flip_in, flip_out, out, err);
}

}  // namespace logopt::cli
