#include "logopt/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "logopt/error.hpp"

namespace logopt {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  // from_chars rejects a leading '+', which some exporters emit.
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

void validate_dates(const std::vector<Date>& dates) {
  for (std::size_t k = 0; k < dates.size(); ++k) {
    if (!dates[k].ok()) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("invalid calendar date at row {}", k));
    }
    if (k == 0) continue;
    if (dates[k] == dates[k - 1]) {
      throw Error(ErrorCode::DuplicateDate, format_date(dates[k]));
    }
    if (dates[k] < dates[k - 1]) {
      throw Error(ErrorCode::UnsortedDates,
                  fmt::format("{} follows {}", format_date(dates[k]), format_date(dates[k - 1])));
    }
  }
}

void validate_shape(std::size_t rows, std::size_t dates, std::size_t assets, const Matrix& m) {
  if (assets == 0) throw Error(ErrorCode::InvalidArgument, "at least one asset is required");
  if (rows != dates) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("{} data rows but {} dates", rows, dates));
  }
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m[k].size() != assets) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("row {} has {} entries, expected {}", k, m[k].size(), assets));
    }
  }
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
  text = trim(text);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto field = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    const char* first = text.data() + pos;
    const auto [ptr, ec] = std::from_chars(first, first + len, v);
    if (ec != std::errc{} || ptr != first + len) return std::nullopt;
    return v;
  };
  const auto y = field(0, 4);
  const auto m = field(5, 2);
  const auto d = field(8, 2);
  if (!y || !m || !d) return std::nullopt;
  const Date date{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                  std::chrono::day{static_cast<unsigned>(*d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(const Date& date) {
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(date.year()),
                     static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
}

PriceSeries::PriceSeries(std::vector<Date> dates, std::vector<std::string> assets, Matrix prices)
    : dates_(std::move(dates)), assets_(std::move(assets)), prices_(std::move(prices)) {
  validate_shape(prices_.size(), dates_.size(), assets_.size(), prices_);
  if (dates_.size() < 2) {
    throw Error(ErrorCode::TooFewRows, fmt::format("need at least 2 price rows, got {}", dates_.size()));
  }
  validate_dates(dates_);
  for (std::size_t k = 0; k < prices_.size(); ++k) {
    for (std::size_t i = 0; i < prices_[k].size(); ++i) {
      const double p = prices_[k][i];
      if (!std::isfinite(p) || p <= 0.0) {
        throw Error(ErrorCode::NonPositivePrice,
                    fmt::format("{} on {} is {}", assets_[i], format_date(dates_[k]), p));
      }
    }
  }
}

std::optional<std::size_t> PriceSeries::last_index_on_or_before(const Date& date) const {
  const auto it = std::upper_bound(dates_.begin(), dates_.end(), date);
  if (it == dates_.begin()) return std::nullopt;
  return static_cast<std::size_t>(std::distance(dates_.begin(), it) - 1);
}

ReturnSeries::ReturnSeries(std::vector<Date> dates, std::vector<std::string> assets, Matrix returns)
    : dates_(std::move(dates)), assets_(std::move(assets)), returns_(std::move(returns)) {
  validate_shape(returns_.size(), dates_.size(), assets_.size(), returns_);
  validate_dates(dates_);
  for (std::size_t k = 0; k < returns_.size(); ++k) {
    for (double x : returns_[k]) {
      if (!std::isfinite(x) || x <= -1.0) {
        throw Error(ErrorCode::NonViableReturn,
                    fmt::format("return {} at stage {} is not finite and > -1", x, k));
      }
    }
  }
}

ReturnSeries ReturnSeries::slice(std::size_t first, std::size_t last) const {
  if (first > last || last > returns_.size()) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("slice [{}, {}) outside {} stages", first, last, returns_.size()));
  }
  return ReturnSeries({dates_.begin() + first, dates_.begin() + last}, assets_,
                      {returns_.begin() + first, returns_.begin() + last});
}

ReturnWindow::ReturnWindow(Matrix rows) : rows_(std::move(rows)) {
  if (rows_.empty() || rows_.front().empty()) {
    throw Error(ErrorCode::InvalidWindow, "window needs at least one row and one asset");
  }
  const std::size_t m = rows_.front().size();
  for (const auto& row : rows_) {
    if (row.size() != m) throw Error(ErrorCode::InvalidWindow, "ragged window rows");
    for (double x : row) {
      if (!std::isfinite(x) || x <= -1.0) {
        throw Error(ErrorCode::InvalidWindow, fmt::format("window entry {} is not > -1", x));
      }
    }
  }
}

PriceSeries load_price_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::string> assets;
  bool have_header = false;
  std::vector<Date> dates;
  Matrix prices;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;

    const auto fields = split_commas(view);
    if (!have_header) {
      if (trim(fields.front()) != "date" || fields.size() < 2) {
        throw Error(ErrorCode::MalformedRow,
                    fmt::format("line {}: header must be date,<asset>,...", line_no));
      }
      for (std::size_t c = 1; c < fields.size(); ++c) {
        const auto id = trim(fields[c]);
        if (id.empty()) {
          throw Error(ErrorCode::MalformedRow, fmt::format("line {}: empty asset id", line_no));
        }
        assets.emplace_back(id);
      }
      have_header = true;
      continue;
    }

    if (fields.size() != assets.size() + 1) {
      throw Error(ErrorCode::MalformedRow,
                  fmt::format("line {}: {} columns, expected {}", line_no, fields.size(),
                              assets.size() + 1));
    }
    const auto date = parse_date(fields.front());
    if (!date) {
      throw Error(ErrorCode::MalformedRow,
                  fmt::format("line {}: bad date '{}'", line_no, trim(fields.front())));
    }
    std::vector<double> row;
    row.reserve(assets.size());
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const auto value = parse_number(fields[c]);
      if (!value || std::isnan(*value) || std::isinf(*value)) {
        throw Error(ErrorCode::MalformedRow,
                    fmt::format("line {}: bad number '{}'", line_no, trim(fields[c])));
      }
      if (*value <= 0.0) {
        throw Error(ErrorCode::NonPositivePrice,
                    fmt::format("line {}: {} price {}", line_no, assets[c - 1], *value));
      }
      row.push_back(*value);
    }
    if (!dates.empty()) {
      if (*date == dates.back()) {
        throw Error(ErrorCode::DuplicateDate, fmt::format("line {}: {}", line_no, format_date(*date)));
      }
      if (*date < dates.back()) {
        throw Error(ErrorCode::UnsortedDates, fmt::format("line {}: {}", line_no, format_date(*date)));
      }
    }
    dates.push_back(*date);
    prices.push_back(std::move(row));
  }

  if (!have_header) throw Error(ErrorCode::MalformedRow, "empty input, no header");
  if (dates.size() < 2) {
    throw Error(ErrorCode::TooFewRows, fmt::format("need at least 2 price rows, got {}", dates.size()));
  }
  return PriceSeries(std::move(dates), std::move(assets), std::move(prices));
}

PriceSeries load_price_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, fmt::format("cannot open {}", path.string()));
  return load_price_csv(in);
}

void write_price_csv(std::ostream& out, const PriceSeries& prices) {
  out << "date";
  for (const auto& id : prices.assets()) out << ',' << id;
  out << '\n';
  for (std::size_t k = 0; k < prices.num_dates(); ++k) {
    out << format_date(prices.dates()[k]);
    for (double p : prices.prices()[k]) out << ',' << fmt::format("{}", p);
    out << '\n';
  }
}

void write_price_csv(const std::filesystem::path& path, const PriceSeries& prices) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, fmt::format("cannot write {}", path.string()));
  write_price_csv(out, prices);
  if (!out) throw Error(ErrorCode::IoError, fmt::format("write failed for {}", path.string()));
}

ReturnSeries compute_returns(const PriceSeries& prices) {
  const auto& s = prices.prices();
  const std::size_t stages = prices.num_dates() - 1;
  Matrix returns(stages, std::vector<double>(prices.num_assets()));
  for (std::size_t k = 0; k < stages; ++k) {
    for (std::size_t i = 0; i < prices.num_assets(); ++i) {
      returns[k][i] = (s[k + 1][i] - s[k][i]) / s[k][i];
    }
  }
  return ReturnSeries({prices.dates().begin(), prices.dates().end() - 1}, prices.assets(),
                      std::move(returns));
}

PriceSeries flip_prices(const PriceSeries& prices) {
  const std::size_t m = prices.num_assets();
  std::vector<double> pivot(m);
  for (std::size_t i = 0; i < m; ++i) {
    double lo = prices.prices().front()[i];
    double hi = lo;
    for (const auto& row : prices.prices()) {
      lo = std::min(lo, row[i]);
      hi = std::max(hi, row[i]);
    }
    pivot[i] = hi + lo;
  }
  Matrix flipped = prices.prices();
  for (auto& row : flipped) {
    for (std::size_t i = 0; i < m; ++i) row[i] = pivot[i] - row[i];
  }
  return PriceSeries(prices.dates(), prices.assets(), std::move(flipped));
}

ReturnWindow slice_window(const ReturnSeries& returns, std::size_t stage, std::size_t window) {
  if (window == 0) throw Error(ErrorCode::WindowOutOfRange, "window size must be >= 1");
  if (stage < window || stage >= returns.num_stages()) {
    throw Error(ErrorCode::WindowOutOfRange,
                fmt::format("stage {} with window {} over {} stages", stage, window,
                            returns.num_stages()));
  }
  const auto& all = returns.returns();
  return ReturnWindow(Matrix(all.begin() + static_cast<std::ptrdiff_t>(stage - window),
                             all.begin() + static_cast<std::ptrdiff_t>(stage)));
}

ReturnSeries append_cash_asset(const ReturnSeries& returns, double rate) {
  if (!std::isfinite(rate) || rate <= -1.0) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("riskless rate {} must be > -1", rate));
  }
  auto taken = [&](const std::string& id) {
    return std::find(returns.assets().begin(), returns.assets().end(), id) != returns.assets().end();
  };
  std::string id = "CASH";
  for (int n = 1; taken(id); ++n) id = fmt::format("CASH_{}", n);

  auto assets = returns.assets();
  assets.push_back(id);
  Matrix rows = returns.returns();
  for (auto& row : rows) row.push_back(rate);
  return ReturnSeries(returns.dates(), std::move(assets), std::move(rows));
}

PriceSeries restrict_dates(const PriceSeries& prices, const Date& from, const Date& to) {
  if (to < from) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("range start {} is after end {}", format_date(from), format_date(to)));
  }
  std::vector<Date> dates;
  Matrix rows;
  for (std::size_t k = 0; k < prices.num_dates(); ++k) {
    const auto& d = prices.dates()[k];
    if (d < from || to < d) continue;
    dates.push_back(d);
    rows.push_back(prices.prices()[k]);
  }
  return PriceSeries(std::move(dates), prices.assets(), std::move(rows));
}

}  // namespace logopt
