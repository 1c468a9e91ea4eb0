#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace logopt {

using Date = std::chrono::year_month_day;
using Matrix = std::vector<std::vector<double>>;

/// Parses a strict `YYYY-MM-DD` calendar date; nullopt on anything else.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& date);

/// Dated, per-asset price matrix. prices()[k][i] is the price of asset i on
/// dates()[k]. The constructor enforces the invariants (strictly increasing
/// dates, T >= 2, m >= 1, rectangular, finite positive prices), so a
/// PriceSeries that exists is always valid.
class PriceSeries {
 public:
  PriceSeries(std::vector<Date> dates, std::vector<std::string> assets, Matrix prices);

  const std::vector<Date>& dates() const noexcept { return dates_; }
  const std::vector<std::string>& assets() const noexcept { return assets_; }
  const Matrix& prices() const noexcept { return prices_; }

  std::size_t num_dates() const noexcept { return dates_.size(); }
  std::size_t num_assets() const noexcept { return assets_.size(); }

  /// Index of the last date <= `date`, nullopt when `date` precedes the sample.
  std::optional<std::size_t> last_index_on_or_before(const Date& date) const;

  bool operator==(const PriceSeries&) const = default;

 private:
  std::vector<Date> dates_;
  std::vector<std::string> assets_;
  Matrix prices_;
};

/// Per-stage arithmetic returns. Row k is x(k), the return earned from
/// dates()[k] to the next price date; dates()[k] labels that period's start.
class ReturnSeries {
 public:
  ReturnSeries(std::vector<Date> dates, std::vector<std::string> assets, Matrix returns);

  const std::vector<Date>& dates() const noexcept { return dates_; }
  const std::vector<std::string>& assets() const noexcept { return assets_; }
  const Matrix& returns() const noexcept { return returns_; }

  std::size_t num_stages() const noexcept { return returns_.size(); }
  std::size_t num_assets() const noexcept { return assets_.size(); }
  std::span<const double> row(std::size_t stage) const { return returns_.at(stage); }

  /// Rows [first, last) as a new series.
  ReturnSeries slice(std::size_t first, std::size_t last) const;

  bool operator==(const ReturnSeries&) const = default;

 private:
  std::vector<Date> dates_;
  std::vector<std::string> assets_;
  Matrix returns_;
};

/// Empirical distribution over M return vectors, each with mass 1/M.
class ReturnWindow {
 public:
  explicit ReturnWindow(Matrix rows);

  const Matrix& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  std::size_t num_assets() const noexcept { return rows_.front().size(); }
  double weight_per_row() const noexcept { return 1.0 / static_cast<double>(rows_.size()); }

 private:
  Matrix rows_;
};

PriceSeries load_price_csv(std::istream& in);
PriceSeries load_price_csv(const std::filesystem::path& path);

/// Writes the same CSV dialect load_price_csv reads; numbers use the
/// shortest representation that round-trips.
void write_price_csv(std::ostream& out, const PriceSeries& prices);
void write_price_csv(const std::filesystem::path& path, const PriceSeries& prices);

ReturnSeries compute_returns(const PriceSeries& prices);

/// Reflects each asset's path about the midpoint of its own range:
/// s'(k) = max + min - s(k). Positivity is preserved and the map is an
/// involution.
PriceSeries flip_prices(const PriceSeries& prices);

/// Rows x(stage - window) ... x(stage - 1). `stage` must be a stage whose
/// own return exists: throws WindowOutOfRange unless
/// window <= stage < num_stages().
ReturnWindow slice_window(const ReturnSeries& returns, std::size_t stage, std::size_t window);

/// Appends a riskless column with constant per-period return `rate`, named
/// "CASH" (or "CASH_<n>" when that identifier is taken).
ReturnSeries append_cash_asset(const ReturnSeries& returns, double rate);

/// Prices restricted to dates in [from, to] (inclusive).
PriceSeries restrict_dates(const PriceSeries& prices, const Date& from, const Date& to);

}  // namespace logopt
