#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace netpart {

/// Number of 5-minute slots in one day of floating-car data.
inline constexpr std::size_t kSlotsPerDay = 288;

using Date = std::chrono::year_month_day;

/// Parses YYYYMMDD. Returns nullopt for malformed or impossible dates.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date date);

struct SpeedRecord {
  Date date;
  std::size_t period = 0;  // 0-based slot index
  std::string road_id;
  double speed = 0.0;  // km/h
  std::uint64_t sample_vehicles = 0;

  friend bool operator==(const SpeedRecord&, const SpeedRecord&) = default;
};

/// One road's gap-free daily speed vector. `imputed_mask[i]` is true when
/// slot i was filled rather than observed.
struct DailySeries {
  std::string road_id;
  Date date;
  std::vector<double> values;
  std::vector<bool> imputed_mask;

  std::size_t observed_count() const;
};

struct RecordFormat {
  std::size_t period_base = 0;  // 1 for files numbering slots from 1
  std::size_t slots_per_day = kSlotsPerDay;
};

inline constexpr std::string_view kRecordHeader =
    "date,period,road_id,speed,sample_vehicles";

/// Reads the records CSV. The header line is skipped; blank lines are
/// ignored. Errors name the 1-based line number.
std::vector<SpeedRecord> parse_records(std::istream& in,
                                       const RecordFormat& format = {});

/// Writes records with a 0-based period column. Speeds use the shortest
/// representation that parses back to the same double.
void write_records(std::ostream& out, std::span<const SpeedRecord> records);

/// Builds the series for one (road, date). Records for other roads or dates
/// are ignored.
DailySeries assemble_series(std::span<const SpeedRecord> records,
                            std::string_view road_id, Date date,
                            std::size_t slots_per_day = kSlotsPerDay);

/// Assembles every (road, date) present in `records`, ordered by road_id then
/// date.
std::vector<DailySeries> assemble_all(std::span<const SpeedRecord> records,
                                      std::size_t slots_per_day = kSlotsPerDay);

/// Fills gaps: interior gaps by linear interpolation between the nearest
/// observed neighbours, leading/trailing gaps with the nearest observation.
std::vector<double> impute_missing(std::span<const std::optional<double>> values);

}  // namespace netpart
