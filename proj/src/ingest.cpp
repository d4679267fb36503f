#include "netpart/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <utility>

#include "netpart/error.hpp"

namespace netpart {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
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
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) return std::nullopt;
  return value;
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& what) {
  throw Error(ErrorKind::MalformedRow,
              "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 8 ||
      !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return std::nullopt;
  const int y = *parse_number<int>(text.substr(0, 4));
  const unsigned m = *parse_number<unsigned>(text.substr(4, 2));
  const unsigned d = *parse_number<unsigned>(text.substr(6, 2));
  const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(Date date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d%02u%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

std::size_t DailySeries::observed_count() const {
  return static_cast<std::size_t>(
      std::count(imputed_mask.begin(), imputed_mask.end(), false));
}

std::vector<SpeedRecord> parse_records(std::istream& in, const RecordFormat& format) {
  std::vector<SpeedRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool seen_first = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (!seen_first) {
      seen_first = true;
      if (text.starts_with("date")) continue;
    }
    const auto fields = split_fields(text);
    if (fields.size() != 5)
      malformed(line_no, "expected 5 columns, found " + std::to_string(fields.size()));

    SpeedRecord rec;
    const auto date = parse_date(trim(fields[0]));
    if (!date) malformed(line_no, "bad date '" + std::string(fields[0]) + "'");
    rec.date = *date;

    const auto period = parse_number<long long>(trim(fields[1]));
    if (!period) malformed(line_no, "bad period '" + std::string(fields[1]) + "'");
    const long long zero_based = *period - static_cast<long long>(format.period_base);
    if (zero_based < 0 || zero_based >= static_cast<long long>(format.slots_per_day))
      throw Error(ErrorKind::PeriodOutOfRange,
                  "line " + std::to_string(line_no) + ": period " +
                      std::to_string(*period) + " outside [" +
                      std::to_string(format.period_base) + ", " +
                      std::to_string(format.period_base + format.slots_per_day - 1) + "]");
    rec.period = static_cast<std::size_t>(zero_based);

    rec.road_id = std::string(trim(fields[2]));
    if (rec.road_id.empty()) malformed(line_no, "empty road_id");

    const auto speed = parse_number<double>(trim(fields[3]));
    if (!speed || !std::isfinite(*speed) || *speed < 0.0)
      malformed(line_no, "bad speed '" + std::string(fields[3]) + "'");
    rec.speed = *speed;

    const auto vehicles = parse_number<std::uint64_t>(trim(fields[4]));
    if (!vehicles) malformed(line_no, "bad sample_vehicles '" + std::string(fields[4]) + "'");
    rec.sample_vehicles = *vehicles;

    records.push_back(std::move(rec));
  }
  return records;
}

void write_records(std::ostream& out, std::span<const SpeedRecord> records) {
  out << kRecordHeader << '\n';
  char buf[64];
  for (const auto& r : records) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, r.speed);
    out << format_date(r.date) << ',' << r.period << ',' << r.road_id << ','
        << std::string_view(buf, static_cast<std::size_t>(end - buf)) << ','
        << r.sample_vehicles << '\n';
  }
}

namespace {

DailySeries build_series(std::string road_id, Date date,
                         const std::vector<const SpeedRecord*>& rows,
                         std::size_t slots_per_day) {
  if (rows.empty())
    throw Error(ErrorKind::AllMissing,
                "no observations for road " + road_id + " on " + format_date(date));
  std::vector<std::optional<double>> slots(slots_per_day);
  for (const auto* r : rows) {
    if (r->period >= slots_per_day)
      throw Error(ErrorKind::PeriodOutOfRange,
                  "period " + std::to_string(r->period) + " for road " + road_id);
    if (slots[r->period])
      throw Error(ErrorKind::DuplicatePeriod,
                  "road " + road_id + " on " + format_date(date) + " has two rows for period " +
                      std::to_string(r->period));
    slots[r->period] = r->speed;
  }
  DailySeries series;
  series.road_id = std::move(road_id);
  series.date = date;
  series.imputed_mask.resize(slots_per_day);
  for (std::size_t i = 0; i < slots_per_day; ++i) series.imputed_mask[i] = !slots[i];
  series.values = impute_missing(slots);
  return series;
}

}  // namespace

DailySeries assemble_series(std::span<const SpeedRecord> records,
                            std::string_view road_id, Date date,
                            std::size_t slots_per_day) {
  std::vector<const SpeedRecord*> rows;
  for (const auto& r : records)
    if (r.road_id == road_id && r.date == date) rows.push_back(&r);
  return build_series(std::string(road_id), date, rows, slots_per_day);
}

std::vector<DailySeries> assemble_all(std::span<const SpeedRecord> records,
                                      std::size_t slots_per_day) {
  std::map<std::pair<std::string, Date>, std::vector<const SpeedRecord*>> groups;
  for (const auto& r : records) groups[{r.road_id, r.date}].push_back(&r);
  std::vector<DailySeries> out;
  out.reserve(groups.size());
  for (const auto& [key, rows] : groups)
    out.push_back(build_series(key.first, key.second, rows, slots_per_day));
  return out;
}

std::vector<double> impute_missing(std::span<const std::optional<double>> values) {
  const std::size_t n = values.size();
  std::vector<double> out(n);
  std::optional<std::size_t> prev;
  for (std::size_t i = 0; i < n; ++i) {
    if (!values[i]) continue;
    out[i] = *values[i];
    if (!prev) {
      for (std::size_t j = 0; j < i; ++j) out[j] = *values[i];
    } else if (i - *prev > 1) {
      const double lo = *values[*prev];
      const double hi = *values[i];
      const double span = static_cast<double>(i - *prev);
      for (std::size_t j = *prev + 1; j < i; ++j)
        out[j] = lo + (hi - lo) * static_cast<double>(j - *prev) / span;
    }
    prev = i;
  }
  if (!prev) throw Error(ErrorKind::AllMissing, "series has no observed value");
  for (std::size_t j = *prev + 1; j < n; ++j) out[j] = *values[*prev];
  return out;
}

}  // namespace netpart
