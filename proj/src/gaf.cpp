#include "netpart/gaf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netpart/binary_io.hpp"
#include "netpart/error.hpp"

namespace netpart {

NormalizedSeries normalize_series(std::span<const double> values) {
  if (values.size() < 2)
    throw Error(ErrorKind::TooShort, "series needs at least 2 values, got " +
                                         std::to_string(values.size()));
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) throw Error(ErrorKind::ConstantSeries, "max(V) == min(V)");

  NormalizedSeries out;
  out.source_min = lo;
  out.source_max = hi;
  out.values.reserve(values.size());
  const double range = hi - lo;
  for (double v : values) {
    const double scaled = ((v - hi) + (v - lo)) / range;
    out.values.push_back(std::clamp(scaled, -1.0, 1.0));
  }
  return out;
}

PolarSeries to_polar(const NormalizedSeries& norm, std::optional<double> span_constant) {
  PolarSeries polar;
  const std::size_t n = norm.values.size();
  polar.span_constant = span_constant.value_or(static_cast<double>(n));
  polar.angles.reserve(n);
  polar.radii.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    polar.angles.push_back(std::acos(norm.values[i]));
    polar.radii.push_back(static_cast<double>(i + 1) / polar.span_constant);
  }
  return polar;
}

GafMatrix gaf_from_polar(const PolarSeries& polar) {
  const std::size_t n = polar.angles.size();
  std::vector<double> c(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = std::cos(polar.angles[i]);
    // 1 - v^2 can dip a hair below zero at v = +-1.
    s[i] = std::sqrt(std::max(0.0, 1.0 - c[i] * c[i]));
  }
  GafMatrix g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double value = c[i] * c[j] - s[i] * s[j];
      g(i, j) = value;
      g(j, i) = value;
    }
  }
  return g;
}

GafMatrix encode_road_day(std::span<const double> values) {
  return gaf_from_polar(to_polar(normalize_series(values)));
}

std::vector<double> paa_downsample(std::span<const double> values, std::size_t target_length) {
  if (target_length == 0 || values.size() % target_length != 0)
    throw Error(ErrorKind::NotDivisible, "target length " + std::to_string(target_length) +
                                             " does not divide " + std::to_string(values.size()));
  const std::size_t block = values.size() / target_length;
  std::vector<double> out(target_length);
  for (std::size_t b = 0; b < target_length; ++b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < block; ++i) sum += values[b * block + i];
    out[b] = sum / static_cast<double>(block);
  }
  return out;
}

void write_gaf(std::ostream& out, const GafMatrix& gaf) {
  out.write("GAF1", 4);
  binio::put_u32(out, static_cast<std::uint32_t>(gaf.size()));
  for (double v : gaf.data()) binio::put_f64(out, v);
}

GafMatrix read_gaf(std::istream& in) {
  binio::expect_magic(in, "GAF1");
  const std::uint32_t n = binio::get_u32(in);
  GafMatrix g(n);
  for (double& v : g.data()) v = binio::get_f64(in);
  return g;
}

}  // namespace netpart
