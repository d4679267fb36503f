#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace netpart {

/// Series rescaled to [-1, 1] by min-max normalisation.
struct NormalizedSeries {
  std::vector<double> values;
  double source_min = 0.0;
  double source_max = 0.0;
};

/// Polar form of a normalised series: angle arccos(v_i) and radius t_i / N
/// with t_i the 1-based slot index.
struct PolarSeries {
  std::vector<double> angles;
  std::vector<double> radii;
  double span_constant = 1.0;
};

/// Symmetric n x n Gramian Angular (summation) Field, row-major.
class GafMatrix {
 public:
  GafMatrix() = default;
  explicit GafMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  friend bool operator==(const GafMatrix&, const GafMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

NormalizedSeries normalize_series(std::span<const double> values);

/// `span_constant` defaults to the series length so radii lie in (0, 1].
PolarSeries to_polar(const NormalizedSeries& norm,
                     std::optional<double> span_constant = std::nullopt);

/// G = V'V - sqrt(I - V^2)' sqrt(I - V^2) with V = cos(angles). The upper
/// triangle is computed and mirrored, so the result is exactly symmetric.
GafMatrix gaf_from_polar(const PolarSeries& polar);

/// normalize -> polar -> field.
GafMatrix encode_road_day(std::span<const double> values);

/// Piecewise aggregate approximation: block means of length
/// values.size() / target_length.
std::vector<double> paa_downsample(std::span<const double> values, std::size_t target_length);

/// Binary dump: "GAF1", u32 n, then n*n little-endian float64 row-major.
void write_gaf(std::ostream& out, const GafMatrix& gaf);
GafMatrix read_gaf(std::istream& in);

}  // namespace netpart
