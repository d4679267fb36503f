#include "netpart/pipeline.hpp"

#include "netpart/error.hpp"
#include "netpart/parallel.hpp"

namespace netpart {

GafMatrix series_to_gaf(std::span<const double> values, std::optional<std::size_t> paa) {
  if (!paa) return encode_road_day(values);
  const auto reduced = paa_downsample(values, *paa);
  return encode_road_day(reduced);
}

FeatureTable extract_feature_table(const AutoencoderModel& model, std::span<const GafMatrix> gafs,
                                   std::size_t threads) {
  std::vector<std::vector<double>> rows(gafs.size());
  parallel_for(gafs.size(), threads,
               [&](std::size_t i) { rows[i] = extract_features(model, gafs[i]); });
  return FeatureTable::from_rows(rows);
}

std::vector<double> mean_vector(std::span<const std::vector<double>> vectors) {
  if (vectors.empty()) throw Error(ErrorKind::MissingSeries, "no vectors to average");
  std::vector<double> out(vectors.front().size(), 0.0);
  for (const auto& v : vectors) {
    if (v.size() != out.size()) throw Error(ErrorKind::LengthMismatch, "vectors differ in length");
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += v[i];
  }
  for (double& x : out) x /= static_cast<double>(vectors.size());
  return out;
}

}  // namespace netpart
