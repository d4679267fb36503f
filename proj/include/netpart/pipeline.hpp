#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "netpart/autoencoder.hpp"
#include "netpart/clustering.hpp"
#include "netpart/gaf.hpp"
#include "netpart/ingest.hpp"

namespace netpart {

/// Optional PAA then GAF encoding of one daily series.
GafMatrix series_to_gaf(std::span<const double> values, std::optional<std::size_t> paa = {});

/// Encoder features for many GAF images, computed in parallel; row i belongs
/// to image i.
FeatureTable extract_feature_table(const AutoencoderModel& model, std::span<const GafMatrix> gafs,
                                   std::size_t threads = 1);

/// Element-wise mean of equal-length vectors.
std::vector<double> mean_vector(std::span<const std::vector<double>> vectors);

}  // namespace netpart
