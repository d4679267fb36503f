#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "netpart/conv.hpp"
#include "netpart/gaf.hpp"
#include "netpart/tensor.hpp"

namespace netpart {

/// Spatial extent of the encoder bottleneck for the default architecture.
inline constexpr std::size_t kBottleneckExtent = 9;
inline constexpr std::size_t kBottleneckChannels = 128;

/// Convolutional autoencoder over single-channel n x n images. The encoder is
/// a chain of stride-2 forward convolutions; the decoder mirrors it with
/// transposed convolutions and ends in tanh.
struct AutoencoderModel {
  std::size_t input_size = 0;
  std::vector<ConvLayer> encoder;
  std::vector<ConvLayer> decoder;

  std::size_t encoder_output_extent() const;
  std::size_t encoder_output_channels() const;
  std::size_t parameter_count() const;

  friend bool operator==(const AutoencoderModel& a, const AutoencoderModel& b);
};

/// Builds an encoder with the given widths and its mirrored decoder. Weights
/// are Glorot-uniform from `seed`, biases zero.
AutoencoderModel make_autoencoder(std::size_t input_size,
                                  std::span<const std::size_t> encoder_channels,
                                  std::uint64_t seed);

/// Number of halvings taking `input_size` to the 9x9 bottleneck
/// (288 -> 5, 72 -> 3). Throws ShapeMismatch if no such depth exists.
std::size_t encoder_depth_for(std::size_t input_size);

/// Width ramp 16, 32, 64, ... capped at 128, with the last layer 128.
std::vector<std::size_t> default_channels(std::size_t depth);

AutoencoderModel make_default_autoencoder(std::size_t input_size, std::uint64_t seed);

/// Wraps a GAF as a {1, n, n} tensor.
Tensor to_tensor(const GafMatrix& gaf);

Tensor encode(const AutoencoderModel& model, const Tensor& image);
Tensor reconstruct(const AutoencoderModel& model, const Tensor& image);

/// Sum over the batch of squared reconstruction error.
double reconstruction_loss(const AutoencoderModel& model, std::span<const Tensor> batch);

/// Mean over the channel axis of a {C, H, W} tensor, flattened row-major.
std::vector<double> channel_mean(const Tensor& encoded);

/// Encoder-only path: channel mean of the bottleneck, length extent^2.
std::vector<double> extract_features(const AutoencoderModel& model, const GafMatrix& gaf);

/// Per-layer gradients, encoder layers first then decoder layers.
struct ModelGradients {
  std::vector<std::vector<double>> kernels;
  std::vector<std::vector<double>> bias;
  double loss = 0.0;
};

/// Squared reconstruction error of one image and its gradient w.r.t. every
/// parameter.
ModelGradients loss_gradient(const AutoencoderModel& model, const Tensor& image);

struct TrainConfig {
  std::size_t epochs = 200;
  std::size_t batch_size = 4;
  double learning_rate = 1e-4;
  double momentum = 0.9;
  std::uint64_t seed = 42;
  std::size_t threads = 1;
};

struct TrainResult {
  AutoencoderModel model;
  /// Loss of every epoch: per-example losses observed during the epoch,
  /// summed in dataset order.
  std::vector<double> loss_trace;
};

/// Mini-batch gradient descent with momentum on the summed squared
/// reconstruction error. The step uses the batch-mean gradient. Throws
/// NonFiniteLoss naming the epoch when training diverges.
TrainResult train(AutoencoderModel model, std::span<const Tensor> dataset,
                  const TrainConfig& config);

/// Checkpoint: "NPAE", u32 version, u32 input_size, u32 layer_count, then per
/// layer {u32 in_ch, u32 out_ch, u8 direction, f64 kernels..., f64 biases...}.
void save_model(std::ostream& out, const AutoencoderModel& model);
AutoencoderModel load_model(std::istream& in);

}  // namespace netpart
