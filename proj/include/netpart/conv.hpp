#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "netpart/tensor.hpp"

namespace netpart {

enum class Activation : std::uint8_t { Identity, LeakyRelu, Tanh };

inline constexpr double kLeakySlope = 0.01;

enum class ConvDirection : std::uint8_t { Forward = 0, Transposed = 1 };

/// 3x3, stride-2 convolution. Forward layers map H -> ceil(H/2) with "same"
/// zero padding (the odd padding cell goes bottom/right). Transposed layers
/// are the adjoint of a forward layer mapping 2H -> H, so they map H -> 2H.
///
/// Kernels are stored out_channels x in_channels x 3 x 3 for both directions.
struct ConvLayer {
  static constexpr std::size_t kKernel = 3;
  static constexpr std::size_t kStride = 2;

  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  ConvDirection direction = ConvDirection::Forward;
  Activation activation = Activation::Identity;
  std::vector<double> kernels;
  std::vector<double> bias;

  ConvLayer() = default;
  ConvLayer(std::size_t in, std::size_t out, ConvDirection dir, Activation act);

  std::size_t output_extent(std::size_t input_extent) const;
  std::size_t parameter_count() const { return kernels.size() + bias.size(); }
  double& kernel(std::size_t out, std::size_t in, std::size_t ky, std::size_t kx) {
    return kernels[((out * in_channels + in) * kKernel + ky) * kKernel + kx];
  }
  double kernel(std::size_t out, std::size_t in, std::size_t ky, std::size_t kx) const {
    return kernels[((out * in_channels + in) * kKernel + ky) * kKernel + kx];
  }
};

struct ConvGradients {
  Tensor input;
  std::vector<double> kernels;
  std::vector<double> bias;
};

/// Convolution, plus bias, plus activation. Input is {in_channels, H, W}.
Tensor conv_forward(const ConvLayer& layer, const Tensor& input);

/// Exact gradients of conv_forward given dLoss/dOutput. `output` must be the
/// result of conv_forward(layer, input).
ConvGradients conv_backward(const ConvLayer& layer, const Tensor& input, const Tensor& output,
                            const Tensor& upstream);

/// Recomputes the forward pass internally.
ConvGradients conv_backward(const ConvLayer& layer, const Tensor& input,
                            const Tensor& upstream);

}  // namespace netpart
