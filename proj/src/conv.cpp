#include "netpart/conv.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <string>

#include "netpart/error.hpp"

namespace netpart {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using MutMap = Eigen::Map<RowMat>;

constexpr std::size_t kTaps = ConvLayer::kKernel * ConvLayer::kKernel;

// Index mapping shared by both directions: the "small" grid position o and
// kernel tap k touch the "big" grid position 2*o + k - pad.
struct Geometry {
  std::size_t big_h, big_w, small_h, small_w, pad_top, pad_left;

  static Geometry make(std::size_t big_h, std::size_t big_w, std::size_t small_h,
                       std::size_t small_w) {
    auto pad_before = [](std::size_t big, std::size_t small) -> std::size_t {
      const long long total = static_cast<long long>((small - 1) * ConvLayer::kStride +
                                                     ConvLayer::kKernel) -
                              static_cast<long long>(big);
      return total > 0 ? static_cast<std::size_t>(total / 2) : 0;
    };
    return {big_h, big_w, small_h, small_w, pad_before(big_h, small_h),
            pad_before(big_w, small_w)};
  }

  std::size_t small_area() const { return small_h * small_w; }
};

// big {channels, H, W} -> columns (channels*9) x (small_h*small_w)
RowMat im2col(std::span<const double> big, std::size_t channels, const Geometry& g) {
  RowMat cols = RowMat::Zero(static_cast<Eigen::Index>(channels * kTaps),
                             static_cast<Eigen::Index>(g.small_area()));
  for (std::size_t c = 0; c < channels; ++c) {
    const double* plane = big.data() + c * g.big_h * g.big_w;
    for (std::size_t ky = 0; ky < ConvLayer::kKernel; ++ky) {
      for (std::size_t kx = 0; kx < ConvLayer::kKernel; ++kx) {
        double* row = cols.row(static_cast<Eigen::Index>(c * kTaps + ky * 3 + kx)).data();
        for (std::size_t oy = 0; oy < g.small_h; ++oy) {
          const long long iy = static_cast<long long>(2 * oy + ky) - static_cast<long long>(g.pad_top);
          if (iy < 0 || iy >= static_cast<long long>(g.big_h)) continue;
          const double* src = plane + static_cast<std::size_t>(iy) * g.big_w;
          double* dst = row + oy * g.small_w;
          for (std::size_t ox = 0; ox < g.small_w; ++ox) {
            const long long ix =
                static_cast<long long>(2 * ox + kx) - static_cast<long long>(g.pad_left);
            if (ix >= 0 && ix < static_cast<long long>(g.big_w)) dst[ox] = src[ix];
          }
        }
      }
    }
  }
  return cols;
}

// Adjoint of im2col: scatter-add columns back onto the big grid.
void col2im(const RowMat& cols, std::size_t channels, const Geometry& g, std::span<double> big) {
  std::fill(big.begin(), big.end(), 0.0);
  for (std::size_t c = 0; c < channels; ++c) {
    double* plane = big.data() + c * g.big_h * g.big_w;
    for (std::size_t ky = 0; ky < ConvLayer::kKernel; ++ky) {
      for (std::size_t kx = 0; kx < ConvLayer::kKernel; ++kx) {
        const double* row = cols.row(static_cast<Eigen::Index>(c * kTaps + ky * 3 + kx)).data();
        for (std::size_t oy = 0; oy < g.small_h; ++oy) {
          const long long iy = static_cast<long long>(2 * oy + ky) - static_cast<long long>(g.pad_top);
          if (iy < 0 || iy >= static_cast<long long>(g.big_h)) continue;
          double* dst = plane + static_cast<std::size_t>(iy) * g.big_w;
          const double* src = row + oy * g.small_w;
          for (std::size_t ox = 0; ox < g.small_w; ++ox) {
            const long long ix =
                static_cast<long long>(2 * ox + kx) - static_cast<long long>(g.pad_left);
            if (ix >= 0 && ix < static_cast<long long>(g.big_w)) dst[ix] += src[ox];
          }
        }
      }
    }
  }
}

// Transposed layers multiply by a (out*9) x in matrix; kernels are stored
// out x in x 3 x 3, so permute.
RowMat transposed_kernel_matrix(const ConvLayer& layer) {
  RowMat k(static_cast<Eigen::Index>(layer.out_channels * kTaps),
           static_cast<Eigen::Index>(layer.in_channels));
  for (std::size_t o = 0; o < layer.out_channels; ++o)
    for (std::size_t i = 0; i < layer.in_channels; ++i)
      for (std::size_t t = 0; t < kTaps; ++t)
        k(static_cast<Eigen::Index>(o * kTaps + t), static_cast<Eigen::Index>(i)) =
            layer.kernels[(o * layer.in_channels + i) * kTaps + t];
  return k;
}

void check_input(const ConvLayer& layer, const Tensor& input) {
  if (input.shape().size() != 3 || input.dim(0) != layer.in_channels || input.dim(1) == 0 ||
      input.dim(2) == 0)
    throw Error(ErrorKind::ShapeMismatch,
                "conv layer expects {" + std::to_string(layer.in_channels) +
                    ", H, W} input with H, W >= 1");
}

Geometry geometry_for(const ConvLayer& layer, const Tensor& input) {
  const std::size_t h = input.dim(1);
  const std::size_t w = input.dim(2);
  if (layer.direction == ConvDirection::Forward)
    return Geometry::make(h, w, layer.output_extent(h), layer.output_extent(w));
  return Geometry::make(layer.output_extent(h), layer.output_extent(w), h, w);
}

void activate(Activation act, std::span<double> values) {
  switch (act) {
    case Activation::Identity: break;
    case Activation::LeakyRelu:
      for (double& v : values) v = v > 0.0 ? v : kLeakySlope * v;
      break;
    case Activation::Tanh:
      for (double& v : values) v = std::tanh(v);
      break;
  }
}

}  // namespace

ConvLayer::ConvLayer(std::size_t in, std::size_t out, ConvDirection dir, Activation act)
    : in_channels(in),
      out_channels(out),
      direction(dir),
      activation(act),
      kernels(out * in * kTaps, 0.0),
      bias(out, 0.0) {}

std::size_t ConvLayer::output_extent(std::size_t input_extent) const {
  return direction == ConvDirection::Forward ? (input_extent + 1) / 2 : 2 * input_extent;
}

Tensor conv_forward(const ConvLayer& layer, const Tensor& input) {
  check_input(layer, input);
  const Geometry g = geometry_for(layer, input);
  const auto out_ch = static_cast<Eigen::Index>(layer.out_channels);
  const auto in_ch = static_cast<Eigen::Index>(layer.in_channels);

  Tensor output;
  if (layer.direction == ConvDirection::Forward) {
    output = Tensor({layer.out_channels, g.small_h, g.small_w});
    const RowMat cols = im2col(input.data(), layer.in_channels, g);
    MutMap y(output.data().data(), out_ch, static_cast<Eigen::Index>(g.small_area()));
    y.noalias() = ConstMap(layer.kernels.data(), out_ch, in_ch * kTaps) * cols;
  } else {
    output = Tensor({layer.out_channels, g.big_h, g.big_w});
    ConstMap x(input.data().data(), in_ch, static_cast<Eigen::Index>(g.small_area()));
    const RowMat cols = transposed_kernel_matrix(layer) * x;
    col2im(cols, layer.out_channels, g, output.data());
  }
  const std::size_t plane = output.size() / layer.out_channels;
  for (std::size_t c = 0; c < layer.out_channels; ++c)
    for (std::size_t i = 0; i < plane; ++i) output[c * plane + i] += layer.bias[c];
  activate(layer.activation, output.data());
  return output;
}

ConvGradients conv_backward(const ConvLayer& layer, const Tensor& input, const Tensor& output,
                            const Tensor& upstream) {
  check_input(layer, input);
  if (upstream.shape() != output.shape())
    throw Error(ErrorKind::ShapeMismatch, "upstream gradient shape differs from layer output");
  const Geometry g = geometry_for(layer, input);
  const auto out_ch = static_cast<Eigen::Index>(layer.out_channels);
  const auto in_ch = static_cast<Eigen::Index>(layer.in_channels);

  // Gradient w.r.t. the pre-activation, expressed through the output.
  Tensor pre(upstream.shape());
  for (std::size_t i = 0; i < pre.size(); ++i) {
    const double y = output[i];
    double slope = 1.0;
    if (layer.activation == Activation::LeakyRelu) slope = y > 0.0 ? 1.0 : kLeakySlope;
    if (layer.activation == Activation::Tanh) slope = 1.0 - y * y;
    pre[i] = upstream[i] * slope;
  }

  ConvGradients grads;
  grads.input = Tensor(input.shape());
  grads.kernels.assign(layer.kernels.size(), 0.0);
  grads.bias.assign(layer.out_channels, 0.0);

  const std::size_t plane = pre.size() / layer.out_channels;
  for (std::size_t c = 0; c < layer.out_channels; ++c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < plane; ++i) sum += pre[c * plane + i];
    grads.bias[c] = sum;
  }

  if (layer.direction == ConvDirection::Forward) {
    const RowMat cols = im2col(input.data(), layer.in_channels, g);
    ConstMap dz(pre.data().data(), out_ch, static_cast<Eigen::Index>(g.small_area()));
    MutMap dw(grads.kernels.data(), out_ch, in_ch * kTaps);
    dw.noalias() = dz * cols.transpose();
    const RowMat dcols = ConstMap(layer.kernels.data(), out_ch, in_ch * kTaps).transpose() * dz;
    col2im(dcols, layer.in_channels, g, grads.input.data());
  } else {
    const RowMat dcols = im2col(pre.data(), layer.out_channels, g);
    ConstMap x(input.data().data(), in_ch, static_cast<Eigen::Index>(g.small_area()));
    MutMap dx(grads.input.data().data(), in_ch, static_cast<Eigen::Index>(g.small_area()));
    dx.noalias() = transposed_kernel_matrix(layer).transpose() * dcols;
    const RowMat dk = dcols * x.transpose();
    for (std::size_t o = 0; o < layer.out_channels; ++o)
      for (std::size_t i = 0; i < layer.in_channels; ++i)
        for (std::size_t t = 0; t < kTaps; ++t)
          grads.kernels[(o * layer.in_channels + i) * kTaps + t] =
              dk(static_cast<Eigen::Index>(o * kTaps + t), static_cast<Eigen::Index>(i));
  }
  return grads;
}

ConvGradients conv_backward(const ConvLayer& layer, const Tensor& input, const Tensor& upstream) {
  return conv_backward(layer, input, conv_forward(layer, input), upstream);
}

}  // namespace netpart
