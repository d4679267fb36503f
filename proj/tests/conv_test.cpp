#include <gtest/gtest.h>

#include <random>

#include "netpart/conv.hpp"
#include "netpart/error.hpp"
#include "oracles.hpp"

namespace netpart {
namespace {

Tensor random_tensor(std::vector<std::size_t> shape, std::mt19937_64& rng) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : t.data()) v = u(rng);
  return t;
}

ConvLayer random_layer(std::size_t in, std::size_t out, ConvDirection dir, Activation act,
                       std::mt19937_64& rng) {
  ConvLayer layer(in, out, dir, act);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (double& w : layer.kernels) w = u(rng);
  for (double& b : layer.bias) b = u(rng);
  return layer;
}

TEST(ConvForward, ZeroKernelGivesBias) {
  ConvLayer layer(1, 1, ConvDirection::Forward, Activation::Identity);
  layer.bias[0] = 0.5;
  const Tensor out = conv_forward(layer, Tensor({1, 1, 1}, 3.0));
  ASSERT_EQ(out.shape(), (std::vector<std::size_t>{1, 1, 1}));
  EXPECT_EQ(out[0], 0.5);
}

TEST(ConvForward, TwoByTwoOnesUnderOnesKernel) {
  // Padding for 2 -> 1 is one cell on the bottom/right, so the single kernel
  // placement covers rows/cols 0..2 and sees the four real cells.
  ConvLayer layer(1, 1, ConvDirection::Forward, Activation::Identity);
  std::fill(layer.kernels.begin(), layer.kernels.end(), 1.0);
  const Tensor out = conv_forward(layer, Tensor({1, 2, 2}, 1.0));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], 4.0);
}

TEST(ConvForward, PaddingConventionOddInput) {
  // 3x3 input -> 2x2 output with one padding cell on each side; output (0,0)
  // sees input rows/cols 0..1 at kernel taps 1..2.
  ConvLayer layer(1, 1, ConvDirection::Forward, Activation::Identity);
  layer.kernel(0, 0, 2, 2) = 1.0;  // picks input (2*oy + 1, 2*ox + 1)
  Tensor in({1, 3, 3});
  for (std::size_t i = 0; i < 9; ++i) in[i] = static_cast<double>(i);
  const Tensor out = conv_forward(layer, in);
  ASSERT_EQ(out.shape(), (std::vector<std::size_t>{1, 2, 2}));
  EXPECT_EQ(out.at(0, 0, 0), 4.0);
  EXPECT_EQ(out.at(0, 0, 1), 0.0);  // column 3 is padding
}

TEST(ConvForward, OutputExtents) {
  ConvLayer fwd(1, 1, ConvDirection::Forward, Activation::Identity);
  ConvLayer up(1, 1, ConvDirection::Transposed, Activation::Identity);
  EXPECT_EQ(fwd.output_extent(288), 144u);
  EXPECT_EQ(fwd.output_extent(9), 5u);
  EXPECT_EQ(up.output_extent(9), 18u);
  EXPECT_EQ(conv_forward(up, Tensor({1, 3, 5})).shape(), (std::vector<std::size_t>{1, 6, 10}));
}

TEST(ConvForward, ShapeMismatch) {
  ConvLayer layer(2, 1, ConvDirection::Forward, Activation::Identity);
  try {
    conv_forward(layer, Tensor({1, 4, 4}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ShapeMismatch);
  }
  EXPECT_THROW(conv_backward(layer, Tensor({2, 4, 4}), Tensor({1, 3, 3})), Error);
}

TEST(ConvForward, TransposedIsAdjointOfForward) {
  // <conv(x), y> == <conv^T(y), x> for matching kernels with no bias.
  std::mt19937_64 rng(9);
  ConvLayer fwd = random_layer(2, 3, ConvDirection::Forward, Activation::Identity, rng);
  std::fill(fwd.bias.begin(), fwd.bias.end(), 0.0);
  ConvLayer up(3, 2, ConvDirection::Transposed, Activation::Identity);
  for (std::size_t o = 0; o < 3; ++o)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t ky = 0; ky < 3; ++ky)
        for (std::size_t kx = 0; kx < 3; ++kx) up.kernel(i, o, ky, kx) = fwd.kernel(o, i, ky, kx);
  const Tensor x = random_tensor({2, 8, 8}, rng);
  const Tensor y = random_tensor({3, 4, 4}, rng);
  const Tensor fx = conv_forward(fwd, x);
  const Tensor uy = conv_forward(up, y);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < fx.size(); ++i) lhs += fx[i] * y[i];
  for (std::size_t i = 0; i < uy.size(); ++i) rhs += uy[i] * x[i];
  EXPECT_NEAR(lhs, rhs, 1e-12);
}

TEST(ConvBackward, ZeroUpstreamGivesZeroGradients) {
  std::mt19937_64 rng(1);
  const ConvLayer layer = random_layer(2, 3, ConvDirection::Forward, Activation::LeakyRelu, rng);
  const Tensor x = random_tensor({2, 5, 5}, rng);
  const auto g = conv_backward(layer, x, Tensor({3, 3, 3}));
  for (double v : g.input.data()) EXPECT_EQ(v, 0.0);
  for (double v : g.kernels) EXPECT_EQ(v, 0.0);
  for (double v : g.bias) EXPECT_EQ(v, 0.0);
}

TEST(ConvBackward, BiasGradientIsUpstreamChannelSum) {
  std::mt19937_64 rng(2);
  for (auto dir : {ConvDirection::Forward, ConvDirection::Transposed}) {
    const ConvLayer layer = random_layer(2, 3, dir, Activation::Identity, rng);
    const Tensor x = random_tensor({2, 4, 4}, rng);
    const Tensor y = conv_forward(layer, x);
    const Tensor up = random_tensor(y.shape(), rng);
    const auto g = conv_backward(layer, x, up);
    const std::size_t plane = up.size() / 3;
    for (std::size_t c = 0; c < 3; ++c) {
      double sum = 0.0;
      for (std::size_t i = 0; i < plane; ++i) sum += up[c * plane + i];
      EXPECT_NEAR(g.bias[c], sum, 1e-12);
    }
  }
}

// Every parameter and input gradient against central differences of
// L = <conv(x), R> for a random projection R.
void finite_difference_check(ConvDirection dir, Activation act, std::size_t extent,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ConvLayer layer = random_layer(2, 3, dir, act, rng);
  Tensor x = random_tensor({2, extent, extent}, rng);
  const Tensor proj = random_tensor(conv_forward(layer, x).shape(), rng);
  auto loss = [&] {
    const Tensor y = conv_forward(layer, x);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * proj[i];
    return s;
  };
  const auto g = conv_backward(layer, x, proj);
  for (std::size_t i = 0; i < layer.kernels.size(); ++i)
    EXPECT_LE(oracle::relative_error(g.kernels[i], oracle::central_difference(layer.kernels[i], loss)), 1e-4)
        << "kernel " << i;
  for (std::size_t i = 0; i < layer.bias.size(); ++i)
    EXPECT_LE(oracle::relative_error(g.bias[i], oracle::central_difference(layer.bias[i], loss)), 1e-4)
        << "bias " << i;
  for (std::size_t i = 0; i < x.size(); ++i)
    EXPECT_LE(oracle::relative_error(g.input[i], oracle::central_difference(x[i], loss)), 1e-4)
        << "input " << i;
}

TEST(ConvBackward, FiniteDifferencesForward) {
  finite_difference_check(ConvDirection::Forward, Activation::Identity, 6, 10);
  finite_difference_check(ConvDirection::Forward, Activation::LeakyRelu, 6, 11);
  finite_difference_check(ConvDirection::Forward, Activation::Tanh, 5, 12);
}

TEST(ConvBackward, FiniteDifferencesTransposed) {
  finite_difference_check(ConvDirection::Transposed, Activation::Identity, 3, 20);
  finite_difference_check(ConvDirection::Transposed, Activation::LeakyRelu, 3, 21);
  finite_difference_check(ConvDirection::Transposed, Activation::Tanh, 4, 22);
}

}  // namespace
}  // namespace netpart
