#include "netpart/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "netpart/binary_io.hpp"
#include "netpart/error.hpp"
#include "netpart/parallel.hpp"

namespace netpart {
namespace {

constexpr std::uint32_t kCheckpointVersion = 1;

void glorot_init(ConvLayer& layer, std::mt19937_64& rng) {
  const double fan_in = static_cast<double>(layer.in_channels * 9);
  const double fan_out = static_cast<double>(layer.out_channels * 9);
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& w : layer.kernels) w = dist(rng);
}

void assign_decoder_activations(std::vector<ConvLayer>& decoder) {
  for (auto& layer : decoder) layer.activation = Activation::LeakyRelu;
  if (!decoder.empty()) decoder.back().activation = Activation::Tanh;
}

void check_image(const AutoencoderModel& model, const Tensor& image) {
  if (image.shape() != std::vector<std::size_t>{1, model.input_size, model.input_size})
    throw Error(ErrorKind::ShapeMismatch,
                "model expects a {1, " + std::to_string(model.input_size) + ", " +
                    std::to_string(model.input_size) + "} image");
}

std::vector<ConvLayer*> all_layers(AutoencoderModel& model) {
  std::vector<ConvLayer*> layers;
  for (auto& l : model.encoder) layers.push_back(&l);
  for (auto& l : model.decoder) layers.push_back(&l);
  return layers;
}

std::vector<const ConvLayer*> all_layers(const AutoencoderModel& model) {
  std::vector<const ConvLayer*> layers;
  for (const auto& l : model.encoder) layers.push_back(&l);
  for (const auto& l : model.decoder) layers.push_back(&l);
  return layers;
}

ModelGradients zero_gradients(const AutoencoderModel& model) {
  ModelGradients g;
  for (const auto* layer : all_layers(model)) {
    g.kernels.emplace_back(layer->kernels.size(), 0.0);
    g.bias.emplace_back(layer->bias.size(), 0.0);
  }
  return g;
}

void accumulate(ModelGradients& into, const ModelGradients& from) {
  for (std::size_t l = 0; l < into.kernels.size(); ++l) {
    for (std::size_t i = 0; i < into.kernels[l].size(); ++i) into.kernels[l][i] += from.kernels[l][i];
    for (std::size_t i = 0; i < into.bias[l].size(); ++i) into.bias[l][i] += from.bias[l][i];
  }
  into.loss += from.loss;
}

bool parameters_finite(const AutoencoderModel& model) {
  for (const auto* layer : all_layers(model)) {
    for (double w : layer->kernels)
      if (!std::isfinite(w)) return false;
    for (double b : layer->bias)
      if (!std::isfinite(b)) return false;
  }
  return true;
}

}  // namespace

std::size_t AutoencoderModel::encoder_output_extent() const {
  std::size_t extent = input_size;
  for (const auto& layer : encoder) extent = layer.output_extent(extent);
  return extent;
}

std::size_t AutoencoderModel::encoder_output_channels() const {
  return encoder.empty() ? 1 : encoder.back().out_channels;
}

std::size_t AutoencoderModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto* layer : all_layers(*this)) n += layer->parameter_count();
  return n;
}

bool operator==(const AutoencoderModel& a, const AutoencoderModel& b) {
  auto same_layers = [](const std::vector<ConvLayer>& x, const std::vector<ConvLayer>& y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end(),
                      [](const ConvLayer& p, const ConvLayer& q) {
                        return p.in_channels == q.in_channels &&
                               p.out_channels == q.out_channels &&
                               p.direction == q.direction && p.activation == q.activation &&
                               p.kernels == q.kernels && p.bias == q.bias;
                      });
  };
  return a.input_size == b.input_size && same_layers(a.encoder, b.encoder) &&
         same_layers(a.decoder, b.decoder);
}

AutoencoderModel make_autoencoder(std::size_t input_size,
                                  std::span<const std::size_t> encoder_channels,
                                  std::uint64_t seed) {
  if (input_size == 0 || encoder_channels.empty())
    throw Error(ErrorKind::ShapeMismatch, "autoencoder needs a non-empty input and >= 1 layer");
  // The decoder doubles each extent, so every encoder stage must halve exactly.
  std::size_t extent = input_size;
  for (std::size_t i = 0; i < encoder_channels.size(); ++i) {
    if (extent % 2 != 0)
      throw Error(ErrorKind::ShapeMismatch, "input size " + std::to_string(input_size) +
                                                " cannot be halved " +
                                                std::to_string(encoder_channels.size()) + " times");
    extent /= 2;
  }

  AutoencoderModel model;
  model.input_size = input_size;
  std::mt19937_64 rng(seed);
  std::size_t in = 1;
  for (std::size_t out : encoder_channels) {
    model.encoder.emplace_back(in, out, ConvDirection::Forward, Activation::LeakyRelu);
    glorot_init(model.encoder.back(), rng);
    in = out;
  }
  for (std::size_t i = encoder_channels.size(); i-- > 0;) {
    const std::size_t out = i == 0 ? 1 : encoder_channels[i - 1];
    model.decoder.emplace_back(encoder_channels[i], out, ConvDirection::Transposed,
                               Activation::LeakyRelu);
    glorot_init(model.decoder.back(), rng);
  }
  assign_decoder_activations(model.decoder);
  return model;
}

std::size_t encoder_depth_for(std::size_t input_size) {
  std::size_t extent = input_size;
  std::size_t depth = 0;
  while (extent > kBottleneckExtent && extent % 2 == 0) {
    extent /= 2;
    ++depth;
  }
  if (extent != kBottleneckExtent || depth == 0)
    throw Error(ErrorKind::ShapeMismatch,
                "input size " + std::to_string(input_size) + " is not 9 * 2^d for d >= 1");
  return depth;
}

std::vector<std::size_t> default_channels(std::size_t depth) {
  std::vector<std::size_t> channels;
  for (std::size_t i = 0; i + 1 < depth; ++i)
    channels.push_back(std::min<std::size_t>(std::size_t{16} << i, kBottleneckChannels));
  channels.push_back(kBottleneckChannels);
  return channels;
}

AutoencoderModel make_default_autoencoder(std::size_t input_size, std::uint64_t seed) {
  const auto channels = default_channels(encoder_depth_for(input_size));
  return make_autoencoder(input_size, channels, seed);
}

Tensor to_tensor(const GafMatrix& gaf) {
  return Tensor({1, gaf.size(), gaf.size()}, {gaf.data().begin(), gaf.data().end()});
}

Tensor encode(const AutoencoderModel& model, const Tensor& image) {
  check_image(model, image);
  Tensor x = image;
  for (const auto& layer : model.encoder) x = conv_forward(layer, x);
  return x;
}

Tensor reconstruct(const AutoencoderModel& model, const Tensor& image) {
  Tensor x = encode(model, image);
  for (const auto& layer : model.decoder) x = conv_forward(layer, x);
  return x;
}

double reconstruction_loss(const AutoencoderModel& model, std::span<const Tensor> batch) {
  double total = 0.0;
  for (const auto& image : batch) {
    const Tensor out = reconstruct(model, image);
    for (std::size_t i = 0; i < image.size(); ++i) {
      const double d = image[i] - out[i];
      total += d * d;
    }
  }
  return total;
}

std::vector<double> channel_mean(const Tensor& encoded) {
  if (encoded.shape().size() != 3)
    throw Error(ErrorKind::ShapeMismatch, "channel_mean expects a {C, H, W} tensor");
  const std::size_t channels = encoded.dim(0);
  const std::size_t plane = encoded.dim(1) * encoded.dim(2);
  std::vector<double> out(plane, 0.0);
  for (std::size_t c = 0; c < channels; ++c)
    for (std::size_t i = 0; i < plane; ++i) out[i] += encoded[c * plane + i];
  for (double& v : out) v /= static_cast<double>(channels);
  return out;
}

std::vector<double> extract_features(const AutoencoderModel& model, const GafMatrix& gaf) {
  if (gaf.size() != model.input_size)
    throw Error(ErrorKind::ShapeMismatch, "GAF is " + std::to_string(gaf.size()) +
                                              " wide, model expects " +
                                              std::to_string(model.input_size));
  return channel_mean(encode(model, to_tensor(gaf)));
}

ModelGradients loss_gradient(const AutoencoderModel& model, const Tensor& image) {
  check_image(model, image);
  const auto layers = all_layers(model);
  std::vector<Tensor> activations;
  activations.reserve(layers.size() + 1);
  activations.push_back(image);
  for (const auto* layer : layers) activations.push_back(conv_forward(*layer, activations.back()));

  const Tensor& out = activations.back();
  Tensor upstream(out.shape());
  ModelGradients grads;
  grads.kernels.resize(layers.size());
  grads.bias.resize(layers.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d = out[i] - image[i];
    grads.loss += d * d;
    upstream[i] = 2.0 * d;
  }
  for (std::size_t l = layers.size(); l-- > 0;) {
    ConvGradients g = conv_backward(*layers[l], activations[l], activations[l + 1], upstream);
    grads.kernels[l] = std::move(g.kernels);
    grads.bias[l] = std::move(g.bias);
    upstream = std::move(g.input);
  }
  return grads;
}

TrainResult train(AutoencoderModel model, std::span<const Tensor> dataset,
                  const TrainConfig& config) {
  if (dataset.empty()) throw Error(ErrorKind::ShapeMismatch, "training set is empty");
  for (const auto& image : dataset) check_image(model, image);
  const std::size_t batch_size = std::max<std::size_t>(1, config.batch_size);

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  ModelGradients velocity = zero_gradients(model);
  std::vector<double> sample_loss(dataset.size(), 0.0);
  TrainResult result;
  result.loss_trace.reserve(config.epochs);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t count = std::min(batch_size, order.size() - start);
      std::vector<ModelGradients> per_example(count);
      parallel_for(count, config.threads, [&](std::size_t i) {
        per_example[i] = loss_gradient(model, dataset[order[start + i]]);
      });
      ModelGradients total = zero_gradients(model);
      for (std::size_t i = 0; i < count; ++i) {
        accumulate(total, per_example[i]);
        sample_loss[order[start + i]] = per_example[i].loss;
      }
      if (!std::isfinite(total.loss))
        throw Error(ErrorKind::NonFiniteLoss, "loss diverged in epoch " + std::to_string(epoch + 1));

      const double step = config.learning_rate / static_cast<double>(count);
      const auto layers = all_layers(model);
      for (std::size_t l = 0; l < layers.size(); ++l) {
        auto update = [&](std::vector<double>& params, std::vector<double>& vel,
                          const std::vector<double>& grad) {
          for (std::size_t i = 0; i < params.size(); ++i) {
            vel[i] = config.momentum * vel[i] - step * grad[i];
            params[i] += vel[i];
          }
        };
        update(layers[l]->kernels, velocity.kernels[l], total.kernels[l]);
        update(layers[l]->bias, velocity.bias[l], total.bias[l]);
      }
      if (!parameters_finite(model))
        throw Error(ErrorKind::NonFiniteLoss,
                    "parameters became non-finite in epoch " + std::to_string(epoch + 1));
    }
    double epoch_loss = 0.0;
    for (double v : sample_loss) epoch_loss += v;
    result.loss_trace.push_back(epoch_loss);
  }
  result.model = std::move(model);
  return result;
}

void save_model(std::ostream& out, const AutoencoderModel& model) {
  out.write("NPAE", 4);
  binio::put_u32(out, kCheckpointVersion);
  binio::put_u32(out, static_cast<std::uint32_t>(model.input_size));
  const auto layers = all_layers(model);
  binio::put_u32(out, static_cast<std::uint32_t>(layers.size()));
  for (const auto* layer : layers) {
    binio::put_u32(out, static_cast<std::uint32_t>(layer->in_channels));
    binio::put_u32(out, static_cast<std::uint32_t>(layer->out_channels));
    binio::put_u8(out, static_cast<std::uint8_t>(layer->direction));
    for (double w : layer->kernels) binio::put_f64(out, w);
    for (double b : layer->bias) binio::put_f64(out, b);
  }
}

AutoencoderModel load_model(std::istream& in) {
  binio::expect_magic(in, "NPAE");
  const std::uint32_t version = binio::get_u32(in);
  if (version != kCheckpointVersion)
    throw Error(ErrorKind::Format, "unsupported checkpoint version " + std::to_string(version));
  AutoencoderModel model;
  model.input_size = binio::get_u32(in);
  const std::uint32_t layer_count = binio::get_u32(in);
  for (std::uint32_t l = 0; l < layer_count; ++l) {
    const std::uint32_t in_ch = binio::get_u32(in);
    const std::uint32_t out_ch = binio::get_u32(in);
    const std::uint8_t dir = binio::get_u8(in);
    if (dir > 1) throw Error(ErrorKind::Format, "bad layer direction " + std::to_string(dir));
    ConvLayer layer(in_ch, out_ch, static_cast<ConvDirection>(dir), Activation::LeakyRelu);
    for (double& w : layer.kernels) w = binio::get_f64(in);
    for (double& b : layer.bias) b = binio::get_f64(in);
    if (layer.direction == ConvDirection::Forward) {
      if (!model.decoder.empty())
        throw Error(ErrorKind::Format, "forward layer after a transposed layer");
      model.encoder.push_back(std::move(layer));
    } else {
      model.decoder.push_back(std::move(layer));
    }
  }
  assign_decoder_activations(model.decoder);
  return model;
}

}  // namespace netpart
