#include "rnnd/nn/network.h"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>

#include "rnnd/simd/kernels.h"

namespace rnnd::nn {
namespace {

inline float sigmoid(float x) { return 1.f / (1.f + std::exp(-x)); }

// W x scaled by the tensor's dequantization factor, plus the bias, row by row.
void affine(const QuantizedTensor& weights, const QuantizedTensor& bias,
            std::span<const float> x, std::span<float> out) {
  const auto dot = simd::active_kernels().dot_i8_f32;
  for (std::size_t i = 0; i < weights.rows; ++i) {
    out[i] = weights.scale * dot(weights.row(i), x.data(), weights.cols) +
             bias.dequantized(i);
  }
}

void accumulate(const QuantizedTensor& weights, std::span<const float> x,
                std::span<float> out) {
  const auto dot = simd::active_kernels().dot_i8_f32;
  for (std::size_t i = 0; i < weights.rows; ++i) {
    out[i] += weights.scale * dot(weights.row(i), x.data(), weights.cols);
  }
}

}  // namespace

float apply_activation(Activation activation, float x) {
  switch (activation) {
    case Activation::kTanh:
      return std::tanh(x);
    case Activation::kSigmoid:
      return sigmoid(x);
    case Activation::kRelu:
      return std::max(x, 0.f);
  }
  return x;
}

std::size_t dense_forward(const DenseLayer& layer, std::span<const float> input,
                          std::span<float> output) {
  assert(input.size() == layer.spec.input_size);
  assert(output.size() == layer.spec.output_size);
  affine(layer.weights, layer.bias, input, output);
  for (float& v : output) v = apply_activation(layer.spec.activation, v);
  return layer.spec.input_size * layer.spec.output_size;
}

std::size_t gru_forward(const GruLayer& layer, std::span<float> state,
                        std::span<const float> input) {
  const std::size_t n = layer.spec.output_size;
  assert(state.size() == n);
  assert(input.size() == layer.spec.input_size);
  assert(n <= kMaxLayerUnits);

  std::array<float, kMaxLayerUnits> z_buf, r_buf, h_buf;
  const std::span<float> z(z_buf.data(), n), r(r_buf.data(), n),
      candidate(h_buf.data(), n);

  affine(layer.input_weights[0], layer.bias[0], input, z);
  accumulate(layer.recurrent_weights[0], state, z);
  affine(layer.input_weights[1], layer.bias[1], input, r);
  accumulate(layer.recurrent_weights[1], state, r);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = sigmoid(z[i]);
    r[i] = sigmoid(r[i]) * state[i];  // r (.) h from here on
  }
  affine(layer.input_weights[2], layer.bias[2], input, candidate);
  accumulate(layer.recurrent_weights[2], r, candidate);
  for (std::size_t i = 0; i < n; ++i) {
    const float h = apply_activation(layer.spec.activation, candidate[i]);
    state[i] = z[i] * state[i] + (1.f - z[i]) * h;
  }
  return GruLayer::kGates * n * (layer.spec.input_size + n);
}

NetworkState::NetworkState(const Model& model)
    : vad(model.vad_gru.spec.output_size),
      noise(model.noise_gru.spec.output_size),
      denoise(model.denoise_gru.spec.output_size) {}

void NetworkState::reset() {
  std::fill(vad.begin(), vad.end(), 0.f);
  std::fill(noise.begin(), noise.end(), 0.f);
  std::fill(denoise.begin(), denoise.end(), 0.f);
  multiply_adds = 0;
}

NetworkOutput network_forward(const Model& model, NetworkState& state,
                              std::span<const float> features) {
  assert(features.size() == kFeatureCount);
  assert(state.vad.size() == model.vad_gru.spec.output_size);

  const std::size_t dense_n = model.input_dense.spec.output_size;
  const std::size_t vad_n = state.vad.size();
  const std::size_t noise_n = state.noise.size();

  std::array<float, kMaxLayerUnits> dense_buf;
  std::array<float, 3 * kMaxLayerUnits> concat;
  std::size_t macs = 0;
  NetworkOutput out;

  const std::span<float> dense(dense_buf.data(), dense_n);
  macs += dense_forward(model.input_dense, features, dense);
  macs += gru_forward(model.vad_gru, state.vad, dense);
  macs += dense_forward(model.vad_output, state.vad, std::span(&out.vad, 1));

  auto tail = std::copy(dense.begin(), dense.end(), concat.begin());
  tail = std::copy(state.vad.begin(), state.vad.end(), tail);
  tail = std::copy(features.begin(), features.end(), tail);
  macs += gru_forward(model.noise_gru, state.noise,
                      std::span<const float>(concat.data(), tail));

  tail = std::copy(state.vad.begin(), state.vad.end(), concat.begin());
  tail = std::copy(state.noise.begin(), state.noise.end(), tail);
  tail = std::copy(features.begin(), features.end(), tail);
  assert(static_cast<std::size_t>(tail - concat.begin()) ==
         vad_n + noise_n + kFeatureCount);
  macs += gru_forward(model.denoise_gru, state.denoise,
                      std::span<const float>(concat.data(), tail));

  macs += dense_forward(model.denoise_output, state.denoise, out.gains);
  state.multiply_adds += macs;
  return out;
}

}  // namespace rnnd::nn
