#include "rnnd/nn/model.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace rnnd::nn {

QuantizedTensor quantize(std::span<const float> weights, std::size_t rows,
                         std::size_t cols) {
  if (weights.size() != rows * cols) {
    throw std::invalid_argument("quantize: weight count does not match shape");
  }
  QuantizedTensor t;
  t.rows = rows;
  t.cols = cols;
  t.values.assign(weights.size(), 0);
  double max_abs = 0.0;
  for (float w : weights) max_abs = std::max(max_abs, std::abs(double{w}));
  if (max_abs == 0.0) return t;
  t.scale = static_cast<float>(max_abs / 127.0);
  const double inv = 1.0 / static_cast<double>(t.scale);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const long q = std::lround(static_cast<double>(weights[i]) * inv);
    t.values[i] = static_cast<std::int8_t>(std::clamp(q, -127L, 127L));
  }
  return t;
}

std::array<LayerSpec, 6> ModelShape::layer_specs() const {
  using K = LayerKind;
  using A = Activation;
  return {{
      {K::kDense, A::kTanh, kFeatureCount, dense_units},
      {K::kGru, gru_activation, dense_units, vad_units},
      {K::kDense, A::kSigmoid, vad_units, 1},
      {K::kGru, gru_activation, dense_units + vad_units + kFeatureCount,
       noise_units},
      {K::kGru, gru_activation, vad_units + noise_units + kFeatureCount,
       denoise_units},
      {K::kDense, A::kSigmoid, denoise_units, kBandCount},
  }};
}

std::array<LayerSpec, Model::kLayerCount> Model::layer_specs() const {
  return {input_dense.spec, vad_gru.spec,     vad_output.spec,
          noise_gru.spec,   denoise_gru.spec, denoise_output.spec};
}

std::size_t Model::total_units() const {
  std::size_t units = 0;
  for (const auto& spec : layer_specs()) units += spec.output_size;
  return units;
}

std::size_t Model::matrix_weight_count() const {
  std::size_t count = 0;
  for (const auto& spec : layer_specs()) {
    const std::size_t gates = spec.kind == LayerKind::kGru ? GruLayer::kGates : 1;
    count += gates * spec.output_size * spec.input_size;
    if (spec.kind == LayerKind::kGru) {
      count += gates * spec.output_size * spec.output_size;
    }
  }
  return count;
}

std::size_t Model::weight_count() const {
  std::size_t count = matrix_weight_count();
  for (const auto& spec : layer_specs()) {
    count += (spec.kind == LayerKind::kGru ? GruLayer::kGates : 1) *
             spec.output_size;
  }
  return count;
}

namespace {

template <typename Fill>
FloatDense make_dense(const LayerSpec& spec, Fill&& fill) {
  FloatDense d{spec, std::vector<float>(spec.output_size * spec.input_size),
               std::vector<float>(spec.output_size)};
  for (float& w : d.weights) w = fill();
  for (float& w : d.bias) w = fill();
  return d;
}

template <typename Fill>
FloatGru make_gru(const LayerSpec& spec, Fill&& fill) {
  FloatGru g;
  g.spec = spec;
  for (std::size_t gate = 0; gate < GruLayer::kGates; ++gate) {
    g.input_weights[gate].resize(spec.output_size * spec.input_size);
    g.recurrent_weights[gate].resize(spec.output_size * spec.output_size);
    g.bias[gate].resize(spec.output_size);
    for (float& w : g.input_weights[gate]) w = fill();
    for (float& w : g.recurrent_weights[gate]) w = fill();
    for (float& w : g.bias[gate]) w = fill();
  }
  return g;
}

template <typename Fill>
FloatModel make_model(const ModelShape& shape, Fill&& fill) {
  const auto specs = shape.layer_specs();
  return FloatModel{make_dense(specs[0], fill), make_gru(specs[1], fill),
                    make_dense(specs[2], fill), make_gru(specs[3], fill),
                    make_gru(specs[4], fill),   make_dense(specs[5], fill)};
}

DenseLayer quantize_dense(const FloatDense& d) {
  return {d.spec, quantize(d.weights, d.spec.output_size, d.spec.input_size),
          quantize(d.bias, d.spec.output_size, 1)};
}

GruLayer quantize_gru(const FloatGru& g) {
  GruLayer out;
  out.spec = g.spec;
  const std::size_t n = g.spec.output_size;
  for (std::size_t gate = 0; gate < GruLayer::kGates; ++gate) {
    out.input_weights[gate] = quantize(g.input_weights[gate], n, g.spec.input_size);
    out.recurrent_weights[gate] = quantize(g.recurrent_weights[gate], n, n);
    out.bias[gate] = quantize(g.bias[gate], n, 1);
  }
  return out;
}

}  // namespace

FloatModel FloatModel::zeros(const ModelShape& shape) {
  return make_model(shape, [] { return 0.f; });
}

FloatModel FloatModel::random(std::uint64_t seed, float scale,
                              const ModelShape& shape) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(-scale, scale);
  return make_model(shape, [&] { return dist(rng); });
}

Model quantize_model(const FloatModel& w, const BandLayout& layout) {
  Model m;
  m.band_edges = layout.edges();
  m.input_dense = quantize_dense(w.input_dense);
  m.vad_gru = quantize_gru(w.vad_gru);
  m.vad_output = quantize_dense(w.vad_output);
  m.noise_gru = quantize_gru(w.noise_gru);
  m.denoise_gru = quantize_gru(w.denoise_gru);
  m.denoise_output = quantize_dense(w.denoise_output);
  return m;
}

}  // namespace rnnd::nn
