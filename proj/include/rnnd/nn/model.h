#ifndef RNND_NN_MODEL_H_
#define RNND_NN_MODEL_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rnnd/bands.h"
#include "rnnd/config.h"

namespace rnnd::nn {

enum class LayerKind : std::uint8_t { kDense = 0, kGru = 1 };
enum class Activation : std::uint8_t { kTanh = 0, kSigmoid = 1, kRelu = 2 };

inline constexpr std::size_t kMaxLayerUnits = 1024;

struct LayerSpec {
  LayerKind kind = LayerKind::kDense;
  Activation activation = Activation::kTanh;
  std::size_t input_size = 0;
  std::size_t output_size = 0;

  bool operator==(const LayerSpec&) const = default;
};

// Symmetric per-tensor int8: value = q * scale, |q| <= 127, scale = max|w|/127.
// Matrices are row-major with one row per output unit.
struct QuantizedTensor {
  std::size_t rows = 0;
  std::size_t cols = 1;
  float scale = 0.f;
  std::vector<std::int8_t> values;

  std::size_t size() const { return rows * cols; }
  float dequantized(std::size_t i) const {
    return static_cast<float>(values[i]) * scale;
  }
  const std::int8_t* row(std::size_t r) const { return values.data() + r * cols; }

  bool operator==(const QuantizedTensor&) const = default;
};

QuantizedTensor quantize(std::span<const float> weights, std::size_t rows,
                         std::size_t cols);

struct DenseLayer {
  LayerSpec spec;
  QuantizedTensor weights;  // output_size x input_size
  QuantizedTensor bias;     // output_size

  bool operator==(const DenseLayer&) const = default;
};

// Gate order everywhere: update (z), reset (r), candidate (h).
struct GruLayer {
  static constexpr std::size_t kGates = 3;
  LayerSpec spec;  // activation = candidate activation; gates are sigmoid
  std::array<QuantizedTensor, kGates> input_weights;      // out x in
  std::array<QuantizedTensor, kGates> recurrent_weights;  // out x out
  std::array<QuantizedTensor, kGates> bias;               // out

  bool operator==(const GruLayer&) const = default;
};

// Layer sizes of the fixed wiring:
//   input_dense  : features(42)                          -> dense (tanh)
//   vad_gru      : input_dense                           -> GRU
//   vad_output   : vad_gru                               -> 1 (sigmoid)
//   noise_gru    : [input_dense, vad_gru, features]      -> GRU
//   denoise_gru  : [vad_gru, noise_gru, features]        -> GRU
//   denoise_output: denoise_gru                          -> 22 (sigmoid)
struct ModelShape {
  std::size_t dense_units = 24;
  std::size_t vad_units = 24;
  std::size_t noise_units = 48;
  std::size_t denoise_units = 96;
  Activation gru_activation = Activation::kRelu;

  std::array<LayerSpec, 6> layer_specs() const;
};

struct Model {
  static constexpr std::size_t kLayerCount = 6;

  std::uint32_t feature_version = kFeatureVersion;
  BandLayout::EdgeTable band_edges{};
  DenseLayer input_dense;
  GruLayer vad_gru;
  DenseLayer vad_output;
  GruLayer noise_gru;
  GruLayer denoise_gru;
  DenseLayer denoise_output;

  std::array<LayerSpec, kLayerCount> layer_specs() const;
  std::size_t total_units() const;
  // Every stored parameter, biases included.
  std::size_t weight_count() const;
  // Matrix entries, i.e. multiply-adds per inference frame.
  std::size_t matrix_weight_count() const;

  bool operator==(const Model&) const = default;
};

// Unquantized weights in the same layout; what a trainer checkpoint holds.
struct FloatDense {
  LayerSpec spec;
  std::vector<float> weights;
  std::vector<float> bias;
};

struct FloatGru {
  LayerSpec spec;
  std::array<std::vector<float>, GruLayer::kGates> input_weights;
  std::array<std::vector<float>, GruLayer::kGates> recurrent_weights;
  std::array<std::vector<float>, GruLayer::kGates> bias;
};

struct FloatModel {
  FloatDense input_dense;
  FloatGru vad_gru;
  FloatDense vad_output;
  FloatGru noise_gru;
  FloatGru denoise_gru;
  FloatDense denoise_output;

  static FloatModel zeros(const ModelShape& shape = {});
  // Uniform weights in [-scale, scale]; deterministic for a given seed.
  static FloatModel random(std::uint64_t seed, float scale = 0.3f,
                           const ModelShape& shape = {});
};

Model quantize_model(const FloatModel& weights,
                     const BandLayout& layout = BandLayout::build());

enum class ModelErrorCode {
  kIo,
  kBadMagic,
  kUnsupportedVersion,
  kFeatureVersionMismatch,
  kBandTableMismatch,
  kTruncated,
  kUnknownLayerKind,
  kUnknownActivation,
  kUnitCountMismatch,
  kTopologyMismatch,
  kInvalidWeight,
  kTrailingData,
};

std::string_view error_code_name(ModelErrorCode code);

class ModelError : public std::runtime_error {
 public:
  ModelError(ModelErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ModelErrorCode code() const { return code_; }

 private:
  ModelErrorCode code_;
};

// Binary model file, little-endian:
//   "RNND" | u32 format version | u32 feature version | u16 edges[23]
//   | u16 layer count | u16 total units | layer records | tensor records
// See docs/model_format.md for the byte-level layout.
std::vector<std::uint8_t> serialize_model(const Model& model);

// Throws ModelError. The band table must equal `expected_layout`'s.
Model load_model(std::span<const std::uint8_t> bytes,
                 const BandLayout& expected_layout = BandLayout::build());
Model load_model_file(const std::filesystem::path& path,
                      const BandLayout& expected_layout = BandLayout::build());
void save_model_file(const Model& model, const std::filesystem::path& path);

}  // namespace rnnd::nn

#endif  // RNND_NN_MODEL_H_
