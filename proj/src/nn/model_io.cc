#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "rnnd/nn/model.h"

namespace rnnd::nn {
namespace {

constexpr std::array<char, 4> kMagic = {'R', 'N', 'N', 'D'};

static_assert(std::endian::native == std::endian::little,
              "model I/O assumes a little-endian host");

class Writer {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    out_.insert(out_.end(), p, p + n);
  }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { bytes(&v, sizeof v); }
  void u32(std::uint32_t v) { bytes(&v, sizeof v); }
  void f32(float v) { bytes(&v, sizeof v); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  void bytes(void* dst, std::size_t n, std::string_view what) {
    if (data_.size() - pos_ < n) {
      throw ModelError(ModelErrorCode::kTruncated,
                       "model file truncated while reading " + std::string(what));
    }
    std::memcpy(dst, data_.data() + pos_, n);
    pos_ += n;
  }
  std::uint8_t u8(std::string_view what) {
    std::uint8_t v;
    bytes(&v, sizeof v, what);
    return v;
  }
  std::uint16_t u16(std::string_view what) {
    std::uint16_t v;
    bytes(&v, sizeof v, what);
    return v;
  }
  std::uint32_t u32(std::string_view what) {
    std::uint32_t v;
    bytes(&v, sizeof v, what);
    return v;
  }
  float f32(std::string_view what) {
    float v;
    bytes(&v, sizeof v, what);
    return v;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

constexpr std::array<std::string_view, Model::kLayerCount> kLayerNames = {
    "input_dense", "vad_gru", "vad_output", "noise_gru", "denoise_gru",
    "denoise_output"};
constexpr std::array<std::string_view, GruLayer::kGates> kGateNames = {
    "update", "reset", "candidate"};

void write_tensor(Writer& w, const QuantizedTensor& t) {
  w.f32(t.scale);
  w.bytes(t.values.data(), t.values.size());
}

QuantizedTensor read_tensor(Reader& r, std::size_t rows, std::size_t cols,
                            const std::string& name) {
  QuantizedTensor t;
  t.rows = rows;
  t.cols = cols;
  t.scale = r.f32("tensor " + name);
  if (!std::isfinite(t.scale) || t.scale < 0.f) {
    throw ModelError(ModelErrorCode::kInvalidWeight,
                     "tensor " + name + " has an invalid scale");
  }
  t.values.resize(rows * cols);
  r.bytes(t.values.data(), t.values.size(), "tensor " + name);
  for (std::int8_t q : t.values) {
    if (q == -128) {
      throw ModelError(ModelErrorCode::kInvalidWeight,
                       "tensor " + name + " holds -128 (outside +-127)");
    }
  }
  return t;
}

void write_dense(Writer& w, const DenseLayer& d) {
  write_tensor(w, d.weights);
  write_tensor(w, d.bias);
}

void write_gru(Writer& w, const GruLayer& g) {
  for (const auto& t : g.input_weights) write_tensor(w, t);
  for (const auto& t : g.recurrent_weights) write_tensor(w, t);
  for (const auto& t : g.bias) write_tensor(w, t);
}

DenseLayer read_dense(Reader& r, const LayerSpec& spec, std::string_view name) {
  DenseLayer d;
  d.spec = spec;
  const std::string base(name);
  d.weights = read_tensor(r, spec.output_size, spec.input_size, base + ".weights");
  d.bias = read_tensor(r, spec.output_size, 1, base + ".bias");
  return d;
}

GruLayer read_gru(Reader& r, const LayerSpec& spec, std::string_view name) {
  GruLayer g;
  g.spec = spec;
  const std::string base(name);
  const std::size_t n = spec.output_size;
  for (std::size_t i = 0; i < GruLayer::kGates; ++i) {
    g.input_weights[i] = read_tensor(r, n, spec.input_size,
                                     base + ".input_" + std::string(kGateNames[i]));
  }
  for (std::size_t i = 0; i < GruLayer::kGates; ++i) {
    g.recurrent_weights[i] = read_tensor(
        r, n, n, base + ".recurrent_" + std::string(kGateNames[i]));
  }
  for (std::size_t i = 0; i < GruLayer::kGates; ++i) {
    g.bias[i] = read_tensor(r, n, 1, base + ".bias_" + std::string(kGateNames[i]));
  }
  return g;
}

[[noreturn]] void topology_error(const std::string& what) {
  throw ModelError(ModelErrorCode::kTopologyMismatch, "model topology: " + what);
}

void check_topology(const std::array<LayerSpec, Model::kLayerCount>& specs) {
  using K = LayerKind;
  constexpr std::array<K, Model::kLayerCount> kinds = {
      K::kDense, K::kGru, K::kDense, K::kGru, K::kGru, K::kDense};
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].kind != kinds[i]) {
      topology_error(std::string(kLayerNames[i]) + " has the wrong layer kind");
    }
    if (specs[i].input_size == 0 || specs[i].output_size == 0 ||
        specs[i].input_size > 3 * kMaxLayerUnits ||
        specs[i].output_size > kMaxLayerUnits) {
      topology_error(std::string(kLayerNames[i]) + " has an unsupported size");
    }
  }
  const auto& [dense, vad, vad_out, noise, denoise, out] = specs;
  if (dense.input_size != kFeatureCount) topology_error("input_dense must take 42 features");
  if (vad.input_size != dense.output_size) topology_error("vad_gru input size");
  if (vad_out.input_size != vad.output_size || vad_out.output_size != 1) {
    topology_error("vad_output must map vad_gru to one value");
  }
  if (noise.input_size != dense.output_size + vad.output_size + kFeatureCount) {
    topology_error("noise_gru input must be [input_dense, vad_gru, features]");
  }
  if (denoise.input_size != vad.output_size + noise.output_size + kFeatureCount) {
    topology_error("denoise_gru input must be [vad_gru, noise_gru, features]");
  }
  if (out.input_size != denoise.output_size || out.output_size != kBandCount) {
    topology_error("denoise_output must map denoise_gru to 22 gains");
  }
  if (vad_out.activation != Activation::kSigmoid ||
      out.activation != Activation::kSigmoid) {
    topology_error("output layers must use sigmoid");
  }
}

}  // namespace

std::string_view error_code_name(ModelErrorCode code) {
  switch (code) {
    case ModelErrorCode::kIo: return "io";
    case ModelErrorCode::kBadMagic: return "bad_magic";
    case ModelErrorCode::kUnsupportedVersion: return "unsupported_version";
    case ModelErrorCode::kFeatureVersionMismatch: return "feature_version_mismatch";
    case ModelErrorCode::kBandTableMismatch: return "band_table_mismatch";
    case ModelErrorCode::kTruncated: return "truncated";
    case ModelErrorCode::kUnknownLayerKind: return "unknown_layer_kind";
    case ModelErrorCode::kUnknownActivation: return "unknown_activation";
    case ModelErrorCode::kUnitCountMismatch: return "unit_count_mismatch";
    case ModelErrorCode::kTopologyMismatch: return "topology_mismatch";
    case ModelErrorCode::kInvalidWeight: return "invalid_weight";
    case ModelErrorCode::kTrailingData: return "trailing_data";
  }
  return "unknown";
}

std::vector<std::uint8_t> serialize_model(const Model& model) {
  Writer w;
  w.bytes(kMagic.data(), kMagic.size());
  w.u32(kModelFormatVersion);
  w.u32(model.feature_version);
  for (std::uint16_t e : model.band_edges) w.u16(e);
  w.u16(static_cast<std::uint16_t>(Model::kLayerCount));
  w.u16(static_cast<std::uint16_t>(model.total_units()));
  for (const auto& spec : model.layer_specs()) {
    w.u8(static_cast<std::uint8_t>(spec.kind));
    w.u8(static_cast<std::uint8_t>(spec.activation));
    w.u16(static_cast<std::uint16_t>(spec.input_size));
    w.u16(static_cast<std::uint16_t>(spec.output_size));
  }
  write_dense(w, model.input_dense);
  write_gru(w, model.vad_gru);
  write_dense(w, model.vad_output);
  write_gru(w, model.noise_gru);
  write_gru(w, model.denoise_gru);
  write_dense(w, model.denoise_output);
  return w.take();
}

Model load_model(std::span<const std::uint8_t> bytes,
                 const BandLayout& expected_layout) {
  Reader r(bytes);
  std::array<char, 4> magic{};
  if (bytes.size() >= magic.size()) r.bytes(magic.data(), magic.size(), "magic");
  if (magic != kMagic) {
    throw ModelError(ModelErrorCode::kBadMagic,
                     "not a model file (expected magic \"RNND\")");
  }
  const std::uint32_t version = r.u32("format version");
  if (version != kModelFormatVersion) {
    throw ModelError(ModelErrorCode::kUnsupportedVersion,
                     "unsupported model format version " + std::to_string(version) +
                         " (expected " + std::to_string(kModelFormatVersion) + ")");
  }
  Model model;
  model.feature_version = r.u32("feature version");
  if (model.feature_version != kFeatureVersion) {
    throw ModelError(ModelErrorCode::kFeatureVersionMismatch,
                     "model was trained on feature version " +
                         std::to_string(model.feature_version) + ", engine uses " +
                         std::to_string(kFeatureVersion));
  }
  for (auto& e : model.band_edges) e = r.u16("band edge table");
  if (model.band_edges != expected_layout.edges()) {
    throw ModelError(ModelErrorCode::kBandTableMismatch,
                     "model band edge table differs from the engine layout");
  }

  const std::uint16_t layer_count = r.u16("layer count");
  const std::uint16_t total_units = r.u16("unit count");
  if (layer_count != Model::kLayerCount) {
    topology_error("expected 6 layers, file declares " + std::to_string(layer_count));
  }
  std::array<LayerSpec, Model::kLayerCount> specs;
  std::size_t unit_sum = 0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const std::string name = "layer record " + std::string(kLayerNames[i]);
    const std::uint8_t kind = r.u8(name);
    const std::uint8_t act = r.u8(name);
    specs[i].input_size = r.u16(name);
    specs[i].output_size = r.u16(name);
    if (kind > static_cast<std::uint8_t>(LayerKind::kGru)) {
      throw ModelError(ModelErrorCode::kUnknownLayerKind,
                       std::string(kLayerNames[i]) + ": unknown layer kind " +
                           std::to_string(kind));
    }
    if (act > static_cast<std::uint8_t>(Activation::kRelu)) {
      throw ModelError(ModelErrorCode::kUnknownActivation,
                       std::string(kLayerNames[i]) + ": unknown activation " +
                           std::to_string(act));
    }
    specs[i].kind = static_cast<LayerKind>(kind);
    specs[i].activation = static_cast<Activation>(act);
    unit_sum += specs[i].output_size;
  }
  if (unit_sum != total_units) {
    throw ModelError(ModelErrorCode::kUnitCountMismatch,
                     "header declares " + std::to_string(total_units) +
                         " units but layers sum to " + std::to_string(unit_sum));
  }
  check_topology(specs);

  model.input_dense = read_dense(r, specs[0], kLayerNames[0]);
  model.vad_gru = read_gru(r, specs[1], kLayerNames[1]);
  model.vad_output = read_dense(r, specs[2], kLayerNames[2]);
  model.noise_gru = read_gru(r, specs[3], kLayerNames[3]);
  model.denoise_gru = read_gru(r, specs[4], kLayerNames[4]);
  model.denoise_output = read_dense(r, specs[5], kLayerNames[5]);
  if (r.remaining() != 0) {
    throw ModelError(ModelErrorCode::kTrailingData,
                     std::to_string(r.remaining()) +
                         " unexpected bytes after the last tensor");
  }
  return model;
}

Model load_model_file(const std::filesystem::path& path,
                      const BandLayout& expected_layout) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ModelError(ModelErrorCode::kIo,
                     "cannot open model file " + path.string());
  }
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return load_model(bytes, expected_layout);
}

void save_model_file(const Model& model, const std::filesystem::path& path) {
  const auto bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw ModelError(ModelErrorCode::kIo,
                     "cannot write model file " + path.string());
  }
}

}  // namespace rnnd::nn
