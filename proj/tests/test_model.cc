#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "catch_amalgamated.hpp"
#include "rnnd/nn/model.h"

using Catch::Matchers::ContainsSubstring;
using rnnd::nn::ModelErrorCode;

namespace {

// Byte offsets in a version-1 file.
constexpr std::size_t kVersionOffset = 4;
constexpr std::size_t kFeatureVersionOffset = 8;
constexpr std::size_t kEdgesOffset = 12;
constexpr std::size_t kLayerCountOffset = kEdgesOffset + 23 * 2;
constexpr std::size_t kUnitsOffset = kLayerCountOffset + 2;
constexpr std::size_t kLayersOffset = kUnitsOffset + 2;
constexpr std::size_t kTensorsOffset = kLayersOffset + 6 * 6;

const rnnd::nn::Model& sample_model() {
  static const auto model = rnnd::nn::quantize_model(rnnd::nn::FloatModel::random(3));
  return model;
}

ModelErrorCode load_error(const std::vector<std::uint8_t>& bytes, std::string* message = nullptr) {
  try {
    rnnd::nn::load_model(bytes);
  } catch (const rnnd::nn::ModelError& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("model loaded without error");
  return ModelErrorCode::kIo;
}

void put_u16(std::vector<std::uint8_t>& b, std::size_t at, std::uint16_t v) {
  b[at] = static_cast<std::uint8_t>(v & 0xFF);
  b[at + 1] = static_cast<std::uint8_t>(v >> 8);
}

std::uint16_t get_u16(const std::vector<std::uint8_t>& b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

}  // namespace

TEST_CASE("header layout is little-endian and fixed", "[model]") {
  const auto bytes = rnnd::nn::serialize_model(sample_model());
  CHECK(std::memcmp(bytes.data(), "RNND", 4) == 0);
  CHECK(bytes[kVersionOffset] == 1);
  CHECK(bytes[kVersionOffset + 1] == 0);
  CHECK(bytes[kFeatureVersionOffset] == 1);
  CHECK(get_u16(bytes, kEdgesOffset + 2 * 21) == 400);
  CHECK(get_u16(bytes, kEdgesOffset + 2 * 22) == 480);
  CHECK(get_u16(bytes, kLayerCountOffset) == 6);
  CHECK(get_u16(bytes, kUnitsOffset) == 215);
  // input_dense: dense, tanh, 42 -> 24
  CHECK(bytes[kLayersOffset] == 0);
  CHECK(bytes[kLayersOffset + 1] == 0);
  CHECK(get_u16(bytes, kLayersOffset + 2) == 42);
  CHECK(get_u16(bytes, kLayersOffset + 4) == 24);
  // denoise_gru: gru, relu, 114 -> 96
  CHECK(bytes[kLayersOffset + 4 * 6] == 1);
  CHECK(bytes[kLayersOffset + 4 * 6 + 1] == 2);
  CHECK(get_u16(bytes, kLayersOffset + 4 * 6 + 2) == 114);
  // Every tensor adds a 4-byte scale in front of its int8 payload.
  const std::size_t tensors = 2 + 9 + 2 + 9 + 9 + 2;
  CHECK(bytes.size() == kTensorsOffset + 4 * tensors + 87503);
}

TEST_CASE("round trip preserves every weight", "[model]") {
  const auto& model = sample_model();
  const auto loaded = rnnd::nn::load_model(rnnd::nn::serialize_model(model));
  CHECK(loaded == model);
  CHECK(loaded.total_units() == 215);
  for (std::size_t i = 0; i < model.denoise_gru.recurrent_weights[1].size(); ++i) {
    REQUIRE(loaded.denoise_gru.recurrent_weights[1].dequantized(i) ==
            model.denoise_gru.recurrent_weights[1].dequantized(i));
  }
  const auto zero = rnnd::nn::quantize_model(rnnd::nn::FloatModel::zeros());
  CHECK(rnnd::nn::load_model(rnnd::nn::serialize_model(zero)) == zero);
}

TEST_CASE("file round trip", "[model]") {
  const auto path = std::filesystem::temp_directory_path() / "rnnd_test_model.rnnd";
  rnnd::nn::save_model_file(sample_model(), path);
  CHECK(rnnd::nn::load_model_file(path) == sample_model());
  std::filesystem::remove(path);
  try {
    rnnd::nn::load_model_file(path);
    FAIL("missing file loaded");
  } catch (const rnnd::nn::ModelError& e) {
    CHECK(e.code() == ModelErrorCode::kIo);
  }
}

TEST_CASE("loader rejects malformed files with distinct errors", "[model]") {
  const auto good = rnnd::nn::serialize_model(sample_model());
  std::string message;

  auto bytes = good;
  bytes[0] = 'X';
  CHECK(load_error(bytes) == ModelErrorCode::kBadMagic);
  CHECK(load_error({}) == ModelErrorCode::kBadMagic);
  CHECK(load_error({'R', 'N'}) == ModelErrorCode::kBadMagic);

  bytes = good;
  bytes[kVersionOffset] = 2;
  CHECK(load_error(bytes, &message) == ModelErrorCode::kUnsupportedVersion);
  CHECK_THAT(message, ContainsSubstring("version 2"));

  bytes = good;
  bytes[kFeatureVersionOffset] = 9;
  CHECK(load_error(bytes) == ModelErrorCode::kFeatureVersionMismatch);

  bytes = good;
  put_u16(bytes, kEdgesOffset + 2 * 22, 400);
  CHECK(load_error(bytes) == ModelErrorCode::kBandTableMismatch);
  // The same table is fine when the engine runs without the extended band.
  CHECK_NOTHROW(rnnd::nn::load_model(bytes, rnnd::BandLayout::build({}, false)));

  bytes = good;
  bytes[kLayersOffset + 6] = 7;
  CHECK(load_error(bytes) == ModelErrorCode::kUnknownLayerKind);

  bytes = good;
  bytes[kLayersOffset + 1] = 3;
  CHECK(load_error(bytes) == ModelErrorCode::kUnknownActivation);

  bytes = good;
  put_u16(bytes, kUnitsOffset, 214);
  CHECK(load_error(bytes) == ModelErrorCode::kUnitCountMismatch);

  bytes = good;
  put_u16(bytes, kLayersOffset + 4, 25);  // input_dense out
  put_u16(bytes, kUnitsOffset, 216);
  CHECK(load_error(bytes) == ModelErrorCode::kTopologyMismatch);

  bytes = good;
  put_u16(bytes, kLayerCountOffset, 5);
  CHECK(load_error(bytes) == ModelErrorCode::kTopologyMismatch);

  bytes = good;
  bytes[kTensorsOffset + 4 + 10] = 0x80;  // -128 in input_dense.weights
  CHECK(load_error(bytes) == ModelErrorCode::kInvalidWeight);

  bytes = good;
  bytes.push_back(0);
  CHECK(load_error(bytes) == ModelErrorCode::kTrailingData);
}

TEST_CASE("truncation names the tensor being read", "[model]") {
  const auto good = rnnd::nn::serialize_model(sample_model());
  std::string message;
  // input_dense.weights ends at +4+1008, its bias at +4+24 after that; the
  // next tensor is vad_gru's first input matrix.
  const std::size_t vad_start = kTensorsOffset + 4 + 42 * 24 + 4 + 24;
  auto bytes = std::vector<std::uint8_t>(good.begin(), good.begin() + vad_start + 100);
  CHECK(load_error(bytes, &message) == ModelErrorCode::kTruncated);
  CHECK_THAT(message, ContainsSubstring("tensor vad_gru.input_"));

  bytes.assign(good.begin(), good.end() - 1);
  CHECK(load_error(bytes, &message) == ModelErrorCode::kTruncated);
  CHECK_THAT(message, ContainsSubstring("denoise_output.bias"));

  bytes.assign(good.begin(), good.begin() + kLayersOffset + 3);
  CHECK(load_error(bytes, &message) == ModelErrorCode::kTruncated);

  // Every possible cut is rejected.
  for (std::size_t cut = 0; cut < good.size(); cut += 97) {
    bytes.assign(good.begin(), good.begin() + cut);
    REQUIRE_THROWS_AS(rnnd::nn::load_model(bytes), rnnd::nn::ModelError);
  }
}

TEST_CASE("random corruption never crashes the loader", "[model][property]") {
  const auto good = rnnd::nn::serialize_model(sample_model());
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> pos(0, kTensorsOffset + 64);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int trial = 0; trial < 2000; ++trial) {
    auto bytes = good;
    for (int flips = 0; flips < 3; ++flips) bytes[pos(rng)] = static_cast<std::uint8_t>(byte(rng));
    try {
      const auto m = rnnd::nn::load_model(bytes);
      CHECK(m.weight_count() > 0);
    } catch (const rnnd::nn::ModelError&) {
    }
  }
}
