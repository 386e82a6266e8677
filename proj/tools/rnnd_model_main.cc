// rnnd-model: create and inspect model files.
//
//   rnnd-model random --seed 7 --out random.rnnd
//   rnnd-model zero --out zero.rnnd
//   rnnd-model info model.rnnd

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rnnd/nn/model.h"

namespace {

std::string_view kind_name(rnnd::nn::LayerKind kind) {
  return kind == rnnd::nn::LayerKind::kGru ? "gru" : "dense";
}

std::string_view activation_name(rnnd::nn::Activation a) {
  switch (a) {
    case rnnd::nn::Activation::kTanh:
      return "tanh";
    case rnnd::nn::Activation::kSigmoid:
      return "sigmoid";
    case rnnd::nn::Activation::kRelu:
      return "relu";
  }
  return "?";
}

void print_info(const rnnd::nn::Model& model) {
  static constexpr const char* kNames[] = {"input_dense", "vad_gru",     "vad_output",
                                           "noise_gru",   "denoise_gru", "denoise_output"};
  std::cout << "feature version " << model.feature_version << "\nband edges     ";
  for (auto e : model.band_edges) std::cout << ' ' << e;
  std::cout << '\n';
  const auto specs = model.layer_specs();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::cout << "  " << kNames[i] << ": " << kind_name(specs[i].kind) << ' '
              << specs[i].input_size << " -> " << specs[i].output_size << ' '
              << activation_name(specs[i].activation) << '\n';
  }
  std::cout << "units          " << model.total_units() << '\n'
            << "weights        " << model.weight_count() << " ("
            << model.matrix_weight_count() << " in matrices)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Create and inspect denoiser model files"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  float scale = 0.3f;
  std::string out_path;
  auto* random = app.add_subcommand("random", "Write a model with random weights");
  random->add_option("--seed", seed, "Random seed");
  random->add_option("--scale", scale, "Uniform weight range [-scale, scale]")
      ->check(CLI::PositiveNumber);
  random->add_option("--out", out_path, "Output file")->required();

  auto* zero = app.add_subcommand("zero", "Write a model with all weights zero");
  zero->add_option("--out", out_path, "Output file")->required();

  std::string in_path;
  auto* info = app.add_subcommand("info", "Validate a model file and print its layout");
  info->add_option("model", in_path, "Model file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*random || *zero) {
      const auto weights = *random ? rnnd::nn::FloatModel::random(seed, scale)
                                   : rnnd::nn::FloatModel::zeros();
      const auto model = rnnd::nn::quantize_model(weights);
      rnnd::nn::save_model_file(model, out_path);
      print_info(model);
    } else {
      print_info(rnnd::nn::load_model_file(in_path));
    }
  } catch (const rnnd::nn::ModelError& e) {
    std::cerr << "rnnd-model: error [" << rnnd::nn::error_code_name(e.code())
              << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "rnnd-model: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
