#ifndef RNND_NN_NETWORK_H_
#define RNND_NN_NETWORK_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rnnd/config.h"
#include "rnnd/nn/model.h"

namespace rnnd::nn {

float apply_activation(Activation activation, float x);

// out = act(W x + b). Returns the number of multiply-adds performed.
std::size_t dense_forward(const DenseLayer& layer, std::span<const float> input,
                          std::span<float> output);

// One GRU step, updating `state` in place (the new state is also the output):
//   z  = sigmoid(Wz x + Uz h + bz)
//   r  = sigmoid(Wr x + Ur h + br)
//   h~ = act(Wh x + Uh (r * h) + bh)
//   h' = z * h + (1 - z) * h~
// Returns the number of multiply-adds performed.
std::size_t gru_forward(const GruLayer& layer, std::span<float> state,
                        std::span<const float> input);

// Per-stream recurrent state; zero at stream start.
struct NetworkState {
  explicit NetworkState(const Model& model);
  void reset();

  std::vector<float> vad;
  std::vector<float> noise;
  std::vector<float> denoise;
  std::uint64_t multiply_adds = 0;  // running total
};

struct NetworkOutput {
  BandArray<float> gains{};
  float vad = 0.f;
};

NetworkOutput network_forward(const Model& model, NetworkState& state,
                              std::span<const float> features);

}  // namespace rnnd::nn

#endif  // RNND_NN_NETWORK_H_
