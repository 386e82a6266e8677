#include "rnnd/stream.h"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rnnd {

AlignedStream::AlignedStream(Denoiser& denoiser, ProcessingMode mode,
                             GainSource gains)
    : denoiser_(denoiser), mode_(mode), gains_(std::move(gains)) {
  if (mode_ == ProcessingMode::kOracle && !gains_) {
    throw std::invalid_argument("oracle mode needs a gain source");
  }
  pending_.reserve(kHopSize);
}

void AlignedStream::process_hop(std::span<const float> hop,
                                std::vector<float>& out, bool record) {
  FrameResult result;
  switch (mode_) {
    case ProcessingMode::kDenoise:
      result = denoiser_.process_frame(hop);
      break;
    case ProcessingMode::kPassthrough: {
      BandVector ones;
      ones.fill(1.0);
      result = denoiser_.process_frame_oracle(hop, ones);
      break;
    }
    case ProcessingMode::kOracle:
      // The flush hop has no gains of its own; it repeats the last frame's.
      result = denoiser_.process_frame_oracle(hop, gains_(record ? frames_ : frames_ - 1));
      break;
  }
  if (record) {
    vad_.push_back(result.vad);
    ++frames_;
  }
  // The first hop out of the denoiser is pure delay.
  const std::size_t skip = std::min(delay_remaining_, kHopSize);
  delay_remaining_ -= skip;
  out.insert(out.end(), result.audio.begin() + skip, result.audio.end());
  output_samples_ += kHopSize - skip;
}

void AlignedStream::write(std::span<const float> input, std::vector<float>& out) {
  if (finished_) throw std::logic_error("write after finish");
  input_samples_ += input.size();
  while (!input.empty()) {
    const std::size_t take = std::min(kHopSize - pending_.size(), input.size());
    pending_.insert(pending_.end(), input.begin(), input.begin() + take);
    input = input.subspan(take);
    if (pending_.size() == kHopSize) {
      process_hop(pending_, out, true);
      pending_.clear();
    }
  }
}

void AlignedStream::finish(std::vector<float>& out) {
  if (finished_) return;
  finished_ = true;
  if (!pending_.empty()) {
    pending_.resize(kHopSize, 0.f);
    process_hop(pending_, out, true);
    pending_.clear();
  }
  if (frames_ > 0) {
    const std::array<float, kHopSize> zeros{};
    process_hop(zeros, out, false);
  }
  // Drop the zero padding beyond the input length.
  const std::size_t excess = output_samples_ - input_samples_;
  out.resize(out.size() - excess);
  output_samples_ = input_samples_;
}

DenoiserOptions options_for(ProcessingMode mode, DenoiserOptions base) {
  if (mode == ProcessingMode::kPassthrough) base.comb_filter = false;
  return base;
}

StreamResult process_signal(Denoiser& denoiser, std::span<const float> input,
                            ProcessingMode mode, GainSource gains) {
  AlignedStream stream(denoiser, mode, std::move(gains));
  StreamResult result;
  result.audio.reserve(input.size() + kHopSize);
  stream.write(input, result.audio);
  stream.finish(result.audio);
  result.vad = stream.vad();
  return result;
}

std::vector<BandVector> parse_gain_lines(std::istream& in) {
  std::vector<BandVector> frames;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::replace(line.begin(), line.end(), ',', ' ');
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    BandVector gains{};
    std::size_t count = 0;
    std::string token;
    while (fields >> token) {
      char* end = nullptr;
      const double g = std::strtod(token.c_str(), &end);
      if (end == token.c_str() || *end != '\0') {
        throw std::invalid_argument("gain file line " + std::to_string(line_number) +
                                    ": '" + token + "' is not a number");
      }
      if (!(g >= 0.0 && g <= 1.0)) {
        throw std::invalid_argument("gain file line " + std::to_string(line_number) +
                                    ": gain " + token + " is outside [0, 1]");
      }
      if (count < kBandCount) gains[count] = g;
      ++count;
    }
    if (count != kBandCount) {
      throw std::invalid_argument("gain file line " + std::to_string(line_number) +
                                  ": expected 22 gains, found " + std::to_string(count));
    }
    frames.push_back(gains);
  }
  return frames;
}

}  // namespace rnnd
