// rnnd: denoise 48 kHz mono audio.
//
//   rnnd --model m.rnnd in.wav out.wav
//   rnnd --raw --model m.rnnd - - < in.s16 > out.s16
//   rnnd --mode oracle --oracle-gains gains.txt in.wav out.wav
//   rnnd --mode benchmark --model m.rnnd --seconds 60

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rnnd/audio_io.h"
#include "rnnd/benchmark.h"
#include "rnnd/denoiser.h"
#include "rnnd/nn/model.h"
#include "rnnd/stream.h"

namespace {

enum class Mode { kDenoise, kPassthrough, kOracle, kBenchmark };

struct Args {
  Mode mode = Mode::kDenoise;
  std::string model_path;
  std::string input = "-";
  std::string output = "-";
  std::string vad_path;
  std::string gains_path;
  bool raw = false;
  bool no_comb = false;
  double seconds = 60.0;
  unsigned threads = 1;
  std::uint64_t seed = 1;
};

std::vector<std::uint8_t> read_all(const std::string& path) {
  std::vector<std::uint8_t> bytes;
  if (path == "-") {
    char buf[1 << 16];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), stdin)) > 0) {
      bytes.insert(bytes.end(), buf, buf + n);
    }
    if (std::ferror(stdin)) throw std::runtime_error("failed reading standard input");
    return bytes;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input '" + path + "'");
  bytes.assign(std::istreambuf_iterator<char>(in), {});
  return bytes;
}

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (path == "-") {
      file_ = stdout;
    } else {
      file_ = std::fopen(path.c_str(), "wb");
      if (!file_) throw std::runtime_error("cannot open output '" + path + "'");
    }
  }
  ~Output() {
    if (file_ && file_ != stdout) std::fclose(file_);
  }
  void write(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) return;
    if (std::fwrite(bytes.data(), 1, bytes.size(), file_) != bytes.size()) {
      throw std::runtime_error("failed writing '" + path_ + "'");
    }
  }
  void close() {
    const bool ok = std::fflush(file_) == 0 && (file_ == stdout || std::fclose(file_) == 0);
    if (file_ != stdout) file_ = nullptr;
    if (!ok) throw std::runtime_error("failed writing '" + path_ + "'");
  }

 private:
  std::string path_;
  std::FILE* file_ = nullptr;
};

void write_vad(const std::string& path, const std::vector<float>& vad) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open VAD output '" + path + "'");
  for (float v : vad) out << v << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::shared_ptr<const rnnd::nn::Model> load_model(const Args& args) {
  if (args.model_path.empty()) return nullptr;
  return std::make_shared<const rnnd::nn::Model>(
      rnnd::nn::load_model_file(args.model_path));
}

int run_benchmark(const Args& args) {
  auto model = load_model(args);
  if (!model) throw CLI::ValidationError("--model", "benchmark mode needs --model");
  rnnd::BenchmarkConfig config;
  config.seconds = args.seconds;
  config.threads = args.threads;
  config.seed = args.seed;
  const auto report = rnnd::run_benchmark(model, config);
  std::cout << rnnd::format_report(report);
  return report.streams_identical ? 0 : 1;
}

int run_audio(const Args& args) {
  rnnd::ProcessingMode mode = rnnd::ProcessingMode::kDenoise;
  if (args.mode == Mode::kPassthrough) mode = rnnd::ProcessingMode::kPassthrough;
  if (args.mode == Mode::kOracle) mode = rnnd::ProcessingMode::kOracle;

  auto model = load_model(args);
  if (mode == rnnd::ProcessingMode::kDenoise && !model) {
    throw CLI::ValidationError("--model", "denoise mode needs --model");
  }
  std::vector<rnnd::BandVector> oracle;
  rnnd::GainSource source;
  if (mode == rnnd::ProcessingMode::kOracle) {
    if (args.gains_path.empty()) {
      throw CLI::ValidationError("--oracle-gains", "oracle mode needs --oracle-gains");
    }
    std::ifstream in(args.gains_path);
    if (!in) throw std::runtime_error("cannot open gain file '" + args.gains_path + "'");
    oracle = rnnd::parse_gain_lines(in);
    source = [&oracle](std::size_t i) {
      if (i >= oracle.size()) {
        throw std::runtime_error("gain file has " + std::to_string(oracle.size()) +
                                 " frames but the input needs more");
      }
      return oracle[i];
    };
  }

  rnnd::DenoiserOptions options;
  options.comb_filter = !args.no_comb;
  rnnd::Denoiser denoiser(model, rnnd::options_for(mode, options));
  rnnd::AlignedStream stream(denoiser, mode, source);
  Output output(args.output);
  std::vector<float> out;

  if (args.raw && args.input == "-") {
    // Stream stdin hop by hop so pipes do not have to end before output starts.
    std::vector<std::uint8_t> buf(2 * 4 * rnnd::kHopSize);
    std::size_t carry = 0;
    std::size_t n;
    while ((n = std::fread(buf.data() + carry, 1, buf.size() - carry, stdin)) > 0) {
      const std::size_t usable = (carry + n) & ~std::size_t{1};
      const auto samples = rnnd::decode_pcm16(std::span(buf).first(usable));
      stream.write(samples, out);
      output.write(rnnd::encode_pcm16(out));
      out.clear();
      carry = carry + n - usable;
      if (carry) buf[0] = buf[usable];
    }
    if (std::ferror(stdin)) throw std::runtime_error("failed reading standard input");
    if (carry) std::cerr << "rnnd: warning: dropped a trailing odd byte\n";
    stream.finish(out);
    output.write(rnnd::encode_pcm16(out));
  } else {
    const auto bytes = read_all(args.input);
    rnnd::Audio audio;
    if (args.raw) {
      if (bytes.size() % 2) std::cerr << "rnnd: warning: dropped a trailing odd byte\n";
      audio.samples = rnnd::decode_pcm16(bytes);
    } else {
      audio = rnnd::read_wav(bytes);
    }
    const std::size_t frames = (audio.samples.size() + rnnd::kHopSize - 1) / rnnd::kHopSize;
    if (mode == rnnd::ProcessingMode::kOracle && oracle.size() < frames) {
      throw std::runtime_error("gain file has " + std::to_string(oracle.size()) +
                               " frames but the input has " + std::to_string(frames));
    }
    out.reserve(audio.samples.size());
    stream.write(audio.samples, out);
    stream.finish(out);
    audio.samples = std::move(out);
    output.write(args.raw ? rnnd::encode_pcm16(audio.samples) : rnnd::write_wav(audio));
  }
  output.close();
  if (!args.vad_path.empty()) write_vad(args.vad_path, stream.vad());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-time 48 kHz noise suppressor"};
  Args args;
  const std::map<std::string, Mode> modes{{"denoise", Mode::kDenoise},
                                          {"passthrough", Mode::kPassthrough},
                                          {"oracle", Mode::kOracle},
                                          {"benchmark", Mode::kBenchmark}};
  app.add_option("--mode", args.mode, "denoise, passthrough, oracle or benchmark")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  app.add_option("--model", args.model_path, "Model file")->check(CLI::ExistingFile);
  app.add_flag("--raw", args.raw, "Headerless 16-bit little-endian PCM input and output");
  app.add_option("--vad-out", args.vad_path, "Write one VAD probability per frame");
  app.add_option("--oracle-gains", args.gains_path,
                 "Per-frame band gains for oracle mode (22 values per line)");
  app.add_flag("--no-comb", args.no_comb, "Disable the pitch comb filter");
  app.add_option("--seconds", args.seconds, "Benchmark audio length")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", args.threads, "Benchmark streams, one per thread")
      ->check(CLI::Range(1u, 256u));
  app.add_option("--seed", args.seed, "Benchmark signal seed");
  app.add_option("input", args.input, "Input file, '-' for stdin");
  app.add_option("output", args.output, "Output file, '-' for stdout");
  CLI11_PARSE(app, argc, argv);

  try {
    return args.mode == Mode::kBenchmark ? run_benchmark(args) : run_audio(args);
  } catch (const CLI::Error& e) {
    std::cerr << "rnnd: error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "rnnd: error: " << e.what() << '\n';
    return 1;
  }
}
