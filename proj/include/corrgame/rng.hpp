#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace corrgame {

/// Stationary 64-bit avalanche mix (splitmix64 finalizer). Used to derive
/// independent substream seeds from one master seed so that adding or
/// removing a consumer never perturbs the other streams.
std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

/// Named random substreams of a run. Every stochastic consumer owns one
/// stream; the ids are part of the reproducibility contract and must not be
/// reordered.
enum class Stream : std::uint64_t {
  Task = 1,         // difficulty draw + observation noise
  Solver = 2,       // solver action sampling
  Auditor = 3,      // auditor action sampling
  Correctness = 4,  // ground-truth correctness draw
  Controller = 5,   // meta-controller sampling
  Init = 6,         // network weight initialization
};

/// Deterministic generator with hand-rolled samplers. The standard
/// distributions are implementation-defined, so everything downstream of
/// mt19937_64 is spelled out here to keep byte-identical reruns honest.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);

  /// Gaussian via Box-Muller; the second deviate is cached.
  double normal(double mean = 0.0, double stddev = 1.0);

  bool bernoulli(double p);

  /// Uniform integer in [0, n), n >= 1.
  int uniform_int(int n);

  /// Index draw from nonnegative weights (need not be normalized).
  int categorical(std::span<const double> weights);

 private:
  std::mt19937_64 gen_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Substream seed for (master, stream, run_index).
std::uint64_t substream_seed(std::uint64_t master, Stream stream,
                             std::uint64_t run_index = 0);

/// Convenience: generator positioned at the start of a named substream.
Rng make_stream(std::uint64_t master, Stream stream,
                std::uint64_t run_index = 0);

}  // namespace corrgame
