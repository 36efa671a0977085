#include "corrgame/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace corrgame {

std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform01() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double Rng::normal(double mean, double stddev) {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return mean + stddev * cached_normal_;
  }
  double u1 = uniform01();
  double u2 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return mean + stddev * radius * std::cos(angle);
}

bool Rng::bernoulli(double p) { return uniform01() < p; }

int Rng::uniform_int(int n) {
  if (n <= 0) throw std::invalid_argument("Rng::uniform_int: n must be >= 1");
  return static_cast<int>(uniform01() * n);
}

int Rng::categorical(std::span<const double> weights) {
  if (weights.empty())
    throw std::invalid_argument("Rng::categorical: empty weight vector");
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0))
    throw std::invalid_argument("Rng::categorical: weights must sum to > 0");
  double u = uniform01() * total;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    u -= weights[i];
    if (u < 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size() - 1);
}

std::uint64_t substream_seed(std::uint64_t master, Stream stream,
                             std::uint64_t run_index) {
  return mix64(mix64(master, run_index), static_cast<std::uint64_t>(stream));
}

Rng make_stream(std::uint64_t master, Stream stream, std::uint64_t run_index) {
  return Rng(substream_seed(master, stream, run_index));
}

}  // namespace corrgame
