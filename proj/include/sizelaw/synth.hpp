#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sizelaw/metrics.hpp"

namespace sizelaw {

// SplitMix64 (Steele, Lea, Flood 2014): state += 0x9E3779B97F4A7C15, then two
// xor-shift-multiply rounds. Uniforms use the top 53 bits; normals use the
// Box-Muller cosine branch, drawing two uniforms per value.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();  // [0, 1)
  double normal();   // standard normal
  std::uint64_t below(std::uint64_t bound);  // [0, bound)

 private:
  std::uint64_t state_;
};

struct SynthSpec {
  std::size_t n_projects = 1000;
  double x_low = 1.0;
  double x_high = 20000.0;
  double alpha = 0.0;
  double beta = 1.0;
  double k = 1.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 42;
  std::string x_metric = "classes";
  std::string y_metric = "methods";
  // Round x to an integer >= 1 and y to an integer >= 0.
  bool round_to_counts = true;
  // Multiply y of this fraction of projects (chosen without replacement) by
  // outlier_factor.
  double outlier_fraction = 0.0;
  double outlier_factor = 100.0;
};

// x ~ log-uniform on [x_low, x_high]; y = exp(alpha + beta (log x)^k + eps),
// eps ~ Normal(0, sigma), evaluated at the (rounded) x.
Series generate_series(const SynthSpec& spec);

// Same draws as generate_series, packed into metric records with ids
// "synth-00001", ... Always rounds to counts.
std::vector<ProjectMetrics> generate(const SynthSpec& spec);

}  // namespace sizelaw
