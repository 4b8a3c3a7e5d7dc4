#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "fxt_mvi/core.hpp"

namespace fxt_mvi {

/// SplitMix64 (Steele, Lea & Flood 2014; reference implementation by
/// S. Vigna, prng.di.unimi.it/splitmix64.c). The state advances by a fixed
/// odd constant, so the k-th output is a pure function of (seed, k).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Top 53 bits scaled to [0, 1).
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::uint64_t state_;
};

/// F(x) = [0.5 x1 x2 - 2 x2 - 1e7, 0.1 x2^2 - 4 x1 - 1e7]
Vector example1_operator(const Vector& x);

/// Labelled samples (a_i, b_i), a_i in {-1, +1}.
struct Dataset {
  std::vector<int> labels;
  std::vector<Vector> features;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dim() const noexcept { return features.empty() ? 0 : features.front().size(); }
  void check() const;
};

/// n samples of dimension d from SplitMix64(seed). For each sample, one draw
/// gives the label (top bit set -> +1, else -1) followed by d uniform [0,1)
/// feature draws.
Dataset generate_dataset(std::uint64_t seed, std::size_t n = 100, std::size_t d = 3);

/// Text format: header "# seed=<s> n=<n> d=<d>", then one "label f_1 ... f_d"
/// line per sample with 17 significant digits.
void save_dataset(const Dataset& data, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

/// Gradient of sum_i log(1 + exp(-a_i b_i^T x)) + beta2 |x|^2.
Operator elasticnet_logistic_operator(Dataset data, double beta2);
/// The smooth objective whose gradient the operator above returns.
ScalarFunction elasticnet_smooth_objective(Dataset data, double beta2);

/// Partial gradient evaluated at the split point (x1, x2).
using PartialGradient = std::function<Vector(const Vector& x1, const Vector& x2)>;

/// F(x1, x2) = [grad_x1 f; -grad_x2 f] for the concatenated point of
/// dimension n1 + n2.
Operator saddle_operator(PartialGradient grad_x1, PartialGradient grad_x2, std::size_t n1,
                         std::size_t n2);

struct SampleBox {
  Vector lower;
  Vector upper;
};

/// max over sampled pairs of |F(x) - F(z)| / |x - z|: a lower bound on L.
double estimate_lipschitz(const Operator& op, std::size_t sample_pairs, const SampleBox& box,
                          std::uint64_t seed);

/// min over sampled pairs of <F(x) - F(z), x - z> / |x - z|^2: an upper
/// bound on mu.
double estimate_strong_monotonicity(const Operator& op, std::size_t sample_pairs,
                                    const SampleBox& box, std::uint64_t seed);

}  // namespace fxt_mvi
