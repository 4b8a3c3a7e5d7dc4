#include "fxt_mvi/operators.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

namespace fxt_mvi {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

Vector example1_operator(const Vector& x) {
  if (x.size() != 2) throw Error(ErrorCode::dimension_mismatch, "example1 operator is 2-D");
  const double x1 = x[0];
  const double x2 = x[1];
  return Vector{0.5 * x1 * x2 - 2.0 * x2 - 1e7, 0.1 * x2 * x2 - 4.0 * x1 - 1e7};
}

void Dataset::check() const {
  if (labels.size() != features.size()) {
    throw Error(ErrorCode::invalid_argument, "dataset labels/features length mismatch");
  }
  for (int a : labels) {
    if (a != 1 && a != -1) throw Error(ErrorCode::invalid_argument, "labels must be -1 or +1");
  }
  for (const Vector& b : features) {
    if (b.size() != dim()) throw Error(ErrorCode::dimension_mismatch, "ragged dataset features");
  }
}

Dataset generate_dataset(std::uint64_t seed, std::size_t n, std::size_t d) {
  if (n < 1 || d < 1) throw Error(ErrorCode::invalid_argument, "dataset needs n, d >= 1");
  SplitMix64 rng(seed);
  Dataset data;
  data.seed = seed;
  data.labels.reserve(n);
  data.features.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    data.labels.push_back((rng.next() >> 63) != 0 ? 1 : -1);
    std::vector<double> b(d);
    for (double& v : b) v = rng.uniform01();
    data.features.emplace_back(std::move(b));
  }
  return data;
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  data.check();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
  char buf[64];
  out << "# seed=" << data.seed << " n=" << data.size() << " d=" << data.dim() << "\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << data.labels[i];
    for (double v : data.features[i]) {
      std::snprintf(buf, sizeof buf, " %.17g", v);
      out << buf;
    }
    out << "\n";
  }
  if (!out) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t d = 0;
  if (std::sscanf(header.c_str(), "# seed=%" SCNu64 " n=%zu d=%zu", &seed, &n, &d) != 3) {
    throw Error(ErrorCode::io_error, path.string() + ":1: malformed dataset header");
  }
  Dataset data;
  data.seed = seed;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    int label = 0;
    std::vector<double> b(d);
    row >> label;
    for (double& v : b) row >> v;
    if (!row) {
      throw Error(ErrorCode::io_error,
                  path.string() + ":" + std::to_string(lineno) + ": malformed dataset row");
    }
    data.labels.push_back(label);
    data.features.emplace_back(std::move(b));
  }
  if (data.size() != n) {
    throw Error(ErrorCode::io_error, path.string() + ": header promises " + std::to_string(n) +
                                         " rows, found " + std::to_string(data.size()));
  }
  data.check();
  return data;
}

namespace {

// exp(-z) / (1 + exp(-z)) without exponentiating a positive argument.
double logistic_weight(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

// log(1 + exp(-z))
double logistic_loss(double z) {
  return std::max(-z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

Operator elasticnet_logistic_operator(Dataset data, double beta2) {
  if (!(beta2 > 0.0)) throw Error(ErrorCode::invalid_argument, "beta2 must be positive");
  data.check();
  return [data = std::move(data), beta2](const Vector& x) {
    if (x.size() != data.dim()) {
      throw Error(ErrorCode::dimension_mismatch, "elastic-net operator dimension mismatch");
    }
    std::vector<double> g(x.size());
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = 2.0 * beta2 * x[j];
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double a = data.labels[i];
      const Vector& b = data.features[i];
      const double w = logistic_weight(a * dot(b, x));
      for (std::size_t j = 0; j < g.size(); ++j) g[j] -= a * b[j] * w;
    }
    return Vector(std::move(g));
  };
}

ScalarFunction elasticnet_smooth_objective(Dataset data, double beta2) {
  data.check();
  return [data = std::move(data), beta2](const Vector& x) {
    double s = beta2 * dot(x, x);
    for (std::size_t i = 0; i < data.size(); ++i) {
      s += logistic_loss(data.labels[i] * dot(data.features[i], x));
    }
    return s;
  };
}

Operator saddle_operator(PartialGradient grad_x1, PartialGradient grad_x2, std::size_t n1,
                         std::size_t n2) {
  return [g1 = std::move(grad_x1), g2 = std::move(grad_x2), n1, n2](const Vector& x) {
    if (x.size() != n1 + n2) {
      throw Error(ErrorCode::dimension_mismatch, "saddle operator expects dimension n1 + n2");
    }
    const auto& c = x.to_std();
    const Vector x1(std::vector<double>(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n1)));
    const Vector x2(std::vector<double>(c.begin() + static_cast<std::ptrdiff_t>(n1), c.end()));
    const Vector d1 = g1(x1, x2);
    const Vector d2 = g2(x1, x2);
    if (d1.size() != n1 || d2.size() != n2) {
      throw Error(ErrorCode::dimension_mismatch, "partial gradient has wrong dimension");
    }
    std::vector<double> out(d1.begin(), d1.end());
    for (double v : d2) out.push_back(-v);
    return Vector(std::move(out));
  };
}

namespace {

Vector sample_in(const SampleBox& box, SplitMix64& rng) {
  std::vector<double> v(box.lower.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.uniform(box.lower[i], box.upper[i]);
  return Vector(std::move(v));
}

template <class Ratio, class Better>
double sampled_extreme(const Operator& op, std::size_t pairs, const SampleBox& box,
                       std::uint64_t seed, double init, Ratio ratio, Better better) {
  if (pairs < 1) throw Error(ErrorCode::invalid_argument, "need at least one sample pair");
  require_same_dimension(box.lower, box.upper, "sample box");
  SplitMix64 rng(seed);
  double best = init;
  std::size_t used = 0;
  while (used < pairs) {
    const Vector x = sample_in(box, rng);
    const Vector z = sample_in(box, rng);
    const Vector dx = x - z;
    const double n2 = dot(dx, dx);
    if (n2 == 0.0) continue;
    const double r = ratio(op(x) - op(z), dx, n2);
    if (better(r, best)) best = r;
    ++used;
  }
  return best;
}

}  // namespace

double estimate_lipschitz(const Operator& op, std::size_t sample_pairs, const SampleBox& box,
                          std::uint64_t seed) {
  return sampled_extreme(
      op, sample_pairs, box, seed, 0.0,
      [](const Vector& df, const Vector&, double n2) {
        return euclidean_norm(df) / std::sqrt(n2);
      },
      [](double r, double best) { return r > best; });
}

double estimate_strong_monotonicity(const Operator& op, std::size_t sample_pairs,
                                    const SampleBox& box, std::uint64_t seed) {
  return sampled_extreme(
      op, sample_pairs, box, seed, std::numeric_limits<double>::infinity(),
      [](const Vector& df, const Vector& dx, double n2) { return dot(df, dx) / n2; },
      [](double r, double best) { return r < best; });
}

}  // namespace fxt_mvi
