#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "fxt_mvi/operators.hpp"

using namespace fxt_mvi;

TEST(SplitMix64, ReferenceOutputs) {
  // First outputs of the reference generator for seed 1234567.
  SplitMix64 rng(1234567);
  EXPECT_EQ(rng.next(), 6457827717110365317ULL);
  EXPECT_EQ(rng.next(), 3203168211198807973ULL);
  EXPECT_EQ(rng.next(), 9817491932198370423ULL);
}

TEST(SplitMix64, UniformRange) {
  SplitMix64 rng(0);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Example1Operator, DirectSubstitution) {
  EXPECT_EQ(example1_operator(Vector{0.0, 0.0}), (Vector{-1e7, -1e7}));
  EXPECT_EQ(example1_operator(Vector{2.0, 2.0}), (Vector{-1e7 - 2.0, -1e7 - 7.6}));
  // Horner-style second evaluation of the same polynomial map.
  const double a = 2.707;
  const Vector f = example1_operator(Vector{a, a});
  EXPECT_DOUBLE_EQ(f[0], (0.5 * a - 2.0) * a - 1e7);
  EXPECT_DOUBLE_EQ(f[1], (0.1 * a - 4.0) * a - 1e7);
  EXPECT_THROW(example1_operator(Vector{1.0}), Error);
}

TEST(ElasticNetOperator, SymmetricPairsCancelAtOrigin) {
  Dataset d;
  d.labels = {1, -1, 1, -1};
  d.features = {Vector{0.3, 0.1}, Vector{0.3, 0.1}, Vector{0.9, 0.4}, Vector{0.9, 0.4}};
  const Vector g = elasticnet_logistic_operator(d, 0.25)(Vector{0.0, 0.0});
  EXPECT_NEAR(g[0], 0.0, 1e-15);
  EXPECT_NEAR(g[1], 0.0, 1e-15);
}

TEST(ElasticNetOperator, SingleSampleAtOrigin) {
  Dataset d;
  d.labels = {1};
  d.features = {Vector{1.0, 0.0, 0.0}};
  EXPECT_EQ(elasticnet_logistic_operator(d, 0.25)(Vector{0.0, 0.0, 0.0}),
            (Vector{-0.5, 0.0, 0.0}));
}

TEST(ElasticNetOperator, FiniteDifferenceGradient) {
  const Dataset d = generate_dataset(0);
  const Operator grad = elasticnet_logistic_operator(d, 0.25);
  const ScalarFunction f = elasticnet_smooth_objective(d, 0.25);
  SplitMix64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const Vector x{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const Vector g = grad(x);
    for (std::size_t j = 0; j < 3; ++j) {
      const double h = 1e-5 * (1.0 + std::abs(x[j]));
      const double fd = (f(x.with(j, x[j] + h)) - f(x.with(j, x[j] - h))) / (2.0 * h);
      EXPECT_NEAR(fd, g[j], 1e-6 * (1.0 + std::abs(g[j])));
    }
  }
}

TEST(ElasticNetOperator, LargeMarginsStayFinite) {
  const Dataset d = generate_dataset(1);
  const Vector g = elasticnet_logistic_operator(d, 0.25)(Vector{800.0, -800.0, 800.0});
  for (double v : g) EXPECT_TRUE(std::isfinite(v));
  EXPECT_TRUE(std::isfinite(elasticnet_smooth_objective(d, 0.25)(Vector{800.0, -800.0, 800.0})));
}

TEST(SaddleOperator, Bilinear) {
  const PartialGradient g1 = [](const Vector&, const Vector& v) { return Vector{v[0]}; };
  const PartialGradient g2 = [](const Vector& u, const Vector&) { return Vector{u[0]}; };
  const Operator F = saddle_operator(g1, g2, 1, 1);
  EXPECT_EQ(F(Vector{1.0, 1.0}), (Vector{1.0, -1.0}));
  EXPECT_EQ(F(Vector{0.0, 0.0}), (Vector{0.0, 0.0}));
  EXPECT_THROW(F(Vector{1.0}), Error);
}

TEST(SaddleOperator, ConcaveSideIsNegated) {
  const PartialGradient g1 = [](const Vector& u, const Vector&) { return u; };
  const PartialGradient g2 = [](const Vector&, const Vector& v) { return -1.0 * v; };
  const Operator F = saddle_operator(g1, g2, 1, 1);
  EXPECT_EQ(F(Vector{3.0, -2.0}), (Vector{3.0, -2.0}));
}

TEST(Dataset, DeterministicShapeAndRange) {
  const Dataset a = generate_dataset(42);
  const Dataset b = generate_dataset(42);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.features, b.features);
  ASSERT_EQ(a.size(), 100u);
  EXPECT_EQ(a.dim(), 3u);
  for (const Vector& f : a.features) {
    for (double v : f) {
      EXPECT_GE(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
  }
  EXPECT_NO_THROW(a.check());
}

TEST(Dataset, LabelMeanNearZero) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Dataset d = generate_dataset(seed, 100000, 1);
    double s = 0.0;
    for (int a : d.labels) s += a;
    EXPECT_LT(std::abs(s / 100000.0), 0.02) << "seed " << seed;
  }
}

TEST(Dataset, SaveLoadRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "fxt_mvi_dataset_roundtrip.txt";
  const Dataset a = generate_dataset(9, 20, 4);
  save_dataset(a, path);
  const Dataset b = load_dataset(path);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(b.seed, 9u);
  std::filesystem::remove(path);
  EXPECT_THROW(load_dataset(path), Error);
}

TEST(ConstantEstimates, Identity) {
  const SampleBox box{Vector{-1.0, -1.0}, Vector{1.0, 1.0}};
  const Operator id = [](const Vector& x) { return x; };
  const Operator twice = [](const Vector& x) { return 2.0 * x; };
  const Operator thrice = [](const Vector& x) { return 3.0 * x; };
  EXPECT_NEAR(estimate_lipschitz(id, 500, box, 1), 1.0, 1e-12);
  EXPECT_NEAR(estimate_lipschitz(twice, 500, box, 1), 2.0, 1e-12);
  EXPECT_NEAR(estimate_strong_monotonicity(id, 500, box, 1), 1.0, 1e-12);
  EXPECT_NEAR(estimate_strong_monotonicity(thrice, 500, box, 1), 3.0, 1e-12);
}

TEST(ConstantEstimates, ExampleOperators) {
  const SampleBox ex1_box{Vector{1.0, 1.0}, Vector{3.0, 3.0}};
  EXPECT_LE(estimate_lipschitz(example1_operator, 5000, ex1_box, 2), 5.0 + 1e-9);

  const SampleBox box{Vector{-2.0, -2.0, -2.0}, Vector{2.0, 2.0, 2.0}};
  const Operator F = elasticnet_logistic_operator(generate_dataset(0), 0.25);
  EXPECT_GE(estimate_strong_monotonicity(F, 2000, box, 3), 0.5 - 1e-9);
}
