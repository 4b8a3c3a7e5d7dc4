#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fxt_mvi/core.hpp"

using namespace fxt_mvi;

TEST(Vector, RejectsNonFiniteEntries) {
  EXPECT_THROW(Vector({1.0, std::nan("")}), Error);
  EXPECT_THROW(Vector(2, std::numeric_limits<double>::infinity()), Error);
  try {
    Vector({0.0, 0.0, INFINITY});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::non_finite);
    EXPECT_NE(std::string(e.what()).find("index 2"), std::string::npos);
  }
}

TEST(Vector, ArithmeticOverflowIsReported) {
  const Vector big{1e308, 1e308};
  EXPECT_THROW(big + big, Error);
  EXPECT_THROW(10.0 * big, Error);
}

TEST(Vector, DimensionMismatchThrows) {
  try {
    (void)(Vector{1.0, 2.0} + Vector{1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
  EXPECT_THROW(dot(Vector{1.0}, Vector{1.0, 2.0}), Error);
}

TEST(Vector, ElementwiseOperations) {
  const Vector a{1.0, -2.0};
  const Vector b{0.5, 4.0};
  EXPECT_EQ(a + b, (Vector{1.5, 2.0}));
  EXPECT_EQ(a - b, (Vector{0.5, -6.0}));
  EXPECT_EQ(-a, (Vector{-1.0, 2.0}));
  EXPECT_EQ(2.0 * a, a * 2.0);
  EXPECT_DOUBLE_EQ(dot(a, b), -7.5);
  EXPECT_EQ(a.with(1, 3.0), (Vector{1.0, 3.0}));
  EXPECT_THROW(a.with(2, 0.0), std::out_of_range);
}

TEST(EuclideanNorm, KnownValues) {
  EXPECT_EQ(euclidean_norm(Vector{0.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(euclidean_norm(Vector{3.0, 4.0}), 5.0);
  EXPECT_DOUBLE_EQ(euclidean_norm(Vector(100, 1.0)), 10.0);
  EXPECT_DOUBLE_EQ(distance(Vector{1.0, 1.0}, Vector{4.0, 5.0}), 5.0);
}

TEST(EuclideanNorm, NoOverflowOrUnderflowForExtremeScales) {
  EXPECT_DOUBLE_EQ(euclidean_norm(Vector{3e200, 4e200}), 5e200);
  EXPECT_DOUBLE_EQ(euclidean_norm(Vector{3e-200, 4e-200}), 5e-200);
}

TEST(ValidateProblem, LambdaWindowOfExampleConstants) {
  MviProblem p;
  p.mu = 11.0;
  p.lip = 5.0;
  auto r = validate_problem(p, FlowParams(0.44, 20, 20, 0.8, 1.2));
  EXPECT_EQ(r.status, ValidationReport::Status::pass);
  EXPECT_NEAR(*r.lambda_upper, 0.88, 1e-15);

  p.mu = 0.5;
  p.lip = 0.5;
  r = validate_problem(p, FlowParams(0.005, 20, 200, 0.9999, 1.03));
  EXPECT_TRUE(r.lambda_in_window);
  EXPECT_NEAR(*r.lambda_upper, 4.0, 1e-15);
  EXPECT_EQ(r.status, ValidationReport::Status::pass);
}

TEST(ValidateProblem, OpenIntervalBoundaryFails) {
  MviProblem p;
  p.mu = 1.0;
  p.lip = 1.0;
  const auto r = validate_problem(p, FlowParams(2.0, 1, 1, 0.5, 1.5));
  EXPECT_EQ(r.status, ValidationReport::Status::fail);
  EXPECT_FALSE(r.lambda_in_window);
}

TEST(ValidateProblem, UncertifiedAlphaFailsWithReason) {
  MviProblem p;
  p.mu = 0.5;
  p.lip = 0.5;
  const auto r = validate_problem(p, FlowParams(0.005, 20, 200, 0.97, 1.03));
  EXPECT_TRUE(r.lambda_in_window);
  EXPECT_EQ(r.alpha1_in_window, false);
  EXPECT_EQ(r.status, ValidationReport::Status::fail);
}

TEST(ValidateProblem, MissingConstantsAreUncheckable) {
  MviProblem p;
  p.mu = 1.0;
  const auto r = validate_problem(p, FlowParams(0.1, 1, 1, 0.5, 1.5));
  EXPECT_EQ(r.status, ValidationReport::Status::uncheckable);
  ASSERT_FALSE(r.reasons.empty());
  EXPECT_NE(r.reasons.front().find("missing_certificates"), std::string::npos);
}

TEST(MviProblem, CheckEnforcesInvariants) {
  MviProblem p;
  p.dimension = 1;
  p.op = [](const Vector& x) { return x; };
  p.prox = [](double, const Vector& x) { return x; };
  p.mu = 2.0;
  p.lip = 1.0;
  EXPECT_THROW(p.check(), Error);
  p.monotonicity = MonotonicityKind::strong_pseudo;
  EXPECT_NO_THROW(p.check());
  p.mu = -1.0;
  EXPECT_THROW(p.check(), Error);
}

TEST(FlowParams, RangeChecks) {
  EXPECT_NO_THROW(FlowParams(0.44, 20, 20, 0.8, 1.2));
  EXPECT_THROW(FlowParams(0.0, 20, 20, 0.8, 1.2), Error);
  EXPECT_THROW(FlowParams(0.44, -1, 20, 0.8, 1.2), Error);
  EXPECT_THROW(FlowParams(0.44, 20, 0, 0.8, 1.2), Error);
  EXPECT_THROW(FlowParams(0.44, 20, 20, 1.0, 1.2), Error);
  EXPECT_THROW(FlowParams(0.44, 20, 20, 0.8, 1.0), Error);
  EXPECT_NO_THROW(FlowParams::unchecked(0.44, 20, 0, 1.0, 2.0));
}

TEST(DiscretizationParams, Defaults) {
  DiscretizationParams dp;
  EXPECT_EQ(dp.fix_threshold, 1e-13);
  EXPECT_NO_THROW(dp.check());
  dp.eta = 0.0;
  EXPECT_THROW(dp.check(), Error);
}
