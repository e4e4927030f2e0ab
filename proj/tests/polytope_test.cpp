#include "nonlocal/polytope.hpp"

#include "nonlocal/inequalities.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace nonlocal;
using namespace testing_support;
using enum Setting;

namespace {

constexpr Outcome P = Outcome::Plus;
constexpr Outcome M = Outcome::Minus;

CorrelationVector pr_box() {
  // Outcomes agree except on XX.
  CorrelationVector v = CorrelationVector::Zero();
  for (int M1 = 0; M1 < 2; ++M1) {
    for (int M2 = 0; M2 < 2; ++M2) {
      for (int m1 = 0; m1 < 2; ++m1) {
        const int m2 = m1 ^ ((1 - M1) & (1 - M2));
        v(correlation_index(M1, M2, m1, m2)) = 0.5;
      }
    }
  }
  return v;
}

bool contains(const std::vector<HardyPoint>& vs, const HardyPoint& p) {
  return std::any_of(vs.begin(), vs.end(),
                     [&](const HardyPoint& v) { return (v - p).norm() < 1e-12; });
}

}  // namespace

TEST(Vectors, TableRoundTrip) {
  const CorrelationTable t = joint_table(TestKind::Hardy);
  const CorrelationVector v = to_vector(t);
  EXPECT_DOUBLE_EQ(v(correlation_index(1, 1, 0, 0)), t(Y, Y, P, P));
  EXPECT_EQ(to_vector(to_table(v)), v);
}

TEST(Causal, ValidateReportsEachKind) {
  CorrelationVector v = to_vector(joint_table(TestKind::Chsh));
  EXPECT_TRUE(validate_causal(v).empty());
  v(0) += 0.1;
  v(1) -= 0.1;
  const auto issues = validate_causal(v);
  ASSERT_FALSE(issues.empty());
  EXPECT_TRUE(std::any_of(issues.begin(), issues.end(), [](const ConstraintViolation& c) {
    return c.kind == ConstraintViolation::Kind::NoSignaling;
  }));
  CorrelationVector neg = CorrelationVector::Zero();
  neg(0) = -0.5;
  EXPECT_FALSE(validate_causal(neg).empty());
}

TEST(Causal, VertexCounts) {
  EXPECT_EQ(causal_vertices().size(), 24u);
  EXPECT_EQ(local_vertices().size(), 16u);
}

TEST(Causal, VerticesIndependentOfSearchOrder) {
  EXPECT_EQ(causal_vertices(), causal_vertices(99u));
}

TEST(Causal, NonLocalVerticesArePrBoxes) {
  int boxes = 0;
  for (const CorrelationVector& v : causal_vertices()) {
    if (is_local_fine(v)) continue;
    ++boxes;
    EXPECT_NEAR(v.maxCoeff(), 0.5, 1e-15);
  }
  EXPECT_EQ(boxes, 8);
  EXPECT_NEAR(ch_value(to_table(pr_box())).value, 0.5, 1e-15);
}

TEST(Local, VerticesAreDeterministic) {
  for (const CorrelationVector& v : local_vertices()) {
    EXPECT_TRUE(validate_causal(v).empty());
    EXPECT_EQ((v.array() == 1.0).count(), 4);
  }
  const CorrelationVector v = local_vertex(1, 0, 0, 1);
  // m1 = M1, m2 = not: X1 gives +, Y1 gives -, party 2 always -.
  EXPECT_DOUBLE_EQ(v(correlation_index(1, 0, 1, 1)), 1.0);
}

TEST(ChVariants, EightFacetsSaturatedByLocalVertices) {
  const auto& vs = ch_variants();
  ASSERT_EQ(vs.size(), 8u);
  for (const ChVariant& f : vs) {
    int tight = 0;
    for (const CorrelationVector& v : local_vertices()) {
      EXPECT_LE(f(v), 1e-12);
      if (std::abs(f(v)) < 1e-12) ++tight;
    }
    // A facet of the 8-dimensional local polytope.
    EXPECT_GE(tight, 8);
  }
}

TEST(Lhv, LocalMixturesDecompose) {
  std::mt19937_64 rng(4);
  const auto locals = local_vertices();
  for (int trial = 0; trial < 200; ++trial) {
    CorrelationVector v = CorrelationVector::Zero();
    std::vector<double> w(16);
    double total = 0.0;
    for (double& x : w) total += (x = std::uniform_real_distribution<double>(0, 1)(rng));
    for (int k = 0; k < 16; ++k) v += w[k] / total * locals[k];
    const LhvResult r = lhv_decompose(v);
    ASSERT_TRUE(r.feasible);
    const auto& weights = r.decomposition->weights;
    EXPECT_GE(weights.minCoeff(), -1e-12);
    EXPECT_NEAR(weights.sum(), 1.0, 1e-12);
  }
}

TEST(Lhv, PrBoxHasCertificate) {
  const LhvResult r = lhv_decompose(pr_box());
  EXPECT_FALSE(r.feasible);
  ASSERT_TRUE(r.certificate);
  EXPECT_NEAR(r.certificate_value, 0.5, 1e-12);
  EXPECT_FALSE(is_local_fine(pr_box()));
}

TEST(Lhv, RejectsNonCausalInput) {
  CorrelationVector v = pr_box();
  v(0) += 0.2;
  EXPECT_THROW(lhv_decompose(v), std::invalid_argument);
}

TEST(Lhv, SaturatedVariantsAtLocalVertex) {
  EXPECT_FALSE(saturated_variants(local_vertex(0, 0, 0, 0)).empty());
  EXPECT_TRUE(saturated_variants(CorrelationVector::Constant(0.25)).empty());
}

TEST(Hardy, FiveVertices) {
  const auto vs = hardy_vertices();
  ASSERT_EQ(vs.size(), 5u);
  for (const HardyPoint& p : {HardyPoint(1, 0, 0, 0), HardyPoint(1, 0, 0, 1),
                              HardyPoint(1, 1, 0, 1), HardyPoint(0, 1, 0, 1),
                              HardyPoint(0, 1, 1, 0)}) {
    EXPECT_TRUE(contains(vs, p)) << p.transpose();
  }
}

TEST(Hardy, EmbedZerosAndProjection) {
  const HardyPoint p(0.7, 0.6, 0.2, 0.5);
  const CorrelationTable t = to_table(hardy_embed(p));
  EXPECT_DOUBLE_EQ(t(X, X, P, P), 0.0);
  EXPECT_DOUBLE_EQ(t(Y, X, P, M), 0.0);
  EXPECT_DOUBLE_EQ(t(X, Y, M, P), 0.0);
  EXPECT_DOUBLE_EQ(t(Y, Y, P, P), 0.0);
  EXPECT_NEAR(t(X, Y, M, M), 0.7, 1e-15);
  EXPECT_LT((hardy_project(hardy_embed(p)) - p).norm(), 1e-15);
}

TEST(Hardy, MembershipMatchesEmbedding) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-0.1, 1.1);
  int inside = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const HardyPoint p(u(rng), u(rng), u(rng), u(rng));
    const bool member = hardy_membership(p);
    const bool embeds = validate_causal(hardy_table(p)).empty();
    EXPECT_EQ(member, embeds) << p.transpose();
    if (member) {
      ++inside;
      EXPECT_NO_THROW(hardy_embed(p));
    } else {
      EXPECT_THROW(hardy_embed(p), NotInHardyPolytope);
    }
  }
  EXPECT_GT(inside, 10);
}

TEST(Hardy, MembershipExamples) {
  EXPECT_TRUE(hardy_membership(HardyPoint(1, 0, 0, 0)));
  EXPECT_TRUE(hardy_membership(HardyPoint(0.5, 0.5, 0.5, 0)));
  EXPECT_FALSE(hardy_membership(HardyPoint(0.5, 0.5, 0, 0)));
  EXPECT_FALSE(hardy_membership(HardyPoint(1.2, 0, 0, 0)));
}

TEST(Hardy, FacetSaturation) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 300; ++trial) {
    EXPECT_NEAR(hardy_facet_check(random_hardy_point(rng)), 0.0, 1e-12);
  }
  EXPECT_THROW(hardy_facet_check(HardyPoint(2, 0, 0, 0)), NotInHardyPolytope);
}

TEST(CrossSection, TrianglesWithLegEqualToPmm) {
  const CrossSection cs = cross_section(0.25, 5);
  ASSERT_EQ(cs.slices.size(), 5u);
  EXPECT_TRUE(cs.segment.empty());
  for (const HardySlice& sl : cs.slices) {
    ASSERT_EQ(sl.vertices.size(), 3u);
    const double q = sl.p_mp_yy;
    EXPECT_LT((sl.vertices[0] - Eigen::Vector2d(1 - q, q)).norm(), 1e-15);
    EXPECT_LT((sl.vertices[1] - Eigen::Vector2d(1 - q, 0.25 + q)).norm(), 1e-15);
    EXPECT_LT((sl.vertices[2] - Eigen::Vector2d(0.75 - q, 0.25 + q)).norm(), 1e-15);
  }
  EXPECT_NEAR(cs.slices.back().p_mp_yy, 0.75, 1e-15);
}

TEST(CrossSection, DegenerateSliceIsSegment) {
  const CrossSection cs = cross_section(0.0, 3);
  ASSERT_EQ(cs.segment.size(), 2u);
  for (const HardySlice& sl : cs.slices) EXPECT_EQ(sl.vertices.size(), 1u);
  EXPECT_THROW(cross_section(1.5), std::invalid_argument);
}
