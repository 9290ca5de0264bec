#include <random>

#include <gtest/gtest.h>

#include "support/random_values.hpp"
#include "tamura/sh_compare.hpp"
#include "tamura/tamura_partitions.hpp"

namespace tamura {
namespace {

class ShCompareTest : public ::testing::Test {
 protected:
  FieldContext q2{2};
  FieldContext q5{5};
  Ellipsoid e2{std::vector{q2.one(), q2.sqrt_d()}};
  Ellipsoid e3{std::vector{q2.one(), q2.sqrt_d(), q2.make(1, 1)}};
};

TEST_F(ShCompareTest, FormulaExamples) {
  EXPECT_EQ(sh_dims_formula(2, 9).support(), (std::vector<std::int64_t>{3, 5, 7, 9}));
  EXPECT_EQ(sh_dims_formula(3, 8).support(), (std::vector<std::int64_t>{4, 6, 8}));
  EXPECT_TRUE(sh_dims_formula(1, 1).support().empty());
}

TEST_F(ShCompareTest, GuttExamples) {
  EXPECT_EQ(sh_dims_gutt(e2, 9).support(), (std::vector<std::int64_t>{3, 5, 7, 9}));
  EXPECT_EQ(sh_dims_gutt(e3, 6).support(), (std::vector<std::int64_t>{4, 6}));
  EXPECT_TRUE(sh_dims_gutt(e3, 3).support().empty());
}

TEST_F(ShCompareTest, CompareExamples) {
  EXPECT_TRUE(compare_sh(e2, 2001).equal());
  EXPECT_TRUE(compare_sh(e3, 2002).equal());
}

TEST_F(ShCompareTest, WindowIsClosedAndBounded) {
  const DegreeVector v = sh_dims_formula(2, 9);
  EXPECT_EQ(v.k_min(), 0);
  EXPECT_EQ(v.k_max(), 9);
  EXPECT_EQ(v.at(9), 1);
  EXPECT_THROW((void)v.at(10), std::out_of_range);
  EXPECT_THROW((void)v.at(-1), std::out_of_range);
  EXPECT_THROW(compare_degree_vectors(sh_dims_formula(2, 9), sh_dims_formula(2, 10)), std::invalid_argument);
}

TEST_F(ShCompareTest, InjectedDuplicateOrbitIsReported) {
  std::vector<ReebOrbit> orbits = spectrum(e2, 41);
  orbits.push_back(orbits[4]);
  const ShComparison c = compare_degree_vectors(degree_vector_from_orbits(orbits, 41), sh_dims_formula(2, 41));
  ASSERT_FALSE(c.equal());
  EXPECT_EQ(c.first_difference->degree, orbits[4].cz);
  EXPECT_EQ(c.first_difference->gutt, 2);
  EXPECT_EQ(c.first_difference->formula, 1);
}

TEST_F(ShCompareTest, MultiplicityAtMostOne) {
  for (const Ellipsoid* e : {&e2, &e3}) {
    for (std::int64_t k : sh_dims_gutt(*e, 1500).multiplicities()) EXPECT_LE(k, 1);
  }
}

TEST_F(ShCompareTest, HypothesisViolationPropagates) {
  const Ellipsoid bad(std::vector<QuadIrrational>{q2.one(), q2.make(3)});
  EXPECT_THROW(compare_sh(bad, 20), HypothesisViolation);
}

TEST_F(ShCompareTest, BridgeAgreesWithPartitionVerdict) {
  std::mt19937_64 rng(47);
  int checked = 0;
  while (checked < 12) {
    const FieldContext& f = checked % 2 ? q2 : q5;
    std::vector<QuadIrrational> w;
    const int m = 2 + checked % 3;
    for (int k = 0; k < m; ++k) w.push_back(testing::random_positive_irrational(f, rng));
    const WeightTuple tuple(w);
    if (!tuple.hypothesis_holds()) continue;
    constexpr std::int64_t N = 300;
    const bool sh_equal = compare_sh(Ellipsoid(tuple), m - 1 + 2 * N).equal();
    const bool partition = verify_partition(tuple, N).is_partition();
    EXPECT_EQ(sh_equal, partition);
    EXPECT_TRUE(partition);
    ++checked;
  }
}

}  // namespace
}  // namespace tamura
