#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "tamura/cz_engine.hpp"

namespace tamura {
namespace {

constexpr double kPi = std::numbers::pi;

// Test-side closed form: one rotation block with r = T alpha / (2 pi) full turns
// has index 1 + 2 floor(r) off the integers and 2r on them. Twice-values.
std::int64_t block_twice_index(double alpha, double duration) {
  const double r = duration * alpha / (2 * kPi);
  const double nearest = std::round(r);
  if (std::abs(r - nearest) < 1e-12) return 4 * static_cast<std::int64_t>(nearest);
  return 2 * (1 + 2 * static_cast<std::int64_t>(std::floor(r)));
}

std::int64_t oracle_twice_index(const std::vector<double>& freqs, double duration) {
  std::int64_t sum = 0;
  for (double a : freqs) sum += block_twice_index(a, duration);
  return sum;
}

double distance_to_integer(double x) { return std::abs(x - std::round(x)); }

TEST(HalfIntegerTest, Rendering) {
  EXPECT_EQ(HalfInteger::from_twice(5).to_string(), "5/2");
  EXPECT_EQ(HalfInteger::from_twice(-3).to_string(), "-3/2");
  EXPECT_EQ(HalfInteger::from_integer(4).to_string(), "4");
  EXPECT_THROW((void)HalfInteger::from_twice(1).to_integer(), std::domain_error);
  EXPECT_EQ(HalfInteger::from_twice(1) + HalfInteger::from_twice(3), HalfInteger::from_integer(2));
}

TEST(SymplecticTest, RotationPathsStaySymplectic) {
  const RotationPath r({0.3, 1.7, 9.5}, 11.0);
  for (int i = 0; i <= 200; ++i) EXPECT_LE(symplectic_defect(r.at(11.0 * i / 200)), 1e-9);
}

TEST(SymplecticTest, CheckedRejectsNonSymplectic) {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 0) = 2.0;
  EXPECT_THROW(SymplecticMatrix::checked(m), NonSymplecticError);
  const SymplecticMatrix ok = SymplecticMatrix::checked(RotationPath({1.0, 2.0}, 1.0).at(0.4));
  EXPECT_LE((ok.inverse() * ok.matrix() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SymplecticTest, PathRejectsNonSymplecticSamples) {
  const SymplecticPath bad(1, 0.0, 1.0, [](double t) {
    Matrix m = Matrix::Identity(2, 2);
    m(0, 0) = 1.0 + t;
    return m;
  });
  EXPECT_THROW(find_crossings(bad), NonSymplecticError);
}

TEST(FindCrossingsTest, OneAndAHalfTurns) {
  const auto crossings = find_crossings(RotationPath({1.0}, 2 * kPi * 1.5).path());
  ASSERT_EQ(crossings.size(), 2u);
  EXPECT_NEAR(crossings[0].t, 0.0, 1e-9);
  EXPECT_NEAR(crossings[1].t, 2 * kPi, 1e-8);
  for (const Crossing& c : crossings) {
    EXPECT_EQ(c.signature, 2);
    EXPECT_FALSE(c.degenerate);
    EXPECT_EQ(c.kernel_basis.cols(), 2);
  }
}

TEST(FindCrossingsTest, HalfTurnHasOnlyTheStart) {
  const auto crossings = find_crossings(RotationPath({1.0}, kPi).path());
  ASSERT_EQ(crossings.size(), 1u);
  EXPECT_EQ(crossings[0].t, 0.0);
}

TEST(FindCrossingsTest, IdentityPathIsNonIsolated) {
  const SymplecticPath id = constant_path(Matrix::Identity(2, 2), 0.0, 1.0);
  EXPECT_THROW(find_crossings(id), NonIsolatedCrossingsError);
  EXPECT_THROW(cz_index(id), NonIsolatedCrossingsError);
}

TEST(FindCrossingsTest, NearbyCrossingsOfTwoBlocksAreSeparated) {
  // Crossings at 2 pi / 1.03 and 2 pi lie about 1.15 sample spacings apart.
  const RotationPath r({1.0, 1.03}, 10.0);
  const auto crossings = find_crossings(r.path(64));
  ASSERT_EQ(crossings.size(), 3u);
  EXPECT_NEAR(crossings[1].t, 2 * kPi / 1.03, 1e-8);
  EXPECT_NEAR(crossings[2].t, 2 * kPi, 1e-8);
  EXPECT_EQ(cz_index(r.path(64)).twice(), oracle_twice_index({1.0, 1.03}, 10.0));
}

TEST(CrossingFormTest, RotationFormIsAlphaTimesIdentity) {
  for (double alpha : {0.5, 1.0, 2.0, 7.25}) {
    const CrossingForm f = crossing_form(RotationPath({alpha}, 10.0).path(), 0.0);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Matrix>(f.form).eigenvalues();
    ASSERT_EQ(ev.size(), 2);
    EXPECT_NEAR(ev(0), alpha, 1e-9);
    EXPECT_NEAR(ev(1), alpha, 1e-9);
    EXPECT_EQ(signature(ev, 1e-6), 2);
  }
  // Interior crossing of alpha = 2 at t = pi.
  const CrossingForm f = crossing_form(RotationPath({2.0}, 5.0).path(), kPi);
  EXPECT_NEAR((f.form - 2.0 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.0, 1e-6);
}

TEST(CrossingFormTest, TwoBlocksAtTheStart) {
  const CrossingForm f = crossing_form(RotationPath({1.0, 3.0}, 1.0).path(), 0.0);
  Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Matrix>(f.form).eigenvalues();
  ASSERT_EQ(ev.size(), 4);
  EXPECT_NEAR(ev(0), 1.0, 1e-9);
  EXPECT_NEAR(ev(1), 1.0, 1e-9);
  EXPECT_NEAR(ev(2), 3.0, 1e-9);
  EXPECT_NEAR(ev(3), 3.0, 1e-9);
  EXPECT_EQ(signature(ev, 1e-6), 4);
}

TEST(CrossingFormTest, NotACrossing) {
  EXPECT_THROW(crossing_form(RotationPath({1.0}, 4.0).path(), 1.0), NotACrossingError);
}

TEST(CzIndexTest, Examples) {
  EXPECT_EQ(cz_index(RotationPath({1.0}, 2 * kPi * 1.5).path()), HalfInteger::from_integer(3));
  EXPECT_EQ(cz_index(RotationPath({1.0}, 2 * kPi).path()), HalfInteger::from_integer(2));
  EXPECT_EQ(cz_index(RotationPath({1.0, 1.0}, kPi).path()), HalfInteger::from_integer(2));
}

TEST(CzIndexTest, ConstantNonIdentityPathHasIndexZero) {
  const Matrix rot = RotationPath({1.0}, 1.0).at(1.0);
  EXPECT_EQ(cz_index(constant_path(rot, 0.0, 3.0)), HalfInteger::from_integer(0));
}

TEST(CzIndexTest, NumericDerivativeMatchesAnalytic) {
  const RotationPath r({0.7, 2.3}, 12.0);
  const SymplecticPath numeric(2, 0.0, 12.0, [r](double t) { return r.at(t); });
  EXPECT_FALSE(numeric.has_analytic_derivative());
  EXPECT_EQ(cz_index(numeric), cz_index(r.path()));
  for (double t : {0.0, 3.1, 12.0}) {
    EXPECT_LE((numeric.derivative_at(t) - r.derivative_at(t)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(CzIndexTest, DegenerateCrossingIsAnError) {
  // theta(t) = 2 pi + (t - 1)^3 stalls at t = 1, so the crossing form vanishes there.
  const auto theta = [](double t) { return 2 * kPi + std::pow(t - 1.0, 3); };
  const auto dtheta = [](double t) { return 3 * std::pow(t - 1.0, 2); };
  const SymplecticPath p(
      1, 0.5, 1.5,
      [theta](double t) {
        Matrix m(2, 2);
        const double c = std::cos(theta(t)), s = std::sin(theta(t));
        m << c, -s, s, c;
        return m;
      },
      [theta, dtheta](double t) {
        Matrix m(2, 2);
        const double c = std::cos(theta(t)), s = std::sin(theta(t));
        m << -s, -c, c, -s;
        return Matrix(m * dtheta(t));
      });
  EXPECT_THROW(cz_index(p), CzError);
}

TEST(AnalyticTest, Examples) {
  const std::vector<double> one{1.0};
  const std::vector<double> two{1.0, 1.0};
  EXPECT_EQ(cz_rotation_analytic(one, 3 * kPi), HalfInteger::from_integer(3));
  EXPECT_EQ(cz_rotation_analytic(two, kPi), HalfInteger::from_integer(2));
  EXPECT_EQ(cz_rotation_analytic(one, 2 * kPi), HalfInteger::from_integer(2));
}

TEST(AnalyticTest, ExactRotationNumbers) {
  const FieldContext q2(2);
  const std::vector<QuadIrrational> r{q2.make(mpq_class(3, 2)), q2.make(2), q2.sqrt_d()};
  // 1 + 2*1, 2*2, 1 + 2*1
  EXPECT_EQ(cz_rotation_exact(r), HalfInteger::from_integer(10));
}

TEST(PropertyTest, NumericMatchesAnalyticOnRandomRotations) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  int checked = 0;
  while (checked < 60) {
    const double alpha = u(rng), duration = u(rng);
    if (distance_to_integer(duration * alpha / (2 * kPi)) <= 1e-3) continue;
    const std::vector<double> f{alpha};
    const HalfInteger numeric = cz_index(RotationPath(f, duration).path());
    EXPECT_EQ(numeric.twice(), oracle_twice_index(f, duration)) << alpha << " " << duration;
    EXPECT_EQ(numeric, cz_rotation_analytic(f, duration));
    EXPECT_TRUE(numeric.is_integer());  // parity
    ++checked;
  }
}

TEST(PropertyTest, DirectSumIsAdditive) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.1, 6.0);
  int checked = 0;
  while (checked < 30) {
    const double a = u(rng), b = u(rng), duration = u(rng);
    if (distance_to_integer(duration * a / (2 * kPi)) <= 1e-3) continue;
    if (distance_to_integer(duration * b / (2 * kPi)) <= 1e-3) continue;
    const SymplecticPath p = RotationPath({a}, duration).path();
    const SymplecticPath q = RotationPath({b}, duration).path();
    EXPECT_EQ(cz_index(direct_sum(p, q)), cz_index(p) + cz_index(q));
    ++checked;
  }
}

TEST(DirectSumTest, MatchesTwoFrequencyRotation) {
  const SymplecticPath s = direct_sum(RotationPath({1.0}, kPi).path(), RotationPath({2.0}, kPi).path());
  const RotationPath r({1.0, 2.0}, kPi);
  for (double t : {0.0, 0.3, 1.9, kPi}) EXPECT_LE((s.at(t) - r.at(t)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DirectSumTest, DomainMismatchThrows) {
  EXPECT_THROW(direct_sum(RotationPath({1.0}, 1.0).path(), RotationPath({1.0}, 2.0).path()), std::invalid_argument);
}

TEST(DirectSumTest, IdentityFactorAddsZeroAnalytically) {
  // A constant identity factor is a non-isolated crossing for the numeric engine;
  // through the closed form it contributes nothing.
  const std::vector<double> f{1.3};
  EXPECT_EQ(cz_rotation_analytic(f, 4.0).twice(), oracle_twice_index(f, 4.0));
  EXPECT_THROW(cz_index(direct_sum(RotationPath(f, 4.0).path(), constant_path(Matrix::Identity(2, 2), 0.0, 4.0))),
               NonIsolatedCrossingsError);
}

TEST(PropertyTest, ReparametrizationInvariance) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.2, 8.0);
  int checked = 0;
  while (checked < 20) {
    const double alpha = u(rng), duration = u(rng);
    if (distance_to_integer(duration * alpha / (2 * kPi)) <= 1e-3) continue;
    const SymplecticPath p = RotationPath({alpha}, duration).path();
    // phi(s) = T (s + s^2) / 2 on [0, 1]; phi'(0) > 0 keeps the start crossing non-degenerate.
    const SymplecticPath q = reparametrize(
        p, 0.0, 1.0, [duration](double s) { return duration * (s + s * s) / 2; },
        [duration](double s) { return duration * (1 + 2 * s) / 2; });
    EXPECT_EQ(cz_index(q), cz_index(p)) << alpha << " " << duration;
    ++checked;
  }
}

TEST(RotationPathTest, RejectsBadInput) {
  EXPECT_THROW(RotationPath({}, 1.0), std::invalid_argument);
  EXPECT_THROW(RotationPath({1.0}, -1.0), std::invalid_argument);
  EXPECT_THROW(RotationPath({0.0}, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace tamura
