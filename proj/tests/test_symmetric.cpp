#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "support.hpp"
#include "wlocc/oracle.hpp"
#include "wlocc/symmetric.hpp"

using namespace wlocc;
using namespace wlocc::symmetric;

namespace {

// Success probability of converting |s> to W_3 with the filter applied by
// the listed parties, read straight off the statevector. Returns -1 when the
// post-state is not W_3 (or the filter is not a valid Kraus element).
double oracle_conversion(double s, const Matrix2& a, std::initializer_list<std::size_t> parties) {
  if (largest_eigenvalue(gram(a)) > 1.0 + 1e-9) return -1.0;
  Statevector v = to_statevector(symmetric_state(s));
  double prob = 1.0;
  for (std::size_t k : parties) {
    const LocalOutcome out = apply_local(v, {k, a});
    if (out.probability <= 1e-15) return -1.0;
    prob *= out.probability;
    v = out.normalized();
  }
  try {
    if (!components_match(components_from_statevector(v, 1e-7), w_state(3), 1e-7)) return -1.0;
  } catch (const Error&) {
    return -1.0;
  }
  return prob;
}

/// Sweep oracle: a on a uniform grid, b from |000> cancellation, c on the
/// validity boundary for the symmetric case and c = a for the single-party
/// case; the maximum is taken over statevector-evaluated probabilities.
double sweep(double s, bool symmetric_filter, std::size_t points = 20000) {
  double best = 0.0;
  for (std::size_t i = 1; i <= points; ++i) {
    const double a = static_cast<double>(i) / static_cast<double>(points);
    double b, c;
    if (symmetric_filter) {
      b = -a * std::sqrt(1.0 - s) / std::sqrt(3.0 * s);
      const double c2 = a < 1.0 ? 1.0 - b * b / (1.0 - a * a) : (b == 0.0 ? 1.0 : -1.0);
      if (c2 < 0.0) continue;
      c = std::sqrt(c2);
    } else {
      b = -a * std::sqrt(3.0 * (1.0 - s) / s);
      c = a;
    }
    const Matrix2 m = Matrix2::upper(a, b, c);
    const double p = symmetric_filter ? oracle_conversion(s, m, {0, 1, 2}) : oracle_conversion(s, m, {0});
    best = std::max(best, p);
  }
  return best;
}

}  // namespace

TEST(Beta, Values) {
  EXPECT_DOUBLE_EQ(beta(0.0), 3.0);
  EXPECT_DOUBLE_EQ(beta(1.0), 0.0);
  EXPECT_NEAR(beta(0.75), 2.25, 1e-15);
  EXPECT_THROW(beta(-0.1), Error);
  EXPECT_THROW(beta(1.1), Error);
}

TEST(PMaxClosed, Values) {
  EXPECT_DOUBLE_EQ(p_max_closed(1.0), 1.0);
  EXPECT_DOUBLE_EQ(p_max_closed(0.0), 0.0);
  EXPECT_NEAR(p_max_closed(0.75), 0.286474508438, 1e-11);
  EXPECT_NEAR(p_max_closed(0.9), (2.1 - std::sqrt(1.17)) / 2.0, 1e-15);
  EXPECT_NEAR(p_max_closed(0.9), 0.509167, 1e-6);
}

TEST(QMaxClosed, Values) {
  EXPECT_DOUBLE_EQ(q_max_closed(1.0), 1.0);
  EXPECT_DOUBLE_EQ(q_max_closed(0.0), 0.0);
  EXPECT_NEAR(q_max_closed(0.75), 0.28125, 1e-15);
  EXPECT_NEAR(q_max_closed(0.9), 110.592 / 215.04, 1e-14);
  EXPECT_THROW(q_max_closed(1.0 + 1e-9), Error);
}

TEST(QMaxClosed, ContinuousIntoOne) {
  EXPECT_NEAR(q_max_closed(1.0 - 1e-10), 1.0, 1e-4);
  EXPECT_LT(q_max_closed(1.0 - 1e-6), 1.0);
}

TEST(Optimizers, WorkedValues) {
  EXPECT_NEAR(optimize_single_party(0.75).value, 0.286474508438, 1e-9);
  EXPECT_NEAR(optimize_single_party(0.9).value, 0.509167, 1e-6);
  EXPECT_NEAR(optimize_symmetric_filter(0.75).value, 0.28125, 1e-9);
  EXPECT_NEAR(optimize_symmetric_filter(0.9).value, 0.514286, 1e-6);
}

TEST(Optimizers, IdentityAtOne) {
  const auto p = optimize_single_party(1.0);
  EXPECT_NEAR(p.value, 1.0, 1e-12);
  EXPECT_NEAR(p.params.a, 1.0, 1e-12);
  EXPECT_NEAR(p.params.c, 1.0, 1e-12);
  EXPECT_NEAR(p.params.b, 0.0, 1e-12);
  EXPECT_NEAR(optimize_symmetric_filter(1.0).value, 1.0, 1e-12);
}

TEST(Optimizers, DomainErrors) {
  EXPECT_THROW(optimize_single_party(0.0), Error);
  EXPECT_THROW(optimize_symmetric_filter(-0.5), Error);
  EXPECT_THROW(optimize_symmetric_filter(1.5), Error);
}

TEST(Optimizers, AgreeWithSweepOracle) {
  for (double s : {0.2, 0.5, 0.75, 0.9}) {
    EXPECT_NEAR(optimize_single_party(s).value, sweep(s, false), 1e-4) << s;
    EXPECT_NEAR(optimize_symmetric_filter(s).value, sweep(s, true), 1e-4) << s;
  }
}

TEST(CrossingPoint, MatchesSymbolicValue) {
  const double s = crossing_point();
  EXPECT_NEAR(s, 3.0 / 61.0 * (3.0 + 8.0 * std::sqrt(3.0)), 1e-10);
  EXPECT_NEAR(s, 0.8290036, 1e-6);
  EXPECT_NEAR(p_max_closed(0.75) - q_max_closed(0.75), 0.005225, 1e-6);
  EXPECT_NEAR(p_max_closed(0.9) - q_max_closed(0.9), -0.005118, 1e-6);
}

TEST(DifferenceProfile, CoarseGrid) {
  const auto rows = difference_profile(0.25);
  ASSERT_EQ(rows.size(), 5u);
  const double expect_s[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(rows[i].s, expect_s[i]);
  EXPECT_EQ(rows.front().diff, 0.0);
  EXPECT_EQ(rows.back().diff, 0.0);
  EXPECT_NEAR(rows[3].p, 0.286474, 1e-6);
  EXPECT_NEAR(rows[3].q, 0.281250, 1e-6);
  EXPECT_NEAR(rows[3].diff, 0.005225, 1e-6);
}

TEST(DifferenceProfile, FineGrid) {
  const auto rows = difference_profile(0.001);
  ASSERT_EQ(rows.size(), 1001u);
  EXPECT_DOUBLE_EQ(rows.back().s, 1.0);
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.diff));
  EXPECT_LE(worst, 0.014);
  EXPECT_NEAR(worst, 0.01365, 5e-5);
  EXPECT_EQ(sign_changes(rows), 1u);
  EXPECT_EQ(difference_profile(0.5).size(), 3u);
}

TEST(DifferenceProfile, BadStep) {
  EXPECT_THROW(difference_profile(0.0), Error);
  EXPECT_THROW(difference_profile(-0.1), Error);
  EXPECT_THROW(difference_profile(1.5), Error);
}

TEST(Csv, HeaderAndPrecision) {
  std::ostringstream os;
  write_csv(os, difference_profile(0.25));
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "s,p_max,q_max,diff");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0,0,0");
  std::getline(in, line);
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_EQ(line.rfind("0.75,0.286474508,0.28125,0.00522450844", 0), 0u) << line;
}

// --- properties ---------------------------------------------------------------------

TEST(SymmetricProperty, OptimizersMatchClosedForms) {
  for (int i = 1; i <= 19; ++i) {
    const double s = 0.05 * i;
    const auto p = optimize_single_party(s);
    const auto q = optimize_symmetric_filter(s);
    ASSERT_NEAR(p.value, p_max_closed(s), 1e-6) << s;
    ASSERT_NEAR(q.value, q_max_closed(s), 1e-6) << s;
    EXPECT_EQ(p.local_maxima, 1u) << s;
    EXPECT_EQ(q.local_maxima, 1u) << s;
  }
}

TEST(SymmetricProperty, ArgmaxFiltersValidAndOracleConfirmed) {
  for (int i = 1; i <= 19; ++i) {
    const double s = 0.05 * i;
    for (bool sym : {false, true}) {
      const auto r = sym ? optimize_symmetric_filter(s) : optimize_single_party(s);
      const FilterParams& f = r.params;
      const Matrix2 a = f.matrix();
      ASSERT_NEAR(largest_eigenvalue(gram(a)), 1.0, 1e-8) << s;
      ASSERT_NEAR(f.b * f.b, (1.0 - f.a * f.a) * (1.0 - f.c * f.c), 1e-10) << s;
      ASSERT_LE(f.b, 0.0);
      const double p = sym ? oracle_conversion(s, a, {0, 1, 2}) : oracle_conversion(s, a, {0});
      ASSERT_NEAR(p, r.value, 1e-8) << s << (sym ? " symmetric" : " single");
    }
  }
}

TEST(SymmetricProperty, CurvesMonotone) {
  const auto rows = difference_profile(0.001);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_GE(rows[i].p, rows[i - 1].p - 1e-15);
    ASSERT_GE(rows[i].q, rows[i - 1].q - 1e-15);
  }
}
