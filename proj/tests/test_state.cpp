#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "support.hpp"
#include "wlocc/state.hpp"

using namespace wlocc;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::ParseError;
}

}  // namespace

TEST(MakeState, WStateHasZeroX0) {
  const auto x = make_state({1.0 / 3, 1.0 / 3, 1.0 / 3});
  EXPECT_NEAR(x.x0(), 0.0, 1e-15);
  EXPECT_EQ(x.size(), 3u);
}

TEST(MakeState, AllZeroIsProduct) {
  const auto x = make_state({0.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(x.x0(), 1.0);
  EXPECT_TRUE(x.is_product());
}

TEST(MakeState, Rejections) {
  EXPECT_EQ(code_of([] { make_state({0.6, 0.6}); }), ErrorCode::SumExceedsOne);
  EXPECT_EQ(code_of([] { make_state({-0.1, 0.2}); }), ErrorCode::NegativeComponent);
  EXPECT_EQ(code_of([] { make_state(std::vector<double>{}); }), ErrorCode::EmptyVector);
  EXPECT_EQ(code_of([] { make_state({NAN, 0.2}); }), ErrorCode::NonFiniteComponent);
}

TEST(MakeState, SumWithinEpsilonAccepted) {
  EXPECT_NO_THROW(make_state({0.5, 0.5 + 5e-13}));
  EXPECT_EQ(make_state({0.5, 0.5 + 5e-13}).x0(), 0.0);
}

TEST(RatioProfile, WorkedExampleOne) {
  const auto p = ratio_profile(make_state({0.2, 0.3, 0.4}), make_state({0.25, 0.3, 0.35}));
  EXPECT_NEAR(p.r[0], 0.8, 1e-15);
  EXPECT_NEAR(p.r[1], 1.0, 1e-15);
  EXPECT_NEAR(p.r[2], 8.0 / 7.0, 1e-15);
  EXPECT_NEAR(p.r0, 1.0, 1e-12);
  EXPECT_EQ(p.perm, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(RatioProfile, WorkedExampleTwo) {
  const auto p = ratio_profile(make_state({0.3, 0.3, 0.3}), make_state({0.32, 0.33, 0.30}));
  EXPECT_NEAR(p.r[0], 0.9375, 1e-15);
  EXPECT_NEAR(p.r[1], 0.909090909090909, 1e-14);
  EXPECT_NEAR(p.r[2], 1.0, 1e-15);
  EXPECT_NEAR(p.r0, 2.0, 1e-12);
  EXPECT_EQ(p.perm, (std::vector<std::size_t>{1, 0, 2}));
}

TEST(RatioProfile, IdentityAndTies) {
  const auto x = make_state({0.25, 0.25, 0.25});
  const auto p = ratio_profile(x, x);
  for (double r : p.r) EXPECT_DOUBLE_EQ(r, 1.0);
  EXPECT_DOUBLE_EQ(p.r0, 1.0);
  EXPECT_EQ(p.perm, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(RatioProfile, ZeroTargetsAreInfiniteAndRecorded) {
  const auto p = ratio_profile(make_state({0.2, 0.3, 0.4}), make_state({0.5, 0.0, 0.4}));
  EXPECT_TRUE(std::isinf(p.r[1]));
  EXPECT_EQ(p.zero_targets, (std::vector<std::size_t>{1}));
  EXPECT_EQ(p.perm.back(), 1u);
}

TEST(RatioProfile, DimensionMismatch) {
  EXPECT_EQ(code_of([] { ratio_profile(make_state({0.2, 0.3}), make_state({0.2, 0.3, 0.1})); }),
            ErrorCode::DimensionMismatch);
}

TEST(Statevector, WStateAmplitudes) {
  const auto v = to_statevector(w_state(3));
  const double a = 1.0 / std::sqrt(3.0);
  for (std::size_t i = 0; i < 8; ++i) {
    const bool weight_one = i == 1 || i == 2 || i == 4;
    EXPECT_NEAR(std::abs(v[i]), weight_one ? a : 0.0, 1e-15) << i;
  }
}

TEST(Statevector, ProductOfTwo) {
  const auto v = to_statevector(make_state({0.0, 0.0}));
  EXPECT_DOUBLE_EQ(v[0].real(), 1.0);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(v[i], complex(0.0));
}

TEST(Statevector, BasisOrderPartyOneIsMostSignificant) {
  const auto v = to_statevector(make_state({0.2, 0.3, 0.4}));
  const double expect[8] = {std::sqrt(0.1), std::sqrt(0.4), std::sqrt(0.3), 0, std::sqrt(0.2), 0, 0, 0};
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(v[i].real(), expect[i], 1e-15) << i;
}

TEST(Statevector, HeavyAmplitudeRejected) {
  std::vector<complex> amp(8, 0.0);
  amp[0] = std::sqrt(0.5);
  amp[3] = 0.5;  // |011>
  amp[4] = 0.5;
  const Statevector v(3, amp);
  EXPECT_EQ(code_of([&] { components_from_statevector(v); }), ErrorCode::NotWClassForm);
}

TEST(Statevector, NormChecked) {
  EXPECT_THROW(Statevector(2, std::vector<complex>{1.0, 1.0, 0.0, 0.0}), Error);
  EXPECT_THROW(Statevector(2, std::vector<complex>{1.0, 0.0}), Error);
}

TEST(Statevector, RoundTripWorked) {
  const auto x = make_state({0.2, 0.3, 0.4});
  const auto back = components_from_statevector(to_statevector(x));
  EXPECT_LE(max_component_diff(x, back), 1e-12);
  EXPECT_LE(max_component_diff(w_state(3), components_from_statevector(to_statevector(w_state(3)))),
            1e-15);
}

// --- properties --------------------------------------------------------------

TEST(StateProperty, RoundTripAndNorm) {
  wt::Gen g(101);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = g.index(2, 10);
    const auto x = g.state(n, 0.2, 0.0);
    const auto v = to_statevector(x);
    double norm = 0.0;
    for (const auto& a : v.amplitudes()) norm += std::norm(a);
    ASSERT_NEAR(norm, 1.0, 1e-12);
    ASSERT_LE(max_component_diff(components_from_statevector(v), x), 1e-12);
  }
}

TEST(StateProperty, PhasesAreDiscarded) {
  wt::Gen g(102);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = g.index(2, 6);
    const auto x = g.state(n);
    std::vector<complex> amp = to_statevector(x).amplitudes();
    for (auto& a : amp) a *= std::polar(1.0, g.uniform(-3.0, 3.0));
    ASSERT_LE(max_component_diff(components_from_statevector(Statevector(n, amp)), x), 1e-12);
  }
}

TEST(StateProperty, RatioProfilePermutationEquivariant) {
  wt::Gen g(103);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = g.index(2, 8);
    const auto p = wt::random_pair(g, n);
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), g.engine());
    std::vector<double> xs(n), ys(n);
    for (std::size_t k = 0; k < n; ++k) {
      xs[k] = p.x[sigma[k]];
      ys[k] = p.y[sigma[k]];
    }
    const auto a = ratio_profile(p.x, p.y);
    const auto b = ratio_profile(make_state(xs), make_state(ys));
    for (std::size_t k = 0; k < n; ++k) ASSERT_NEAR(b.r[k], a.r[sigma[k]], 1e-15);
    for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(b.sorted(i), a.sorted(i), 1e-15);
    ASSERT_NEAR(a.r0, b.r0, 1e-9);
  }
}

TEST(StateProperty, SortedProfileIsAscending) {
  wt::Gen g(104);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = g.index(2, 8);
    const auto p = wt::random_pair(g, n);
    const auto prof = ratio_profile(p.x, p.y);
    for (std::size_t i = 1; i < n; ++i) ASSERT_LE(prof.sorted(i - 1), prof.sorted(i));
  }
}
