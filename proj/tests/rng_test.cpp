#include <cstdint>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "gauss_ts/rng.hpp"

namespace gauss_ts {
namespace {

// Known-answer vectors from the Random123 distribution (kat_vectors).
TEST(Philox, KnownAnswers) {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  EXPECT_EQ(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}),
            (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                 K{0xffffffff, 0xffffffff}),
            (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                 K{0xa4093822, 0x299f31d0}),
            (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngStream, SameIdentityReplaysExactly) {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.next_u64(), b.next_u64());
    ASSERT_EQ(a.standard_normal(), b.standard_normal());
  }
  RngStream c = a;
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.uniform(), c.uniform());
}

TEST(RngStream, DistinctStreamsAndForksDiffer) {
  std::set<std::uint64_t> first;
  for (std::uint64_t s = 0; s < 50; ++s) {
    first.insert(RngStream(1, s).next_u64());
    first.insert(RngStream(2, s).next_u64());
    first.insert(RngStream(1, s).fork(1).next_u64());
    first.insert(RngStream(1, s).fork(2).next_u64());
  }
  EXPECT_EQ(first.size(), 200u);
}

TEST(RngStream, UniformRanges) {
  RngStream r(3, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double o = r.uniform_open();
    ASSERT_GT(o, 0.0);
    ASSERT_LT(o, 1.0);
  }
}

TEST(RngStream, UniformIndexIsUnbiased) {
  RngStream r(5, 0);
  constexpr int kN = 7;
  constexpr int kDraws = 700000;
  std::vector<int> counts(kN, 0);
  for (int i = 0; i < kDraws; ++i) ++counts[r.uniform_index(kN)];
  const double p = 1.0 / kN;
  const double se = std::sqrt(p * (1 - p) / kDraws);
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / kDraws, p, 4 * se);
}

}  // namespace
}  // namespace gauss_ts
