#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <random>

#include "listdefect/error.hpp"
#include "listdefect/type_table.hpp"

using namespace listdefect;

namespace {

TableSpec spec_for(std::uint64_t k, std::uint64_t kp, std::uint64_t tau, std::uint64_t tp,
                   std::int64_t g = 0, int classes = 1) {
  TableSpec s;
  s.k_by_class.assign(classes, k);
  s.kprime_by_class.assign(classes, kp);
  s.tau = tau;
  s.tau_prime = tp;
  s.g = g;
  return s;
}

// Independent pairwise check written against the predicate definitions only.
bool pairwise_ok(const TypeTable& t, const TableSpec& s) {
  auto conflict = [&](const ColorSet& a, const ColorSet& b) {
    std::uint64_t sum = 0;
    for (auto x : a)
      for (auto y : b) sum += (x - y <= s.g && y - x <= s.g);
    return sum >= s.tau;
  };
  for (std::size_t i = 0; i < t.types.size(); ++i)
    for (std::size_t j = 0; j < t.types.size(); ++j) {
      if (i == j || t.types[j].cls > t.types[i].cls) continue;
      std::uint64_t hit = 0;
      for (const auto& c : t.families[i])
        hit += std::any_of(t.families[j].begin(), t.families[j].end(),
                           [&](const ColorSet& d) { return conflict(c, d); });
      if (hit >= s.tau_prime) return false;
    }
  return true;
}

struct EnvGuard {
  explicit EnvGuard(const std::string& v) { setenv("LISTDEFECT_CACHE", v.c_str(), 1); }
  ~EnvGuard() { unsetenv("LISTDEFECT_CACHE"); }
};

}  // namespace

// [TRIVIAL] no earlier type: colex-first k′ subsets.
TEST(TypeTable, SingleTypeTakesFirstSubsets) {
  const auto t = build_type_table({{0, {0, 1, 2, 3}, 0}}, spec_for(2, 2, 1, 1));
  ASSERT_EQ(t.families.size(), 1u);
  EXPECT_EQ(t.families[0], (Family{{0, 1}, {0, 2}}));
}

TEST(TypeTable, DisjointListsNeverConflict) {
  std::vector<NodeType> types;
  for (int i = 0; i < 6; ++i) types.push_back({i, {4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3}, 0});
  const auto s = spec_for(2, 3, 1, 1);
  const auto t = build_type_table(types, s);
  EXPECT_TRUE(verify_type_table(t, s));
  EXPECT_TRUE(pairwise_ok(t, s));
}

TEST(TypeTable, OrderAndDedup) {
  std::vector<NodeType> types{{2, {0, 1, 2}, 0}, {1, {0, 1, 2, 3}, 0}, {2, {0, 1, 2}, 0}, {0, {5, 6, 7}, 0}};
  const auto t = build_type_table(types, spec_for(1, 1, 1, 1));
  ASSERT_EQ(t.types.size(), 3u);
  for (std::size_t i = 1; i < t.types.size(); ++i) EXPECT_TRUE(type_before(t.types[i - 1], t.types[i]));
  EXPECT_TRUE(t.index_of({1, {0, 1, 2, 3}, 0}).has_value());
  EXPECT_FALSE(t.index_of({9, {0}, 0}).has_value());
  EXPECT_THROW(t.family({9, {0}, 0}), Error);
}

// [DERIVED] scaled parameters over |C| = 8: every pair checked independently.
TEST(TypeTable, ScaledFullVerification) {
  std::mt19937_64 rng(41);
  const auto s = spec_for(2, 2, 2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<NodeType> types;
    for (int i = 0; i < 2; ++i) {
      ColorSet l;
      for (int c = 0; c < 8; ++c)
        if (std::bernoulli_distribution(0.6)(rng)) l.push_back(c);
      while (l.size() < 3) l.push_back(static_cast<Color>(l.size()) + 20);
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
      types.push_back({i, l, 0});
    }
    const auto t = build_type_table(types, s);
    EXPECT_TRUE(verify_type_table(t, s));
    EXPECT_TRUE(pairwise_ok(t, s));
  }
}

// Property: random small multisets with g in {0, 1}; independent pairwise check.
TEST(TypeTable, RandomMultisetsVerify) {
  std::mt19937_64 rng(42);
  int built = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t g = trial % 2;
    const auto s = spec_for(2, 2, 2, 2, g, 2);  // Ψ reduces to family equality
    std::vector<NodeType> types;
    const int m = 1 + trial % 4;
    for (int i = 0; i < m; ++i) {
      const int r = std::uniform_int_distribution<int>(0, 1)(rng);
      const int base = 3 * std::uniform_int_distribution<int>(0, 1)(rng) + r;
      // Four colors in one residue class mod 3, so g = 1 behaves like g = 0.
      types.push_back({i, {base, base + 3, base + 6, base + 9}, i % 2});
    }
    try {
      const auto t = build_type_table(types, s);
      EXPECT_TRUE(verify_type_table(t, s));
      EXPECT_TRUE(pairwise_ok(t, s));
      ++built;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::GreedyExhausted);
    }
  }
  EXPECT_EQ(built, 200);
}

TEST(TypeTable, DeterministicAndSerializable) {
  std::vector<NodeType> types{{0, {0, 1, 2, 3, 4}, 0}, {1, {1, 2, 3, 4, 5}, 0}, {2, {2, 3, 4, 5, 6}, 0}};
  const auto s = spec_for(2, 2, 2, 1);
  const auto a = build_type_table(types, s);
  std::reverse(types.begin(), types.end());
  const auto b = build_type_table(types, s);
  EXPECT_EQ(a.serialize(), b.serialize());
  const auto c = TypeTable::deserialize(a.serialize());
  EXPECT_EQ(c.types, a.types);
  EXPECT_EQ(c.families, a.families);
  EXPECT_THROW(TypeTable::deserialize("garbage"), Error);
  EXPECT_THROW(TypeTable::deserialize(a.serialize() + "x"), Error);
}

TEST(TypeTable, CacheRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "listdefect_tt_cache_test";
  std::filesystem::remove_all(dir);
  EnvGuard env(dir.string());
  std::vector<NodeType> types{{0, {0, 1, 2, 3}, 0}, {1, {0, 1, 2, 3}, 0}};
  const auto s = spec_for(2, 2, 2, 1);
  const auto a = build_type_table_cached(types, s);
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}), 1);
  const auto b = build_type_table_cached(types, s);
  EXPECT_EQ(a.serialize(), b.serialize());
  EXPECT_EQ(a.serialize(), build_type_table(types, s).serialize());
  EXPECT_NE(table_key(types, s), table_key(types, spec_for(2, 2, 2, 2)));
  std::filesystem::remove_all(dir);
}

// [DERIVED] three identical 3-element lists with k = 2, k′ = 1, τ = 1 use up the
// three 2-subsets pairwise-intersecting, so the second type already fails.
TEST(TypeTable, GreedyExhausted) {
  std::vector<NodeType> types{{0, {0, 1, 2}, 0}, {1, {0, 1, 2}, 0}};
  try {
    build_type_table(types, spec_for(2, 1, 1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GreedyExhausted);
  }
}

TEST(TypeTable, SubsetCapExceeded) {
  ColorSet l;
  for (int c = 0; c < 40; ++c) l.push_back(c);
  auto s = spec_for(5, 1, 1, 1);
  s.subset_cap = 1000;
  try {
    build_type_table({{0, l, 0}}, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CapExceeded);
  }
}
