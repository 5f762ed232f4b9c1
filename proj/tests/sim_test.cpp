#include <gtest/gtest.h>

#include <memory>
#include <vector>

#include "listdefect/error.hpp"
#include "listdefect/sim.hpp"

using namespace listdefect;

namespace {

ColoredGraph path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return ColoredGraph(n, e);
}

// Emits at init; never communicates.
struct Silent : NodeProgram {
  void init(NodeContext& ctx) override { ctx.emit(ctx.id()); }
  void step(NodeContext&) override {}
};

// Sends the 64-bit id before round 1, emits the largest id seen in round 1.
struct FloodId : NodeProgram {
  void init(NodeContext& ctx) override { ctx.broadcast(Message().put(ctx.id(), bits::kIdBits)); }
  void step(NodeContext& ctx) override {
    std::int64_t best = ctx.id();
    for (const auto& env : ctx.inbox()) best = std::max(best, MessageReader(env.msg).get());
    ctx.emit(best);
  }
};

// Sends a k-bit payload once and records what arrived in which round.
struct Exchange : NodeProgram {
  explicit Exchange(std::uint64_t k, std::vector<std::vector<std::size_t>>* seen) : k(k), seen(seen) {}
  void init(NodeContext& ctx) override {
    if (!ctx.inbox().empty()) ctx.fail("inbox at init");
  }
  void step(NodeContext& ctx) override {
    for (const auto& env : ctx.inbox()) {
      (void)env;
      (*seen)[ctx.id()].push_back(ctx.round());
    }
    if (ctx.round() == 1) ctx.broadcast(Message().put(ctx.id(), k));
    if (ctx.round() == 2) ctx.emit(0);
  }
  std::uint64_t k;
  std::vector<std::vector<std::size_t>>* seen;
};

struct Never : NodeProgram {
  void step(NodeContext&) override {}
};

struct Faulty : NodeProgram {
  void step(NodeContext& ctx) override { ctx.fail("precondition"); }
};

struct DoubleSend : NodeProgram {
  void step(NodeContext& ctx) override {
    for (int u : ctx.neighbors()) {
      ctx.send(u, Message().put(1, 1));
      ctx.send(u, Message().put(2, 1));
    }
  }
};

}  // namespace

// [TRIVIAL] no communication.
TEST(Engine, ZeroRoundProgram) {
  const auto g = path(5);
  const auto t = run(g, [](int) { return std::make_unique<Silent>(); });
  EXPECT_EQ(t.rounds_elapsed, 0u);
  EXPECT_EQ(t.max_message_bits(), 0u);
  EXPECT_EQ(t.outputs, (std::vector<std::int64_t>{0, 1, 2, 3, 4}));
}

// [DERIVED] a 64-bit id exceeds a 32-bit budget on the first delivery.
TEST(Engine, FloodIdBudgetViolationAtRoundOne) {
  const auto g = path(3);
  RunConfig cfg;
  cfg.bits_per_message = 32;
  try {
    run(g, [](int) { return std::make_unique<FloodId>(); }, cfg);
    FAIL() << "expected BudgetViolation";
  } catch (const BudgetViolation& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetViolation);
    EXPECT_EQ(e.round, 1u);
    EXPECT_EQ(e.bits, 64u);
    EXPECT_EQ(e.budget, 32u);
  }
}

TEST(Engine, FloodIdWithinBudget) {
  const auto g = path(3);
  RunConfig cfg;
  cfg.bits_per_message = 64;
  const auto t = run(g, [](int) { return std::make_unique<FloodId>(); }, cfg);
  EXPECT_EQ(t.rounds_elapsed, 1u);
  EXPECT_EQ(t.outputs, (std::vector<std::int64_t>{1, 2, 2}));
  EXPECT_EQ(t.max_message_bits(), 64u);
}

// [TRIVIAL] identity accounting; messages sent in round r arrive in round r+1.
TEST(Engine, ExchangeAccountingAndIsolation) {
  const auto g = path(4);
  for (std::uint64_t k : {1u, 7u, 33u}) {
    std::vector<std::vector<std::size_t>> seen(4);
    const auto t = run(g, [&](int) { return std::make_unique<Exchange>(k, &seen); });
    EXPECT_EQ(t.max_message_bits(), k);
    EXPECT_EQ(t.rounds_elapsed, 2u);
    for (int v = 0; v < 4; ++v) {
      EXPECT_EQ(seen[v].size(), static_cast<std::size_t>(g.degree(v)));
      for (auto r : seen[v]) EXPECT_EQ(r, 2u);
    }
    // Round stats count deliveries: sent in step 1, delivered and priced in round 2.
    ASSERT_EQ(t.per_round.size(), 2u);
    EXPECT_EQ(t.per_round[0].messages, 0u);
    EXPECT_EQ(t.per_round[1].messages, 6u);
  }
}

TEST(Engine, RoundLimit) {
  const auto g = path(2);
  RunConfig cfg;
  cfg.max_rounds = 5;
  try {
    run(g, [](int) { return std::make_unique<Never>(); }, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RoundLimitExceeded);
  }
}

TEST(Engine, NodeFailureAbortsRun) {
  const auto g = path(2);
  try {
    run(g, [](int) { return std::make_unique<Faulty>(); });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NodeFailure);
    EXPECT_TRUE(is_fail_fast(e.code()));
  }
}

TEST(Engine, OneMessagePerEdgePerRound) {
  const auto g = path(2);
  try {
    run(g, [](int) { return std::make_unique<DoubleSend>(); });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NodeFailure);
  }
}

TEST(Engine, AuditBoundIsEnforcedPerMessage) {
  const auto g = path(3);
  RunConfig cfg;
  cfg.audit_bound = 63;
  try {
    run(g, [](int) { return std::make_unique<FloodId>(); }, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvariantViolation);
  }
  cfg.audit_bound = 64;
  const auto t = run(g, [](int) { return std::make_unique<FloodId>(); }, cfg);
  ASSERT_EQ(t.audits.size(), 1u);
  EXPECT_EQ(t.audits[0].max_bits, 64u);
  EXPECT_EQ(t.audits[0].bound, std::optional<std::uint64_t>(64));
}

// Property: two runs give identical traces.
TEST(Engine, DeterministicTraces) {
  const auto g = path(6);
  auto once = [&]() { return run(g, [](int) { return std::make_unique<FloodId>(); }); };
  const auto a = once(), b = once();
  EXPECT_EQ(a.to_csv(), b.to_csv());
  EXPECT_EQ(a.to_json(), b.to_json());
  EXPECT_EQ(a.outputs, b.outputs);
}

TEST(RoundTrace, AppendShiftsRounds) {
  const auto g = path(3);
  auto t = run(g, [](int) { return std::make_unique<FloodId>(); });
  const auto u = run(g, [](int) { return std::make_unique<FloodId>(); });
  t.append(u);
  EXPECT_EQ(t.rounds_elapsed, 2u);
  ASSERT_EQ(t.per_round.size(), 2u);
  EXPECT_EQ(t.per_round[1].round, 2u);
  EXPECT_EQ(t.audits.size(), 2u);
}

TEST(RoundTrace, CsvColumns) {
  const auto g = path(2);
  const auto t = run(g, [](int) { return std::make_unique<FloodId>(); });
  const auto csv = t.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "round,max_bits,nodes_output_so_far,messages,phase");
  EXPECT_NE(csv.find("\n1,64,2,2,run\n"), std::string::npos);
}

TEST(Message, AdditiveBitsAndReader) {
  Message m;
  m.put(5, 3).put_list({1, 2, 3}, 10).put(-1, 1);
  EXPECT_EQ(m.bits(), 14u);
  MessageReader r(m);
  EXPECT_EQ(r.get(), 5);
  EXPECT_EQ(r.get_list(), (std::vector<std::int64_t>{1, 2, 3}));
  EXPECT_EQ(r.get(), -1);
  EXPECT_TRUE(r.done());
  EXPECT_THROW(r.get(), Error);
}

// [TRIVIAL] canonical costs.
TEST(BitCosts, CanonicalFunctions) {
  EXPECT_EQ(bits::ceil_log2(0), 0u);
  EXPECT_EQ(bits::ceil_log2(1), 0u);
  EXPECT_EQ(bits::ceil_log2(2), 1u);
  EXPECT_EQ(bits::ceil_log2(5), 3u);
  EXPECT_EQ(bits::ceil_log2(256), 8u);
  // Bitmask for long lists, enumeration for short ones.
  EXPECT_EQ(bits::list_bits(256, 4), 32u);
  EXPECT_EQ(bits::list_bits(256, 40), 256u);
  EXPECT_EQ(bits::list_bits(4, 3), 4u);
  EXPECT_EQ(bits::init_color_bits(16), 4u);
  EXPECT_EQ(bits::index_bits(8), 3u);
  EXPECT_EQ(bits::color_bits(10), 4u);
  // ⌈log2 log2 β⌉ + 1 for a power-of-two defect.
  EXPECT_EQ(bits::pow2_defect_bits(16), 3u);
  EXPECT_EQ(bits::pow2_defect_bits(256), 4u);
  EXPECT_EQ(bits::pow2_defect_bits(2), 1u);
}
