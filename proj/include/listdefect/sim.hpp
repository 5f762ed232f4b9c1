#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "listdefect/graph.hpp"

namespace listdefect {

// Canonical bit costs. Every message field is priced by one of these.
namespace bits {
std::uint64_t ceil_log2(std::uint64_t x);  // 0 for x <= 1
// min(|C|, Λ·⌈log2 |C|⌉): bitmask or enumeration, whichever is shorter.
std::uint64_t list_bits(std::uint64_t space_size, std::uint64_t lambda);
// Power-of-two defect below beta, sent as its exponent.
std::uint64_t pow2_defect_bits(std::uint64_t beta);
std::uint64_t index_bits(std::uint64_t kprime);
std::uint64_t init_color_bits(std::uint64_t m);
std::uint64_t color_bits(std::uint64_t space_size);
inline constexpr std::uint64_t kIdBits = 64;
inline constexpr std::uint64_t kTagBits = 2;
}  // namespace bits

// Payload of integer fields with an additive bit cost.
class Message {
 public:
  Message& put(std::int64_t value, std::uint64_t cost);
  // Length-prefixed; the whole list is charged `cost`.
  Message& put_list(const std::vector<std::int64_t>& values, std::uint64_t cost);
  std::uint64_t bits() const { return bits_; }
  const std::vector<std::int64_t>& fields() const { return fields_; }

 private:
  std::vector<std::int64_t> fields_;
  std::uint64_t bits_ = 0;
};

class MessageReader {
 public:
  explicit MessageReader(const Message& m) : m_(&m) {}
  std::int64_t get();
  std::vector<std::int64_t> get_list();
  bool done() const { return pos_ >= m_->fields().size(); }

 private:
  const Message* m_;
  std::size_t pos_ = 0;
};

struct Envelope {
  int from;
  Message msg;
};

class Engine;

class NodeContext {
 public:
  int id() const { return v_; }
  std::size_t round() const { return round_; }
  const ColoredGraph& graph() const;
  std::span<const int> neighbors() const;
  // Messages from the previous round, ordered by sender id.
  const std::vector<Envelope>& inbox() const { return *inbox_; }
  // At most one message per neighbor per round.
  void send(int to, Message msg);
  void broadcast(const Message& msg);
  void emit(std::int64_t output);
  bool has_output() const;
  [[noreturn]] void fail(const std::string& reason) const;

 private:
  friend class Engine;
  NodeContext(Engine& e, int v, std::size_t round, const std::vector<Envelope>* inbox)
      : engine_(&e), v_(v), round_(round), inbox_(inbox) {}
  Engine* engine_;
  int v_;
  std::size_t round_;
  const std::vector<Envelope>* inbox_;
};

// One instance per node; it owns all of that node's state.
class NodeProgram {
 public:
  virtual ~NodeProgram() = default;
  virtual void init(NodeContext& ctx) { (void)ctx; }
  virtual void step(NodeContext& ctx) = 0;
};

using ProgramFactory = std::function<std::unique_ptr<NodeProgram>(int v)>;

struct RunConfig {
  std::size_t max_rounds = 100000;
  std::optional<std::uint64_t> bits_per_message;  // CONGEST budget; none means LOCAL
  // Shape bound from the active sub-instance; exceeding it is an invariant failure.
  std::optional<std::uint64_t> audit_bound;
  std::string label = "run";
};

struct RoundStat {
  std::size_t round;
  std::uint64_t max_bits;
  std::size_t outputs_so_far;
  std::size_t messages;
  std::string phase;
};

struct RunAudit {
  std::string label;
  std::size_t rounds;
  std::uint64_t max_bits;
  std::optional<std::uint64_t> bound;
};

struct RoundTrace {
  std::size_t rounds_elapsed = 0;
  std::vector<RoundStat> per_round;
  std::vector<std::int64_t> outputs;
  std::vector<RunAudit> audits;

  std::uint64_t max_message_bits() const;
  // Sequential composition: rounds of `next` follow this trace's rounds.
  void append(const RoundTrace& next);
  // round,max_bits,nodes_output_so_far,messages,phase
  std::string to_csv() const;
  std::string to_json() const;
};

RoundTrace run(const ColoredGraph& graph, const ProgramFactory& factory,
               const RunConfig& config = {});

}  // namespace listdefect

namespace listdefect {

// Result shape shared by every distributed algorithm.
struct AlgorithmRun {
  ColoringOutput output;
  RoundTrace trace;
  std::vector<std::string> notes;  // effective parameters and decisions, for reports
};

}  // namespace listdefect
