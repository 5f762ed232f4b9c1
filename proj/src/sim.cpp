#include "listdefect/sim.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include <json.hpp>

#include "listdefect/error.hpp"

namespace listdefect {

namespace bits {

std::uint64_t ceil_log2(std::uint64_t x) {
  if (x <= 1) return 0;
  return 64 - std::countl_zero(x - 1);
}

std::uint64_t list_bits(std::uint64_t space_size, std::uint64_t lambda) {
  return std::min(space_size, lambda * ceil_log2(space_size));
}

std::uint64_t pow2_defect_bits(std::uint64_t beta) {
  const auto e = ceil_log2(beta);
  return e <= 1 ? 1 : ceil_log2(e) + 1;
}

std::uint64_t index_bits(std::uint64_t kprime) { return ceil_log2(kprime); }
std::uint64_t init_color_bits(std::uint64_t m) { return ceil_log2(m); }
std::uint64_t color_bits(std::uint64_t space_size) { return ceil_log2(space_size); }

}  // namespace bits

Message& Message::put(std::int64_t value, std::uint64_t cost) {
  fields_.push_back(value);
  bits_ += cost;
  return *this;
}

Message& Message::put_list(const std::vector<std::int64_t>& values, std::uint64_t cost) {
  fields_.push_back(static_cast<std::int64_t>(values.size()));
  fields_.insert(fields_.end(), values.begin(), values.end());
  bits_ += cost;
  return *this;
}

std::int64_t MessageReader::get() {
  if (done()) fail(ErrorCode::InvariantViolation, "message read past end");
  return m_->fields()[pos_++];
}

std::vector<std::int64_t> MessageReader::get_list() {
  const auto len = get();
  if (len < 0 || pos_ + static_cast<std::size_t>(len) > m_->fields().size())
    fail(ErrorCode::InvariantViolation, "malformed list field");
  std::vector<std::int64_t> out(m_->fields().begin() + pos_, m_->fields().begin() + pos_ + len);
  pos_ += len;
  return out;
}

class Engine {
 public:
  Engine(const ColoredGraph& g, const RunConfig& cfg) : g_(g), cfg_(cfg) {
    outbox_.resize(g.n());
    has_output_.assign(g.n(), false);
    outputs_.assign(g.n(), kNoColor);
  }

  RoundTrace run(const ProgramFactory& factory) {
    const int n = g_.n();
    std::vector<std::unique_ptr<NodeProgram>> programs;
    programs.reserve(n);
    for (int v = 0; v < n; ++v) programs.push_back(factory(v));
    const std::vector<Envelope> empty;
    for (int v = 0; v < n; ++v) {
      NodeContext ctx(*this, v, 0, &empty);
      programs[v]->init(ctx);
    }
    RoundTrace trace;
    std::size_t round = 0;
    std::uint64_t run_max = 0;
    while (output_count_ < static_cast<std::size_t>(n)) {
      ++round;
      if (round > cfg_.max_rounds)
        fail(ErrorCode::RoundLimitExceeded,
             cfg_.label + " exceeded " + std::to_string(cfg_.max_rounds) + " rounds");
      std::vector<std::vector<Envelope>> inbox(n);
      std::uint64_t max_bits = 0;
      std::size_t messages = 0;
      for (int from = 0; from < n; ++from) {
        for (auto& [to, msg] : outbox_[from]) {
          const auto b = msg.bits();
          if (cfg_.bits_per_message && b > *cfg_.bits_per_message)
            throw BudgetViolation(from, to, round, b, *cfg_.bits_per_message);
          if (cfg_.audit_bound && b > *cfg_.audit_bound)
            fail(ErrorCode::InvariantViolation,
                 cfg_.label + ": message " + std::to_string(from) + "->" + std::to_string(to) +
                     " carries " + std::to_string(b) + " bits, shape bound " +
                     std::to_string(*cfg_.audit_bound));
          max_bits = std::max(max_bits, b);
          ++messages;
          inbox[to].push_back({from, std::move(msg)});
        }
        outbox_[from].clear();
      }
      for (int v = 0; v < n; ++v) {
        NodeContext ctx(*this, v, round, &inbox[v]);
        programs[v]->step(ctx);
      }
      run_max = std::max(run_max, max_bits);
      trace.per_round.push_back({round, max_bits, output_count_, messages, cfg_.label});
    }
    trace.rounds_elapsed = round;
    trace.outputs = outputs_;
    trace.audits.push_back({cfg_.label, round, run_max, cfg_.audit_bound});
    return trace;
  }

  const ColoredGraph& g_;
  const RunConfig& cfg_;
  std::vector<std::vector<std::pair<int, Message>>> outbox_;
  std::vector<bool> has_output_;
  std::vector<std::int64_t> outputs_;
  std::size_t output_count_ = 0;
};

const ColoredGraph& NodeContext::graph() const { return engine_->g_; }

std::span<const int> NodeContext::neighbors() const { return engine_->g_.neighbors(v_); }

void NodeContext::send(int to, Message msg) {
  auto nb = neighbors();
  if (!std::binary_search(nb.begin(), nb.end(), to))
    fail("send to non-neighbor " + std::to_string(to));
  auto& box = engine_->outbox_[v_];
  for (const auto& [t, m] : box)
    if (t == to) this->fail("two messages on one edge in one round");
  box.emplace_back(to, std::move(msg));
}

void NodeContext::broadcast(const Message& msg) {
  for (int u : neighbors()) send(u, msg);
}

void NodeContext::emit(std::int64_t output) {
  if (engine_->has_output_[v_]) this->fail("output emitted twice");
  engine_->has_output_[v_] = true;
  engine_->outputs_[v_] = output;
  ++engine_->output_count_;
}

bool NodeContext::has_output() const { return engine_->has_output_[v_]; }

void NodeContext::fail(const std::string& reason) const {
  listdefect::fail(ErrorCode::NodeFailure, "node " + std::to_string(v_) + " round " +
                                               std::to_string(round_) + ": " + reason);
}

RoundTrace run(const ColoredGraph& graph, const ProgramFactory& factory, const RunConfig& config) {
  Engine engine(graph, config);
  return engine.run(factory);
}

std::uint64_t RoundTrace::max_message_bits() const {
  std::uint64_t b = 0;
  for (const auto& r : per_round) b = std::max(b, r.max_bits);
  return b;
}

void RoundTrace::append(const RoundTrace& next) {
  for (auto r : next.per_round) {
    r.round += rounds_elapsed;
    per_round.push_back(std::move(r));
  }
  rounds_elapsed += next.rounds_elapsed;
  audits.insert(audits.end(), next.audits.begin(), next.audits.end());
}

std::string RoundTrace::to_csv() const {
  std::ostringstream out;
  out << "round,max_bits,nodes_output_so_far,messages,phase\n";
  for (const auto& r : per_round)
    out << r.round << ',' << r.max_bits << ',' << r.outputs_so_far << ',' << r.messages << ','
        << r.phase << '\n';
  return out.str();
}

std::string RoundTrace::to_json() const {
  nlohmann::json doc;
  doc["rounds_elapsed"] = rounds_elapsed;
  doc["max_message_bits"] = max_message_bits();
  auto rounds = nlohmann::json::array();
  for (const auto& r : per_round)
    rounds.push_back({{"round", r.round},
                      {"max_bits", r.max_bits},
                      {"outputs_so_far", r.outputs_so_far},
                      {"messages", r.messages},
                      {"phase", r.phase}});
  doc["per_round"] = rounds;
  auto audits_json = nlohmann::json::array();
  for (const auto& a : audits) {
    nlohmann::json j{{"label", a.label}, {"rounds", a.rounds}, {"max_bits", a.max_bits}};
    if (a.bound) j["bound"] = *a.bound;
    audits_json.push_back(j);
  }
  doc["runs"] = audits_json;
  doc["outputs"] = outputs;
  return doc.dump();
}

}  // namespace listdefect
