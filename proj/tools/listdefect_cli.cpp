#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "listdefect/error.hpp"
#include "listdefect/framework.hpp"
#include "listdefect/generate.hpp"
#include "listdefect/instance_io.hpp"
#include "listdefect/linial.hpp"
#include "listdefect/oldc_basic.hpp"
#include "listdefect/oldc_main.hpp"
#include "listdefect/seq_oracle.hpp"
#include "listdefect/space_reduction.hpp"

namespace ld = listdefect;
using nlohmann::json;

namespace {

constexpr int kExitValid = 0;
constexpr int kExitError = 1;
constexpr int kExitFailFast = 2;

struct RunOptions {
  std::string algorithm = "seq";
  std::optional<double> alpha;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> tau;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> taubar;
  std::optional<std::uint64_t> h_prime;
  std::optional<std::uint64_t> p;
  std::optional<int> r;
  double kappa = 1.0;
  std::string inner = "main-oldc";
  std::optional<std::uint64_t> bits_budget;
  std::size_t max_rounds = 100000;
  std::uint64_t seed = 1;
};

struct Outcome {
  int exit_code = kExitError;
  std::string status;  // valid, fail-fast, invalid, error
  json report;
  ld::RoundTrace trace;
  std::optional<ld::ColoringOutput> coloring;
  std::string stages_csv;
};

std::optional<std::pair<std::uint64_t, std::uint64_t>> parse_pair(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto comma = text.find(',');
  const auto a = std::stoull(text.substr(0, comma));
  const auto b = comma == std::string::npos ? a : std::stoull(text.substr(comma + 1));
  return std::make_pair(a, b);
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

bool proper(const ld::ColoredGraph& g, const std::vector<ld::Color>& c) {
  for (const auto& e : g.edges())
    if (c[e.u] == c[e.v]) return false;
  return true;
}

ld::MainParams main_params(const RunOptions& o, const ld::RunConfig& cfg) {
  ld::MainParams p;
  if (o.alpha) p.alpha = *o.alpha;
  p.tau_override = o.tau;
  p.taubar_override = o.taubar;
  p.hprime_override = o.h_prime;
  p.run = cfg;
  return p;
}

ld::InnerSolver inner_solver(const RunOptions& o, const ld::RunConfig& cfg) {
  if (o.inner == "main-oldc") return ld::main_oldc_inner(main_params(o, cfg), o.kappa);
  if (o.inner == "oldc-basic") {
    ld::OldcParams p;
    if (o.alpha) p.alpha = *o.alpha;
    p.tau_override = o.tau;
    p.run = cfg;
    return ld::multi_defect_inner(p, o.kappa);
  }
  if (o.inner == "seq") return ld::sequential_inner();
  ld::fail(ld::ErrorCode::InvalidArgument, "unknown inner solver '" + o.inner + "'");
}

Outcome execute(const ld::Instance& input, const RunOptions& o) {
  Outcome out;
  out.report["algorithm"] = o.algorithm;
  ld::ColoredGraph graph = input.graph;
  const ld::LdcInstance& inst = input.inst;
  ld::RunConfig cfg;
  cfg.max_rounds = o.max_rounds;
  cfg.bits_per_message = o.bits_budget;
  std::vector<std::string> notes;
  auto need_orientation = [&]() {
    if (!graph.has_orientation()) {
      graph.orient_by_id();
      notes.push_back("instance had no orientation; oriented by node id");
    }
  };
  try {
    ld::AlgorithmRun run;
    bool palette_output = false;
    const auto& a = o.algorithm;
    if (a == "seq") {
      auto r = ld::sequential_ldc(graph, inst);
      run.output = r.output;
      notes.push_back("recolorings=" + std::to_string(r.recolorings));
    } else if (a == "seq-arb") {
      run.output = ld::sequential_arbdefective(graph, inst).output;
    } else if (a == "oracle") {
      auto r = ld::exhaustive_solve(graph, inst);
      out.report["verdict"] = r.sat ? "SAT" : "UNSAT";
      out.report["leaves"] = r.leaves;
      if (!r.sat) {
        out.exit_code = kExitValid;
        out.status = "valid";
        out.report["status"] = out.status;
        return out;
      }
      run.output = r.output;
    } else if (a == "linial") {
      auto r = ld::linial_coloring(graph, cfg);
      out.report["palette"] = r.palette;
      run = r;
      palette_output = true;
    } else if (a == "oldc-basic") {
      need_orientation();
      ld::OldcParams p;
      if (o.alpha) p.alpha = *o.alpha;
      p.tau_override = o.tau;
      p.run = cfg;
      run = ld::multi_defect_oldc(graph, inst, p);
    } else if (a == "oldc-main") {
      need_orientation();
      run = ld::main_oldc(graph, inst, main_params(o, cfg));
    } else if (a == "space-reduced") {
      need_orientation();
      const auto inner = inner_solver(o, cfg);
      const std::uint64_t space = std::max<std::size_t>(inst.color_space.size(), 1);
      const std::uint64_t p = o.p ? *o.p : ld::preset_message_p(space, o.r.value_or(1));
      auto r = ld::space_reduced_oldc(graph, inst, p, inner, cfg);
      out.report["p"] = r.p;
      out.report["depth"] = r.depth;
      run = r;
    } else if (a == "framework") {
      ld::FrameworkParams fp;
      fp.run = cfg;
      auto r = ld::degree_halving_framework(graph, inst, inner_solver(o, cfg), fp);
      out.report["stages"] = r.stage_count;
      out.stages_csv = r.stages_csv();
      run = r;
    } else if (a == "congest-pipeline") {
      ld::PipelineParams pp;
      pp.inner = main_params(o, cfg);
      pp.kappa = o.kappa;
      pp.r = o.r;
      pp.framework.run = cfg;
      auto r = ld::congest_pipeline(graph, inst, pp);
      out.report["stages"] = r.stage_count;
      out.stages_csv = r.stages_csv();
      run = r;
    } else {
      ld::fail(ld::ErrorCode::InvalidArgument, "unknown algorithm '" + a + "'");
    }
    for (auto& n : run.notes) notes.push_back(n);
    out.trace = run.trace;
    bool valid;
    if (palette_output) {
      valid = proper(graph, run.output.colors);
    } else {
      // Each algorithm is checked under the semantics it guarantees.
      ld::LdcInstance check = inst;
      if (a == "seq-arb" || a == "framework" || a == "congest-pipeline")
        check.flavor = ld::Flavor::Arbdefective;
      else if (a == "oldc-basic" || a == "oldc-main" || a == "space-reduced")
        check.flavor = ld::Flavor::Oriented;
      out.report["validated_as"] = std::string(ld::to_string(check.flavor));
      const auto rep = ld::validate_ldc(graph, check, run.output);
      valid = rep.valid;
      out.report["violators"] = rep.violators;
    }
    out.status = valid ? "valid" : "invalid";
    out.exit_code = valid ? kExitValid : kExitError;
    // Only validator-passing colorings reach disk.
    if (valid) out.coloring = run.output;
  } catch (const ld::BudgetViolation& e) {
    out.status = "fail-fast";
    out.exit_code = kExitFailFast;
    out.report["error"] = {{"code", "BudgetViolation"}, {"message", e.what()}, {"from", e.from},
                           {"to", e.to},           {"round", e.round},   {"bits", e.bits},
                           {"budget", e.budget}};
  } catch (const ld::Error& e) {
    const bool ff = ld::is_fail_fast(e.code());
    out.status = ff ? "fail-fast" : "error";
    out.exit_code = ff ? kExitFailFast : kExitError;
    out.report["error"] = {{"code", ld::to_string(e.code())}, {"message", e.what()}};
  }
  out.report["status"] = out.status;
  out.report["rounds"] = out.trace.rounds_elapsed;
  out.report["max_bits"] = out.trace.max_message_bits();
  out.report["notes"] = notes;
  return out;
}

void add_run_flags(CLI::App* cmd, RunOptions& o, std::string& tau, std::string& taubar) {
  cmd->add_option("--algorithm", o.algorithm,
                  "seq, seq-arb, oracle, linial, oldc-basic, oldc-main, space-reduced, framework, congest-pipeline");
  cmd->add_option("--alpha", o.alpha, "shared α constant");
  cmd->add_option("--tau-override", tau, "τ or τ,τ′");
  cmd->add_option("--taubar-override", taubar, "τ̄ or τ̄,τ̄′");
  cmd->add_option("--h-prime", o.h_prime, "h′ override for oldc-main");
  cmd->add_option("--p", o.p, "space reduction branching factor");
  cmd->add_option("--r", o.r, "message preset exponent");
  cmd->add_option("--kappa", o.kappa, "κ of the inner solver");
  cmd->add_option("--inner", o.inner, "inner solver for space-reduced and framework: main-oldc, oldc-basic, seq");
  cmd->add_option("--bits-budget", o.bits_budget, "CONGEST bits per message");
  cmd->add_option("--max-rounds", o.max_rounds);
  cmd->add_option("--seed", o.seed, "recorded in the report; algorithms are deterministic");
}

void write_outcome(const Outcome& out, const ld::Instance& inst, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  ld::write_text(dir / "report.json", out.report.dump(2) + "\n");
  ld::write_text(dir / "trace.csv", out.trace.to_csv());
  if (out.coloring) ld::write_text(dir / "coloring.json", ld::coloring_to_json(inst.graph, *out.coloring).dump() + "\n");
  if (!out.stages_csv.empty()) ld::write_text(dir / "stages.csv", out.stages_csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"list defective coloring toolkit"};
  app.require_subcommand(1);

  ld::GenerateParams gp;
  std::string family = "random-gnp", lists = "degree-plus-one", target = "ldc", gen_out;
  auto* gen = app.add_subcommand("generate", "write a JSON instance");
  gen->add_option("--family", family);
  gen->add_option("--n", gp.n);
  gen->add_option("--delta", gp.delta);
  gen->add_option("--lists", lists);
  gen->add_option("--colors", gp.color_space);
  gen->add_option("--k", gp.k);
  gen->add_option("--target", target);
  gen->add_option("--g", gp.g);
  gen->add_option("--alpha", gp.alpha);
  gen->add_option("--tau", gp.tau);
  gen->add_option("--taubar", gp.tau_bar);
  gen->add_option("--h-prime", gp.h_prime);
  gen->add_option("--slack", gp.slack);
  gen->add_option("--seed", gp.seed);
  gen->add_option("--out", gen_out, "output path (stdout when empty)");

  RunOptions ro;
  std::string tau, taubar, instance_path, out_dir = "out";
  auto* runc = app.add_subcommand("run", "run one algorithm on an instance");
  runc->add_option("--instance", instance_path)->required();
  runc->add_option("--out-dir", out_dir);
  add_run_flags(runc, ro, tau, taubar);

  RunOptions so;
  std::string stau, staubar, families, ns, algorithms, rs, seeds, sweep_out;
  ld::GenerateParams sgp;
  std::string slists = "degree-plus-one", starget = "ldc";
  auto* sweep = app.add_subcommand("sweep", "cross-product of generated instances and algorithms");
  sweep->add_option("--families", families);
  sweep->add_option("--ns", ns);
  sweep->add_option("--algorithms", algorithms);
  sweep->add_option("--rs", rs, "optional r values");
  sweep->add_option("--seeds", seeds);
  sweep->add_option("--delta", sgp.delta);
  sweep->add_option("--lists", slists);
  sweep->add_option("--colors", sgp.color_space);
  sweep->add_option("--k", sgp.k);
  sweep->add_option("--target", starget);
  sweep->add_option("--out", sweep_out, "CSV path (stdout when empty)");
  sweep->add_option("--alpha", so.alpha);
  sweep->add_option("--tau-override", stau);
  sweep->add_option("--taubar-override", staubar);
  sweep->add_option("--h-prime", so.h_prime);
  sweep->add_option("--kappa", so.kappa);
  sweep->add_option("--inner", so.inner);
  sweep->add_option("--bits-budget", so.bits_budget);
  sweep->add_option("--max-rounds", so.max_rounds);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      gp.family = ld::parse_family(family);
      gp.lists = ld::parse_list_model(lists);
      gp.target = ld::parse_target(target);
      const auto inst = ld::generate_instance(gp);
      const auto text = ld::dump_instance(inst) + "\n";
      if (gen_out.empty())
        std::cout << text;
      else
        ld::write_text(gen_out, text);
      return kExitValid;
    }
    if (*runc) {
      ro.tau = parse_pair(tau);
      ro.taubar = parse_pair(taubar);
      const auto inst = ld::load_instance(instance_path);
      const auto out = execute(inst, ro);
      write_outcome(out, inst, out_dir);
      std::cout << out.status << "\n";
      return out.exit_code;
    }
    if (*sweep) {
      so.tau = parse_pair(stau);
      so.taubar = parse_pair(staubar);
      std::ostringstream csv;
      csv << "family,n,seed,algorithm,r,rounds,max_bits,valid,failure\n";
      const auto fams = split(families), nvals = split(ns), algs = split(algorithms), seedv = split(seeds);
      auto rvals = split(rs);
      if (rvals.empty()) rvals.push_back("");
      for (const auto& f : fams)
        for (const auto& nv : nvals)
          for (const auto& sd : seedv)
            for (const auto& al : algs)
              for (const auto& rv : rvals) {
                RunOptions o = so;
                o.algorithm = al;
                if (!rv.empty()) o.r = std::stoi(rv);
                std::string failure;
                Outcome out;
                try {
                  ld::GenerateParams p = sgp;
                  p.family = ld::parse_family(f);
                  p.n = std::stoi(nv);
                  p.seed = std::stoull(sd);
                  p.lists = ld::parse_list_model(slists);
                  p.target = ld::parse_target(starget);
                  out = execute(ld::generate_instance(p), o);
                  if (out.report.contains("error")) failure = out.report["error"]["code"];
                } catch (const ld::Error& e) {
                  out.status = "error";
                  failure = ld::to_string(e.code());
                }
                csv << f << ',' << nv << ',' << sd << ',' << al << ',' << rv << ','
                    << out.trace.rounds_elapsed << ',' << out.trace.max_message_bits() << ','
                    << (out.status == "valid" ? 1 : 0) << ',' << failure << '\n';
              }
      if (sweep_out.empty())
        std::cout << csv.str();
      else
        ld::write_text(sweep_out, csv.str());
      return kExitValid;
    }
  } catch (const ld::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
