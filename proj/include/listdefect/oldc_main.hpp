#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "listdefect/oldc_basic.hpp"

namespace listdefect {

struct TwoPhaseRun : OldcRun {
  std::vector<std::int64_t> bad_colors;  // |B_v|
  std::vector<std::int64_t> ignored;     // same-class out-neighbors dropped after Phase I
  std::vector<std::int64_t> multiset;    // Phase II candidate multiset size
};

// Classes are given. lists sorted, one defect per node; nodes with d >= β are settled at once.
// Hypothesis 4·max{β_{v,i}, β_v/q}/(d+1) <= 2^i is checked (ConditionViolated), and
// |L| >= [α·4^i + 4/(d+1)·Σ_{j=i-⌊log q⌋}^{i-1} β_{v,j}·2^j]·τ (ListTooSmall).
TwoPhaseRun two_phase_oldc(const ColoredGraph& graph, const std::vector<ColorSet>& lists,
                           const std::vector<std::int64_t>& defects, const std::vector<int>& cls,
                           std::uint64_t q, const OldcParams& params);

// 4^r with D_μ·4^r >= D, encoded by r; kZeroLambda for λ = 0.
inline constexpr int kZeroLambda = -1;

struct LambdaProfile {
  std::vector<std::uint64_t> energy;  // D_μ per μ
  std::uint64_t total = 0;            // D
  std::vector<int> r;                 // per μ: r with λ = 4^-r, or kZeroLambda
  bool case_two = false;
  // Case II: the single class. Case I: kept (class, μ) pairs, classes distinct.
  std::vector<std::pair<int, int>> classes;  // (i, μ)
  std::vector<std::int64_t> delta;           // δ per kept class
  double kept_lambda = 0;                    // Σ λ over kept classes
};

// λ_μ = 0 when 2h·D_μ < D, else 4^floor(log4(D_μ/D)). sqrt_r = √R_v (a power of two).
LambdaProfile lambda_profile(const std::vector<std::uint64_t>& energy, std::uint64_t h,
                             std::uint64_t sqrt_r);

struct MainParams : OldcParams {
  MainParams() { alpha = 16.0; }
  std::optional<std::pair<std::uint64_t, std::uint64_t>> taubar_override;
  std::optional<std::uint64_t> hprime_override;
  std::optional<std::uint64_t> q_override;
};

struct MainRun : TwoPhaseRun {
  std::uint64_t h_prime = 0;
  std::uint64_t tau_bar = 0;
  std::vector<int> case_two;  // per node: 1 Case II, 0 Case I, -1 trivial
  std::size_t stage1_rounds = 0;
};

// 4^ceil(log4 x) for x >= 1.
std::uint64_t ceil_pow4(std::uint64_t x);
// 4^ceil(log4 log2 8h).
std::uint64_t h_prime_formula(std::uint64_t h);

// Gate: Σ(d+1)² >= α²·β̂²·τ·τ̄·h′² on rounded values. Stage 1 picks γ-classes with
// multi_defect_oldc over class values; Stage 2 runs two_phase_oldc with q = h.
MainRun main_oldc(const ColoredGraph& graph, const LdcInstance& inst, const MainParams& params);

}  // namespace listdefect
