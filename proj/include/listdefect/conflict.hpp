#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "listdefect/graph.hpp"

namespace listdefect {

using BigInt = boost::multiprecision::cpp_int;
using ColorSet = std::vector<Color>;  // sorted ascending
using Family = std::vector<ColorSet>;

// ⌈8h + 2·loglog|C| + 2·loglog m + 16⌉ with loglog x = log2 log2 max(x, 2).
std::uint64_t tau_formula(std::uint64_t h, std::uint64_t space_size, std::uint64_t m);
// τ - ⌈2h + log2(2e)⌉, floored at 0.
std::uint64_t tau_prime_exponent(std::uint64_t tau, std::uint64_t h);
BigInt tau_prime_exact(std::uint64_t tau, std::uint64_t h);
// Saturates at UINT64_MAX.
std::uint64_t tau_prime_formula(std::uint64_t tau, std::uint64_t h);

struct ConflictParams {
  std::uint64_t h = 1;
  std::uint64_t color_space_size = 1;
  std::uint64_t m = 1;
  std::int64_t g = 0;
  std::uint64_t tau = 1;
  std::uint64_t tau_prime = 1;
  bool overridden = false;
};

// Formula values unless `scale` = (τ, τ′) is given; an override needs 1 <= τ′ <= 2^τ.
ConflictParams make_conflict_params(std::uint64_t h, std::uint64_t space_size, std::uint64_t m,
                                    std::int64_t g,
                                    std::optional<std::pair<std::uint64_t, std::uint64_t>> scale);

// |{c in C : |x - c| <= g}|.
std::uint64_t mu_g(Color x, const ColorSet& c, std::int64_t g);
// Σ_{x in a} μ_g(x, b) >= τ. Both summation orders are evaluated and must agree.
bool tau_g_conflict(const ColorSet& a, const ColorSet& b, std::uint64_t tau, std::int64_t g);
// At least τ′ members of k1 conflict with some member of k2.
bool psi_g_member(const Family& k1, const Family& k2, std::uint64_t tau_prime, std::uint64_t tau,
                  std::int64_t g);

struct Residue {
  std::int64_t a = 0;
  ColorSet list;
};
// Residue class mod 2g+1 holding the most colors; ties go to the smallest residue.
Residue residue_restrict(const ColorSet& list, std::int64_t g);

BigInt binomial(const BigInt& n, std::uint64_t r);

struct GreedyBounds {
  BigInt d1;
  BigInt d2;
};
// d1 = C(k,τ)·C(ℓ-τ,k-τ); d2 = 4·C(k′·d1, τ′)·C(C(ℓ,k)-τ′, k′-τ′). Ill-defined binomials are 0.
GreedyBounds bound_d1_d2(std::uint64_t k, std::uint64_t l, std::uint64_t kprime,
                         std::uint64_t tau, std::uint64_t tau_prime);

}  // namespace listdefect
