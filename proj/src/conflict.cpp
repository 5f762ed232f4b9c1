#include "listdefect/conflict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "listdefect/color_bitset.hpp"
#include "listdefect/error.hpp"

namespace listdefect {

namespace {

double loglog(std::uint64_t x) {
  const double l = std::log2(static_cast<double>(std::max<std::uint64_t>(x, 2)));
  return std::log2(l);
}

}  // namespace

std::uint64_t tau_formula(std::uint64_t h, std::uint64_t space_size, std::uint64_t m) {
  const double v = 8.0 * static_cast<double>(h) + 2.0 * loglog(space_size) + 2.0 * loglog(m) + 16.0;
  // Guard against 31.999999 style rounding on exact powers.
  return static_cast<std::uint64_t>(std::ceil(v - 1e-9));
}

std::uint64_t tau_prime_exponent(std::uint64_t tau, std::uint64_t h) {
  const double sub = 2.0 * static_cast<double>(h) + std::log2(2.0 * std::exp(1.0));
  const auto s = static_cast<std::uint64_t>(std::ceil(sub));
  return tau > s ? tau - s : 0;
}

BigInt tau_prime_exact(std::uint64_t tau, std::uint64_t h) {
  BigInt one = 1;
  return one << static_cast<unsigned>(tau_prime_exponent(tau, h));
}

std::uint64_t tau_prime_formula(std::uint64_t tau, std::uint64_t h) {
  const auto e = tau_prime_exponent(tau, h);
  if (e >= 64) return std::numeric_limits<std::uint64_t>::max();
  return std::uint64_t{1} << e;
}

ConflictParams make_conflict_params(std::uint64_t h, std::uint64_t space_size, std::uint64_t m,
                                    std::int64_t g,
                                    std::optional<std::pair<std::uint64_t, std::uint64_t>> scale) {
  ConflictParams p;
  p.h = h;
  p.color_space_size = space_size;
  p.m = m;
  p.g = g;
  if (scale) {
    const auto [t, tp] = *scale;
    if (t < 1 || tp < 1) fail(ErrorCode::InvalidArgument, "tau override must be >= 1");
    if (t < 64 && tp > (std::uint64_t{1} << t))
      fail(ErrorCode::InvalidArgument, "tau' override exceeds 2^tau");
    p.tau = t;
    p.tau_prime = tp;
    p.overridden = true;
  } else {
    p.tau = tau_formula(h, space_size, m);
    p.tau_prime = tau_prime_formula(p.tau, h);
  }
  return p;
}

std::uint64_t mu_g(Color x, const ColorSet& c, std::int64_t g) {
  auto lo = std::lower_bound(c.begin(), c.end(), x - g);
  auto hi = std::upper_bound(c.begin(), c.end(), x + g);
  return static_cast<std::uint64_t>(hi - lo);
}

bool tau_g_conflict(const ColorSet& a, const ColorSet& b, std::uint64_t tau, std::int64_t g) {
  const auto ab = conflict_sum(a, b, g);
  const auto ba = conflict_sum(b, a, g);
  if (ab != ba) fail(ErrorCode::InvariantViolation, "conflict sum is not symmetric");
  return ab >= tau;
}

bool psi_g_member(const Family& k1, const Family& k2, std::uint64_t tau_prime, std::uint64_t tau,
                  std::int64_t g) {
  std::uint64_t hit = 0;
  for (const auto& c1 : k1) {
    for (const auto& c2 : k2) {
      if (tau_g_conflict(c1, c2, tau, g)) {
        ++hit;
        break;
      }
    }
    if (hit >= tau_prime) return true;
  }
  return hit >= tau_prime;
}

Residue residue_restrict(const ColorSet& list, std::int64_t g) {
  const std::int64_t mod = 2 * g + 1;
  std::vector<std::size_t> count(static_cast<std::size_t>(mod), 0);
  for (auto c : list) ++count[static_cast<std::size_t>(((c % mod) + mod) % mod)];
  Residue r;
  std::size_t best = 0;
  for (std::int64_t a = 0; a < mod; ++a) {
    if (count[a] > best) {
      best = count[a];
      r.a = a;
    }
  }
  for (auto c : list)
    if (((c % mod) + mod) % mod == r.a) r.list.push_back(c);
  return r;
}

BigInt binomial(const BigInt& n, std::uint64_t r) {
  if (n < 0 || BigInt(r) > n) return 0;
  BigInt rr = r;
  if (n - rr < rr) rr = n - rr;
  if (rr > 10'000'000) fail(ErrorCode::CapExceeded, "binomial too large to evaluate exactly");
  const auto steps = static_cast<std::uint64_t>(rr);
  BigInt out = 1;
  for (std::uint64_t i = 0; i < steps; ++i) out = out * (n - i) / (i + 1);
  return out;
}

GreedyBounds bound_d1_d2(std::uint64_t k, std::uint64_t l, std::uint64_t kprime,
                         std::uint64_t tau, std::uint64_t tau_prime) {
  GreedyBounds b;
  if (tau > k || tau > l) {
    b.d1 = 0;
  } else {
    b.d1 = binomial(k, tau) * binomial(BigInt(l - tau), k - tau);
  }
  const BigInt subsets = binomial(l, k);
  if (tau_prime > kprime || BigInt(tau_prime) > subsets) {
    b.d2 = 0;
  } else {
    b.d2 = 4 * binomial(BigInt(kprime) * b.d1, tau_prime) *
           binomial(subsets - tau_prime, kprime - tau_prime);
  }
  return b;
}

}  // namespace listdefect
