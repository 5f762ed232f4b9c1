#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "listdefect/conflict.hpp"

namespace listdefect {

struct NodeType {
  std::int64_t init_color = 0;
  ColorSet list;  // restricted list
  int cls = 0;
  bool operator==(const NodeType&) const = default;
};

// Greedy order: list size, then initial color, then list, then class.
bool type_before(const NodeType& a, const NodeType& b);

struct TableSpec {
  std::vector<std::uint64_t> k_by_class;       // |C| for each class
  std::vector<std::uint64_t> kprime_by_class;  // |K| for each class
  std::uint64_t tau = 1;
  std::uint64_t tau_prime = 1;
  std::int64_t g = 0;
  std::uint64_t subset_cap = std::uint64_t{1} << 16;  // max C(|L|, k) per type
  std::uint64_t step_cap = std::uint64_t{1} << 24;    // search nodes per type
};

struct TypeTable {
  std::vector<NodeType> types;   // greedy order
  std::vector<Family> families;  // aligned with types

  std::optional<std::size_t> index_of(const NodeType& t) const;
  const Family& family(const NodeType& t) const;
  std::string serialize() const;
  static TypeTable deserialize(const std::string& bytes);
};

// Deduplicates and orders the types, then assigns each the colex-first family of k′
// k-subsets that avoids Ψ_g conflicts with every earlier type in either class direction.
// Throws GreedyExhausted when no family exists and CapExceeded past the caps.
TypeTable build_type_table(std::vector<NodeType> types, const TableSpec& spec);

// FNV-1a over the spec and the ordered type set.
std::uint64_t table_key(const std::vector<NodeType>& types, const TableSpec& spec);

// Uses $LISTDEFECT_CACHE when set; otherwise builds directly.
TypeTable build_type_table_cached(std::vector<NodeType> types, const TableSpec& spec);

// Exhaustive pairwise check: for every ordered pair with class(j) <= class(i), i != j,
// psi_g_member(K_i, K_j) is false; every member is a k-subset of the type's list.
bool verify_type_table(const TypeTable& table, const TableSpec& spec);

}  // namespace listdefect
