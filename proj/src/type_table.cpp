#include "listdefect/type_table.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "listdefect/color_bitset.hpp"
#include "listdefect/error.hpp"
#include "listdefect/kernels.hpp"

namespace listdefect {

bool type_before(const NodeType& a, const NodeType& b) {
  if (a.list.size() != b.list.size()) return a.list.size() < b.list.size();
  if (a.init_color != b.init_color) return a.init_color < b.init_color;
  if (a.list != b.list) return a.list < b.list;
  return a.cls < b.cls;
}

std::optional<std::size_t> TypeTable::index_of(const NodeType& t) const {
  auto it = std::lower_bound(types.begin(), types.end(), t, type_before);
  if (it == types.end() || !(*it == t)) return std::nullopt;
  return static_cast<std::size_t>(it - types.begin());
}

const Family& TypeTable::family(const NodeType& t) const {
  auto i = index_of(t);
  if (!i) fail(ErrorCode::InvariantViolation, "type missing from table");
  return families[*i];
}

namespace {

void put_i64(std::string& out, std::int64_t v) {
  char buf[8];
  const auto u = static_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((u >> (8 * i)) & 0xff);
  out.append(buf, 8);
}

std::int64_t get_i64(const std::string& in, std::size_t& pos) {
  if (pos + 8 > in.size()) fail(ErrorCode::Schema, "truncated type table");
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i)
    u |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  pos += 8;
  return static_cast<std::int64_t>(u);
}

constexpr std::int64_t kMagic = 0x3154544c44;  // "LDTT1"

void put_type(std::string& out, const NodeType& t) {
  put_i64(out, t.init_color);
  put_i64(out, t.cls);
  put_i64(out, static_cast<std::int64_t>(t.list.size()));
  for (auto c : t.list) put_i64(out, c);
}

void put_spec(std::string& out, const TableSpec& s) {
  put_i64(out, static_cast<std::int64_t>(s.k_by_class.size()));
  for (auto k : s.k_by_class) put_i64(out, static_cast<std::int64_t>(k));
  put_i64(out, static_cast<std::int64_t>(s.kprime_by_class.size()));
  for (auto k : s.kprime_by_class) put_i64(out, static_cast<std::int64_t>(k));
  put_i64(out, static_cast<std::int64_t>(s.tau));
  put_i64(out, static_cast<std::int64_t>(s.tau_prime));
  put_i64(out, s.g);
  put_i64(out, static_cast<std::int64_t>(s.subset_cap));
  put_i64(out, static_cast<std::int64_t>(s.step_cap));
}

std::vector<NodeType> normalize(std::vector<NodeType> types) {
  std::sort(types.begin(), types.end(), type_before);
  types.erase(std::unique(types.begin(), types.end()), types.end());
  return types;
}

std::uint64_t checked_binomial(std::uint64_t n, std::uint64_t r, std::uint64_t cap) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 out = 1;
  for (std::uint64_t i = 0; i < r; ++i) {
    out = out * (n - i) / (i + 1);
    if (out > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(out);
}

// k-subsets of `list` in colex order: the largest element varies slowest.
std::vector<ColorSet> colex_subsets(const ColorSet& list, std::size_t k) {
  std::vector<ColorSet> out;
  if (k > list.size()) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    ColorSet s;
    s.reserve(k);
    for (auto i : idx) s.push_back(list[i]);
    out.push_back(std::move(s));
    // Colex successor: bump the lowest index that can move, reset those below it.
    std::size_t j = 0;
    while (j < k && idx[j] + 1 == (j + 1 < k ? idx[j + 1] : list.size())) ++j;
    if (j == k) break;
    ++idx[j];
    for (std::size_t t = 0; t < j; ++t) idx[t] = t;
    if (k == 0) break;
  }
  return out;
}

struct Window {
  Color base = 0;
  std::size_t span = 0;
  bool use_bitsets = false;
};

// Candidate sets of one type against the fixed families of earlier types.
class GreedySearch {
 public:
  GreedySearch(const TableSpec& spec, const Window& win, std::vector<ColorSet> candidates,
               std::size_t kprime)
      : spec_(spec), win_(win), cands_(std::move(candidates)), kprime_(kprime) {}

  struct Constraint {
    const Family* fam;
    const std::vector<ColorBitset>* fam_bits;
    bool forward;   // members of the new family hitting fam must stay below τ′
    bool backward;  // members of fam hit by the new family must stay below τ′
  };

  void add(const Constraint& c) { cons_.push_back(c); }

  std::optional<std::vector<std::size_t>> run() {
    const std::size_t n = cands_.size();
    if (kprime_ > n) return std::nullopt;
    memo_.assign(n, {});
    ready_.assign(n, false);
    fwd_count_.assign(cons_.size(), 0);
    back_mult_.resize(cons_.size());
    back_size_.assign(cons_.size(), 0);
    for (std::size_t j = 0; j < cons_.size(); ++j) back_mult_[j].assign(cons_[j].fam->size(), 0);
    chosen_.clear();
    if (choose(kprime_, n)) {
      std::vector<std::size_t> out(chosen_.rbegin(), chosen_.rend());
      return out;
    }
    return std::nullopt;
  }

 private:
  struct Hits {
    std::vector<bool> forward;             // per constraint
    std::vector<std::vector<int>> back;    // per constraint, member indices hit
  };

  bool conflicts(const ColorSet& cand, const std::vector<ColorBitset>& shifts, const ColorSet& other,
                 const ColorBitset* other_bits) const {
    if (!win_.use_bitsets) return conflict_sum_merge(cand, other, spec_.g) >= spec_.tau;
    std::uint64_t total = 0;
    for (const auto& s : shifts) {
      total += intersect_count(s, *other_bits);
      if (total >= spec_.tau) return true;
    }
    return false;
  }

  const Hits& hits(std::size_t c) {
    if (ready_[c]) return memo_[c];
    Hits h;
    h.forward.assign(cons_.size(), false);
    h.back.resize(cons_.size());
    std::vector<ColorBitset> shifts;
    if (win_.use_bitsets) {
      const auto bits = ColorBitset::from(cands_[c], win_.base, win_.span);
      for (std::int64_t s = -spec_.g; s <= spec_.g; ++s) shifts.push_back(bits.shifted(s));
    }
    for (std::size_t j = 0; j < cons_.size(); ++j) {
      const auto& fam = *cons_[j].fam;
      for (std::size_t t = 0; t < fam.size(); ++t) {
        const ColorBitset* ob = win_.use_bitsets ? &(*cons_[j].fam_bits)[t] : nullptr;
        if (conflicts(cands_[c], shifts, fam[t], ob)) {
          h.forward[j] = true;
          h.back[j].push_back(static_cast<int>(t));
          if (!cons_[j].backward) break;
        }
      }
    }
    memo_[c] = std::move(h);
    ready_[c] = true;
    return memo_[c];
  }

  bool push(std::size_t c) {
    const auto& h = hits(c);
    bool ok = true;
    for (std::size_t j = 0; j < cons_.size(); ++j) {
      if (cons_[j].forward && h.forward[j] && ++fwd_count_[j] >= spec_.tau_prime) ok = false;
      if (cons_[j].backward) {
        for (int t : h.back[j])
          if (back_mult_[j][t]++ == 0 && ++back_size_[j] >= spec_.tau_prime) ok = false;
      }
    }
    chosen_.push_back(c);
    return ok;
  }

  void pop() {
    const std::size_t c = chosen_.back();
    chosen_.pop_back();
    const auto& h = memo_[c];
    for (std::size_t j = 0; j < cons_.size(); ++j) {
      if (cons_[j].forward && h.forward[j]) --fwd_count_[j];
      if (cons_[j].backward)
        for (int t : h.back[j])
          if (--back_mult_[j][t] == 0) --back_size_[j];
    }
  }

  // Colex-first valid r-subset of [0, limit) extending the current partial choice.
  bool choose(std::size_t r, std::size_t limit) {
    if (r == 0) return true;
    for (std::size_t top = r - 1; top < limit; ++top) {
      if (++steps_ > spec_.step_cap)
        fail(ErrorCode::CapExceeded, "greedy family search exceeded step cap");
      const bool ok = push(top);
      if (ok && choose(r - 1, top)) return true;
      pop();
    }
    return false;
  }

  const TableSpec& spec_;
  Window win_;
  std::vector<ColorSet> cands_;
  std::size_t kprime_;
  std::vector<Constraint> cons_;
  std::vector<Hits> memo_;
  std::vector<bool> ready_;
  std::vector<std::uint64_t> fwd_count_;
  std::vector<std::vector<std::uint32_t>> back_mult_;
  std::vector<std::uint64_t> back_size_;
  std::vector<std::size_t> chosen_;
  std::uint64_t steps_ = 0;
};

}  // namespace

std::string TypeTable::serialize() const {
  std::string out;
  put_i64(out, kMagic);
  put_i64(out, static_cast<std::int64_t>(types.size()));
  for (std::size_t i = 0; i < types.size(); ++i) {
    put_type(out, types[i]);
    put_i64(out, static_cast<std::int64_t>(families[i].size()));
    for (const auto& s : families[i]) {
      put_i64(out, static_cast<std::int64_t>(s.size()));
      for (auto c : s) put_i64(out, c);
    }
  }
  return out;
}

TypeTable TypeTable::deserialize(const std::string& bytes) {
  std::size_t pos = 0;
  if (get_i64(bytes, pos) != kMagic) fail(ErrorCode::Schema, "not a type table");
  TypeTable t;
  const auto count = get_i64(bytes, pos);
  for (std::int64_t i = 0; i < count; ++i) {
    NodeType nt;
    nt.init_color = get_i64(bytes, pos);
    nt.cls = static_cast<int>(get_i64(bytes, pos));
    const auto len = get_i64(bytes, pos);
    for (std::int64_t j = 0; j < len; ++j) nt.list.push_back(get_i64(bytes, pos));
    Family fam;
    const auto fs = get_i64(bytes, pos);
    for (std::int64_t j = 0; j < fs; ++j) {
      ColorSet s;
      const auto ss = get_i64(bytes, pos);
      for (std::int64_t k = 0; k < ss; ++k) s.push_back(get_i64(bytes, pos));
      fam.push_back(std::move(s));
    }
    t.types.push_back(std::move(nt));
    t.families.push_back(std::move(fam));
  }
  if (pos != bytes.size()) fail(ErrorCode::Schema, "trailing bytes in type table");
  return t;
}

TypeTable build_type_table(std::vector<NodeType> types, const TableSpec& spec) {
  TypeTable table;
  table.types = normalize(std::move(types));
  const std::size_t t = table.types.size();
  if (spec.tau_prime == 0 || spec.tau == 0)
    fail(ErrorCode::InvalidArgument, "tau and tau' must be positive");

  Window win;
  bool any = false;
  Color lo = 0;
  Color hi = 0;
  for (const auto& ty : table.types) {
    if (ty.list.empty()) continue;
    if (!any || ty.list.front() < lo) lo = ty.list.front();
    if (!any || ty.list.back() > hi) hi = ty.list.back();
    any = true;
  }
  if (any) {
    win.base = lo;
    win.span = static_cast<std::size_t>(hi - lo + 1);
    win.use_bitsets = win.span <= kBitsetSpanLimit;
  }

  std::vector<std::vector<ColorBitset>> fam_bits(t);
  for (std::size_t i = 0; i < t; ++i) {
    const auto& ty = table.types[i];
    if (ty.cls < 0 || static_cast<std::size_t>(ty.cls) >= spec.k_by_class.size() ||
        static_cast<std::size_t>(ty.cls) >= spec.kprime_by_class.size())
      fail(ErrorCode::InvalidArgument, "type class outside the table spec");
    const auto k = spec.k_by_class[ty.cls];
    const auto kprime = spec.kprime_by_class[ty.cls];
    const auto count = checked_binomial(ty.list.size(), k, spec.subset_cap);
    if (count > spec.subset_cap)
      fail(ErrorCode::CapExceeded, "C(" + std::to_string(ty.list.size()) + "," +
                                       std::to_string(k) + ") exceeds subset cap");
    GreedySearch search(spec, win, colex_subsets(ty.list, k), kprime);
    for (std::size_t j = 0; j < i; ++j) {
      const int cj = table.types[j].cls;
      GreedySearch::Constraint c{&table.families[j], &fam_bits[j], cj <= ty.cls, ty.cls <= cj};
      search.add(c);
    }
    auto picked = search.run();
    if (!picked)
      fail(ErrorCode::GreedyExhausted,
           "no conflict-free family for type " + std::to_string(i) + " (class " +
               std::to_string(ty.cls) + ", |L|=" + std::to_string(ty.list.size()) + ")");
    auto cands = colex_subsets(ty.list, k);
    Family fam;
    for (auto idx : *picked) fam.push_back(cands[idx]);
    if (win.use_bitsets)
      for (const auto& s : fam) fam_bits[i].push_back(ColorBitset::from(s, win.base, win.span));
    table.families.push_back(std::move(fam));
  }
  return table;
}

std::uint64_t table_key(const std::vector<NodeType>& types, const TableSpec& spec) {
  std::string bytes;
  put_spec(bytes, spec);
  for (const auto& t : normalize(types)) put_type(bytes, t);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

TypeTable build_type_table_cached(std::vector<NodeType> types, const TableSpec& spec) {
  const char* dir = std::getenv("LISTDEFECT_CACHE");
  if (dir == nullptr || *dir == '\0') return build_type_table(std::move(types), spec);
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.ldtt",
                static_cast<unsigned long long>(table_key(types, spec)));
  const std::filesystem::path path = std::filesystem::path(dir) / name;
  const auto normalized = normalize(types);
  if (std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      auto table = TypeTable::deserialize(buf.str());
      if (table.types == normalized) return table;
    } catch (const Error&) {
      // Corrupt or colliding entry; rebuild below.
    }
  }
  auto table = build_type_table(std::move(types), spec);
  std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << table.serialize();
  }
  std::filesystem::rename(tmp, path);
  return table;
}

bool verify_type_table(const TypeTable& table, const TableSpec& spec) {
  const std::size_t t = table.types.size();
  if (table.families.size() != t) return false;
  for (std::size_t i = 0; i < t; ++i) {
    const auto& ty = table.types[i];
    const auto& fam = table.families[i];
    if (fam.size() != spec.kprime_by_class.at(ty.cls)) return false;
    for (const auto& s : fam) {
      if (s.size() != spec.k_by_class.at(ty.cls)) return false;
      if (!std::includes(ty.list.begin(), ty.list.end(), s.begin(), s.end())) return false;
    }
    auto sorted = fam;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  }
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < t; ++j) {
      if (i == j || table.types[j].cls > table.types[i].cls) continue;
      if (psi_g_member(table.families[i], table.families[j], spec.tau_prime, spec.tau, spec.g))
        return false;
    }
  return true;
}

}  // namespace listdefect
