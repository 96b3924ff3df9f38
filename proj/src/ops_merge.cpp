#include <algorithm>
#include <map>
#include <set>

#include "bac/unchecked.hpp"
#include "ops_internal.hpp"

namespace bac {

using detail::require_arrow;
using detail::require_proper;
using detail::sym_str;
using detail::UnionFind;

namespace {

struct Zip {
  ZipResult result;
  std::vector<Symbol> targets;
  std::map<Symbol, Arrow> table;
  /// Group index of every incoming chain (p, r) of a target.
  std::map<Chain2, std::size_t> group_of;
};

Zip zip_impl(const Node& node, std::span<const SuffixFamily> families, bool checked) {
  if (families.empty()) throw Error(ErrorKind::ZipMismatch, "nothing to merge");
  Zip z;
  for (const auto& f : families) {
    require_proper(node, f.target);
    if (std::find(z.targets.begin(), z.targets.end(), f.target) != z.targets.end()) {
      throw Error(ErrorKind::ZipMismatch, "object " + sym_str(f.target) + " is listed twice");
    }
    z.targets.push_back(f.target);
    std::vector<Chain2> listed = f.chains;
    std::sort(listed.begin(), listed.end());
    if (listed != suffix_nd(node, f.target)) {
      throw Error(ErrorKind::ZipMismatch, "chains listed for object " + sym_str(f.target) +
                                              " are not exactly its nondecomposable incoming morphisms");
    }
    if (f.chains.size() != families.front().chains.size()) {
      throw Error(ErrorKind::ZipMismatch, "objects to merge have different numbers of incoming generators");
    }
  }
  for (Arrow& a : arrows(node)) {
    Symbol s = symbol(a);
    z.table.emplace(s, std::move(a));
  }
  auto is_target = [&](Symbol s) { return std::find(z.targets.begin(), z.targets.end(), s) != z.targets.end(); };
  for (Symbol x : z.targets) {
    for (auto [k, v] : z.table.at(x).dict) {
      if (v != x && is_target(v)) {
        throw Error(ErrorKind::LoopDetected, "object " + sym_str(x) + " reaches " + sym_str(v) + "; they cannot merge");
      }
    }
  }

  // Every incoming chain of a target, from a source that is not a target.
  std::vector<Chain2> chains;
  std::map<Chain2, Symbol> reaches;
  for (const auto& [p, a] : z.table) {
    if (is_target(p)) continue;
    for (auto [k, v] : a.dict) {
      if (is_target(v)) {
        chains.push_back({p, k});
        reaches.emplace(Chain2{p, k}, v);
      }
    }
  }
  std::map<Chain2, std::size_t> index;
  for (std::size_t i = 0; i < chains.size(); ++i) index.emplace(chains[i], i);
  UnionFind uf(chains.size());
  for (std::size_t j = 0; j < families.front().chains.size(); ++j) {
    for (const auto& f : families) {
      // Paired generators from the same source become one morphism; pairs
      // from different sources only fix the correspondence.
      Chain2 c = f.chains[j], first = families.front().chains[j];
      if (c.fst == first.fst) uf.unite(index.at(first), index.at(c));
    }
  }
  for (Symbol x : z.targets) uf.unite(index.at({kBase, z.targets.front()}), index.at({kBase, x}));

  // Merged morphisms m -> x force their composites p -> m -> x together.
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [p, a_p] : z.table) {
      if (is_target(p)) continue;
      for (const Edge& e : a_p.target.edges()) {
        Symbol m = a_p.dict.at(e.dict.at(kBase));
        if (is_target(m)) continue;
        std::map<std::size_t, Symbol> seen;
        for (auto [k, v] : e.dict) {
          auto it = index.find({m, k});
          if (it == index.end()) continue;
          auto [slot, inserted] = seen.emplace(uf.find(it->second), v);
          if (!inserted && uf.unite(index.at({p, slot->second}), index.at({p, v}))) changed = true;
        }
      }
    }
  }

  std::map<std::size_t, std::size_t> group_index;
  for (Chain2 c : chains) {
    std::size_t root = uf.find(index.at(c));
    auto [it, inserted] = group_index.emplace(root, z.result.groups.size());
    if (inserted) z.result.groups.push_back(SuffixGroup{c.fst, std::vector<Symbol>(z.targets.size(), kBase)});
    SuffixGroup& g = z.result.groups[it->second];
    std::size_t pos = std::find(z.targets.begin(), z.targets.end(), reaches.at(c)) - z.targets.begin();
    if (g.members[pos] != kBase && checked) {
      throw Error(ErrorKind::ZipMismatch, "morphisms " + to_string(Chain2{c.fst, g.members[pos]}) + " and " +
                                              to_string(c) + " would be identified");
    }
    if (g.members[pos] == kBase) g.members[pos] = c.snd;
    z.group_of.emplace(c, it->second);
  }
  for (auto& g : z.result.groups) {
    // Members present for every target, in family order; holes are dropped.
    g.members.erase(std::remove(g.members.begin(), g.members.end(), kBase), g.members.end());
  }
  for (std::size_t j = 0; j < families.front().chains.size(); ++j) {
    std::vector<Chain2> row;
    for (const auto& f : families) row.push_back(f.chains[j]);
    z.result.pairs.push_back(std::move(row));
  }
  return z;
}

Node merge_nodes_impl(const Node& node, std::span<const SuffixFamily> families, const Merger& merger, bool checked) {
  Zip z = zip_impl(node, families, checked);
  auto is_target = [&](Symbol s) { return std::find(z.targets.begin(), z.targets.end(), s) != z.targets.end(); };

  std::set<Symbol> proper;
  std::vector<Edge> merged_edges;
  for (Symbol x : z.targets) {
    const Node& xn = z.table.at(x).target;
    for (Symbol s : symbols(xn)) {
      if (s != kBase && !proper.insert(s).second) {
        throw Error(ErrorKind::SymbolCollision, "symbol " + sym_str(s) + " is used by two merged objects; relabel first");
      }
    }
    merged_edges.insert(merged_edges.end(), xn.edges().begin(), xn.edges().end());
  }
  Node merged(std::move(merged_edges));

  std::vector<Symbol> group_sym;
  std::map<Symbol, std::set<Symbol>> minted;
  for (const SuffixGroup& g : z.result.groups) {
    Symbol s = g.members.size() == 1 ? g.members.front() : merger(g.source, g.members);
    if (s == kBase || !minted[g.source].insert(s).second) {
      throw Error(ErrorKind::MergerClash, "merger gives " + sym_str(s) + " twice on object " + sym_str(g.source));
    }
    group_sym.push_back(s);
  }
  for (const auto& [p, syms] : minted) {
    for (Symbol s : syms) {
      if (!has_symbol(z.table.at(p).target, s)) continue;
      if (!z.group_of.contains({p, s})) {
        throw Error(ErrorKind::MergerClash, "merger gives " + sym_str(s) + ", already used on object " + sym_str(p));
      }
    }
  }
  auto renamed = [&](Chain2 c) { return group_sym[z.group_of.at(c)]; };

  std::map<Symbol, Node> memo;
  std::function<Node(const Arrow&)> rebuild = [&](const Arrow& a_p) -> Node {
    Symbol p = symbol(a_p);
    if (auto it = memo.find(p); it != memo.end()) return it->second;
    std::vector<Edge> edges;
    for (const Edge& e : a_p.target.edges()) {
      Arrow child = join(a_p, to_arrow(e));
      Symbol m = symbol(child);
      if (is_target(m)) {
        std::size_t g = z.group_of.at({p, e.dict.at(kBase)});
        Dict dict{{kBase, group_sym[g]}};
        for (const auto& [c, gi] : z.group_of) {
          if (gi != g || c.fst != p) continue;
          for (auto [k, v] : require_arrow(a_p.target, c.snd).dict) {
            if (k != kBase) dict.emplace(k, v);
          }
        }
        edges.push_back(Edge{std::move(dict), merged});
        continue;
      }
      bool inner = std::any_of(child.dict.begin(), child.dict.end(), [&](auto kv) { return is_target(kv.second); });
      if (!inner) {
        edges.push_back(e);
        continue;
      }
      Dict dict;
      for (auto [k, v] : e.dict) {
        bool chain = is_target(child.dict.at(k));
        Symbol key = chain ? renamed({m, k}) : k;
        Symbol value = chain ? renamed({p, v}) : v;
        auto [slot, inserted] = dict.emplace(key, value);
        if (!inserted && slot->second != value && checked) {
          throw Error(ErrorKind::ZipMismatch, "merged morphism " + to_string(Chain2{m, key}) + " has two composites");
        }
      }
      edges.push_back(Edge{std::move(dict), rebuild(child)});
    }
    Node out(std::move(edges));
    memo.emplace(p, out);
    return out;
  };
  Node out = rebuild(root(node));
  if (checked) detail::check_result(out, ErrorKind::ZipMismatch, "the merge breaks the category laws");
  return out;
}

}  // namespace

ZipResult zip_suffixes(const Node& node, std::span<const SuffixFamily> families) {
  return zip_impl(node, families, true).result;
}

Node merge_nodes(const Node& node, std::span<const SuffixFamily> families, const Merger& merger) {
  return merge_nodes_impl(node, families, merger, true);
}

Node unchecked::merge_nodes(const Node& node, std::span<const SuffixFamily> families, const Merger& merger) {
  return merge_nodes_impl(node, families, merger, false);
}

}  // namespace bac
