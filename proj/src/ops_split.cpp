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

std::vector<std::vector<Chain2>> partition_prefix(const Node& node, Symbol tgt) {
  if (!has_symbol(node, tgt)) throw Error(ErrorKind::InvalidSymbol, "symbol " + sym_str(tgt) + " is not on the node");
  require_proper(node, tgt);
  auto chains = proper_chains_to(node, tgt);
  std::map<Chain2, std::size_t> index;
  for (std::size_t i = 0; i < chains.size(); ++i) index.emplace(chains[i], i);
  UnionFind uf(chains.size());
  // (s1, m.x) ~ (s1.m, x) for every proper 3-chain (s1, m, x) ending at tgt.
  for (const Arrow& a1 : arrows(node)) {
    Symbol s1 = symbol(a1);
    if (s1 == kBase) continue;
    for (const Arrow& a2 : arrows(a1.target)) {
      Symbol m = symbol(a2);
      if (m == kBase) continue;
      for (auto [x, mx] : a2.dict) {
        if (x == kBase || a1.dict.at(mx) != tgt) continue;
        uf.unite(index.at({s1, mx}), index.at({a1.dict.at(m), x}));
      }
    }
  }
  std::map<std::size_t, std::vector<Chain2>> groups;
  for (std::size_t i = 0; i < chains.size(); ++i) groups[uf.find(i)].push_back(chains[i]);
  std::vector<std::vector<Chain2>> out;
  for (auto& [root, g] : groups) out.push_back(std::move(g));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

Node split_symbol_impl(const Node& node, Symbol src, Symbol tgt, const PrefixPartition& partition, bool checked) {
  Node s_node = require_arrow(node, src).target;
  require_proper(s_node, tgt);
  if (partition.empty()) throw Error(ErrorKind::CoverageGap, "a split needs at least one part");

  std::set<Symbol> fresh;
  for (const auto& [sym, chains] : partition) {
    if (sym == kBase) throw Error(ErrorKind::BaseReserved, "split parts need proper symbols");
    if (!fresh.insert(sym).second || (sym != tgt && has_symbol(s_node, sym))) {
      throw Error(ErrorKind::SymbolCollision, "symbol " + sym_str(sym) + " is not fresh on object " + sym_str(src));
    }
  }

  std::map<Chain2, std::size_t> part_of;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    for (Chain2 c : partition[i].second) {
      if (!part_of.emplace(c, i).second && checked) {
        throw Error(ErrorKind::NotSplittable, "chain " + to_string(c) + " is listed in two parts");
      }
    }
  }
  if (checked) {
    auto classes = partition_prefix(s_node, tgt);
    std::size_t listed = 0;
    for (const auto& cls : classes) {
      std::set<std::size_t> parts;
      for (Chain2 c : cls) {
        if (auto it = part_of.find(c); it != part_of.end()) {
          parts.insert(it->second);
          ++listed;
        }
      }
      if (parts.size() > 1) {
        throw Error(ErrorKind::NotSplittable, "chains " + to_string(cls.front()) +
                                                  " and its equivalents must stay in one part");
      }
      if (parts.size() != 1 || !std::all_of(cls.begin(), cls.end(), [&](Chain2 c) { return part_of.contains(c); })) {
        throw Error(ErrorKind::CoverageGap, "chain " + to_string(cls.front()) + " is not assigned to a part");
      }
    }
    if (listed != part_of.size()) {
      throw Error(ErrorKind::NotSplittable, "a listed chain does not compose to " + sym_str(tgt));
    }
    if (!nondecomposable(s_node, tgt)) {
      for (const auto& [sym, chains] : partition) {
        if (chains.empty()) {
          throw Error(ErrorKind::NotSplittable, "part " + sym_str(sym) + " of a composite symbol has no chains");
        }
      }
    }
  }

  std::vector<Edge> edges;
  for (const Edge& e : s_node.edges()) {
    Symbol head = e.dict.at(kBase);
    if (head == tgt) {
      for (const auto& [sym, chains] : partition) {
        Dict dict = e.dict;
        dict[kBase] = sym;
        edges.push_back(Edge{std::move(dict), e.target});
      }
      continue;
    }
    Dict dict = e.dict;
    for (auto& [k, v] : dict) {
      if (k == kBase || v != tgt) continue;
      auto it = part_of.find({head, k});
      if (it != part_of.end()) v = partition[it->second].first;
    }
    edges.push_back(Edge{std::move(dict), e.target});
  }
  Node s_new(std::move(edges));
  if (src == kBase) return s_new;
  return modify_under(node, src, [&](const Arrow&, const Edge& e, Location loc, const Node* inner) {
    if (loc == Location::Inner) return std::vector<Edge>{Edge{e.dict, *inner}};
    Dict dict = e.dict;
    Symbol image = dict.at(tgt);
    dict.erase(tgt);
    for (const auto& [sym, chains] : partition) dict[sym] = image;
    return std::vector<Edge>{Edge{std::move(dict), s_new}};
  });
}

struct Part {
  Node node;
  std::set<Symbol> keys;  // proper symbols of the split node carried by this part
  Splitter splitter;
};

Node split_node_impl(const Node& node, Symbol tgt, const std::vector<Part>& parts, bool total, bool checked) {
  if (tgt == kBase) throw Error(ErrorKind::NotFound, "the root cannot be split here; use split_root_node");
  require_proper(node, tgt);
  if (parts.empty()) throw Error(ErrorKind::CoverageGap, "a split needs at least one part");

  // Every incoming morphism of tgt, grouped by source object.
  std::map<Symbol, std::vector<Symbol>> incoming;
  std::map<Symbol, Node> source_node;
  for (const Arrow& a : arrows(node)) {
    Symbol p = symbol(a);
    if (p == tgt) continue;
    for (auto [k, v] : a.dict) {
      if (v == tgt) incoming[p].push_back(k);
    }
    if (incoming.contains(p)) source_node.emplace(p, a.target);
  }

  std::vector<std::map<Chain2, Symbol>> minted(parts.size());
  for (const auto& [p, rs] : incoming) {
    std::set<Symbol> used;
    for (Symbol r : rs) {
      bool assigned = false;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        auto s = parts[i].splitter(Chain2{p, r});
        if (!s) {
          if (total) throw Error(ErrorKind::SplitterClash, "splitter is undefined on " + to_string(Chain2{p, r}));
          if (p == kBase && checked) {
            throw Error(ErrorKind::NotSplittable, "every part must keep the root morphism " + to_string(Chain2{p, r}));
          }
          continue;
        }
        assigned = true;
        bool reused = std::find(rs.begin(), rs.end(), *s) != rs.end();
        if (*s == kBase || !used.insert(*s).second || (!reused && has_symbol(source_node.at(p), *s))) {
          throw Error(ErrorKind::SplitterClash,
                      "splitter gives " + sym_str(*s) + " for " + to_string(Chain2{p, r}) + ", which is not fresh");
        }
        minted[i].emplace(Chain2{p, r}, *s);
      }
      if (!assigned && checked) {
        throw Error(ErrorKind::NotSplittable, "morphism " + to_string(Chain2{p, r}) + " goes to no part");
      }
    }
  }

  auto lookup = [&](std::size_t i, Chain2 c) -> std::optional<Symbol> {
    auto it = minted[i].find(c);
    if (it == minted[i].end()) return std::nullopt;
    return it->second;
  };
  Node out = modify_under(node, tgt, [&](const Arrow& curr, const Edge& e, Location loc, const Node* inner) {
    Symbol p = symbol(curr);
    std::vector<Edge> result;
    if (loc == Location::Boundary) {
      for (std::size_t i = 0; i < parts.size(); ++i) {
        auto s = lookup(i, {p, e.dict.at(kBase)});
        if (!s) continue;
        Dict dict{{kBase, *s}};
        for (auto [k, v] : e.dict) {
          if (parts[i].keys.contains(k)) dict.emplace(k, v);
        }
        result.push_back(Edge{std::move(dict), parts[i].node});
      }
      return result;
    }
    Arrow child = join(curr, to_arrow(e));
    Symbol m = symbol(child);
    Dict dict;
    for (auto [k, v] : e.dict) {
      if (child.dict.at(k) != tgt) {
        dict.emplace(k, v);
        continue;
      }
      for (std::size_t i = 0; i < parts.size(); ++i) {
        auto lower = lookup(i, {m, k});
        if (!lower) continue;
        auto upper = lookup(i, {p, v});
        if (!upper) {
          if (!checked) continue;
          throw Error(ErrorKind::NotSplittable, "part " + std::to_string(i) + " receives " + to_string(Chain2{m, k}) +
                                                    " but not " + to_string(Chain2{p, v}));
        }
        dict.emplace(*lower, *upper);
      }
    }
    result.push_back(Edge{std::move(dict), *inner});
    return result;
  });
  if (checked) detail::check_result(out, ErrorKind::NotSplittable, "the split breaks the category laws");
  return out;
}

std::vector<Part> make_parts(const Node& node, Symbol tgt, std::span<const SplitPart> parts, bool checked) {
  Node x = require_arrow(node, tgt).target;
  auto proper = symbols(x);
  proper.erase(proper.begin());
  std::map<Symbol, std::size_t> group_of;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (Symbol s : parts[i].symbols) {
      if (!std::binary_search(proper.begin(), proper.end(), s)) {
        throw Error(ErrorKind::NotSplittable, "symbol " + sym_str(s) + " is not a proper symbol of object " + sym_str(tgt));
      }
      if (!group_of.emplace(s, i).second) {
        throw Error(ErrorKind::NotSplittable, "symbol " + sym_str(s) + " is listed in two parts");
      }
    }
  }
  if (group_of.size() != proper.size()) {
    throw Error(ErrorKind::CoverageGap, "every proper symbol of object " + sym_str(tgt) + " must go to a part");
  }
  if (checked) {
    for (const auto& cls : partition_symbols(x)) {
      for (Symbol s : cls) {
        if (group_of.at(s) != group_of.at(cls.front())) {
          throw Error(ErrorKind::NotSplittable, "symbols " + sym_str(cls.front()) + " and " + sym_str(s) +
                                                    " are connected and must stay together");
        }
      }
    }
  }
  std::vector<Part> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::vector<Edge> edges;
    for (const Edge& e : x.edges()) {
      if (group_of.at(e.dict.at(kBase)) == i) edges.push_back(e);
    }
    out.push_back(Part{Node(std::move(edges)), {parts[i].symbols.begin(), parts[i].symbols.end()}, parts[i].splitter});
  }
  return out;
}

}  // namespace

Node split_symbol(const Node& node, Symbol src, Symbol tgt, const PrefixPartition& partition) {
  Node out = split_symbol_impl(node, src, tgt, partition, true);
  detail::debug_check(out, "split_symbol");
  return out;
}

Node unchecked::split_symbol(const Node& node, Symbol src, Symbol tgt, const PrefixPartition& partition) {
  return split_symbol_impl(node, src, tgt, partition, false);
}

Node duplicate_nd_symbol(const Node& node, Symbol src, Symbol tgt, std::span<const Symbol> syms) {
  Node s_node = require_arrow(node, src).target;
  require_proper(s_node, tgt);
  if (!nondecomposable(s_node, tgt)) {
    throw Error(ErrorKind::NotNondecomposable, "symbol " + sym_str(tgt) + " on object " + sym_str(src) + " is a composite");
  }
  PrefixPartition partition;
  for (Symbol s : syms) partition.push_back({s, {}});
  return split_symbol(node, src, tgt, partition);
}

SymbolPartition partition_symbols(const Node& node) {
  auto syms = symbols(node);
  std::map<Symbol, std::size_t> index;
  for (std::size_t i = 1; i < syms.size(); ++i) index.emplace(syms[i], i - 1);
  UnionFind uf(index.size());
  for (const Edge& e : node.edges()) {
    std::size_t first = index.at(e.dict.at(kBase));
    for (auto [k, v] : e.dict) uf.unite(first, index.at(v));
  }
  std::map<std::size_t, std::vector<Symbol>> groups;
  for (auto [s, i] : index) groups[uf.find(i)].push_back(s);
  SymbolPartition out;
  for (auto& [root, g] : groups) out.push_back(std::move(g));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Node> split_root_node(const Node& node, const SymbolPartition& partition) {
  auto proper = symbols(node);
  proper.erase(proper.begin());
  std::map<Symbol, std::size_t> group_of;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    for (Symbol s : partition[i]) {
      if (!std::binary_search(proper.begin(), proper.end(), s)) {
        throw Error(ErrorKind::NotSplittable, "symbol " + sym_str(s) + " is not a proper symbol of the root");
      }
      if (!group_of.emplace(s, i).second) {
        throw Error(ErrorKind::NotSplittable, "symbol " + sym_str(s) + " is listed in two parts");
      }
    }
  }
  if (group_of.size() != proper.size()) throw Error(ErrorKind::CoverageGap, "every root symbol must go to a part");
  for (const auto& cls : partition_symbols(node)) {
    for (Symbol s : cls) {
      if (group_of.at(s) != group_of.at(cls.front())) {
        throw Error(ErrorKind::NotSplittable, "symbols " + sym_str(cls.front()) + " and " + sym_str(s) +
                                                  " are connected and must stay together");
      }
    }
  }
  std::vector<std::vector<Edge>> edges(partition.size());
  for (const Edge& e : node.edges()) edges[group_of.at(e.dict.at(kBase))].push_back(e);
  std::vector<Node> out;
  for (auto& es : edges) out.emplace_back(std::move(es));
  return out;
}

Node split_node(const Node& node, Symbol tgt, std::span<const SplitPart> parts) {
  if (tgt == kBase) throw Error(ErrorKind::NotFound, "the root cannot be split here; use split_root_node");
  require_proper(node, tgt);
  return split_node_impl(node, tgt, make_parts(node, tgt, parts, true), false, true);
}

Node unchecked::split_node(const Node& node, Symbol tgt, std::span<const SplitPart> parts) {
  if (tgt == kBase) throw Error(ErrorKind::NotFound, "the root cannot be split here; use split_root_node");
  require_proper(node, tgt);
  return split_node_impl(node, tgt, make_parts(node, tgt, parts, false), false, false);
}

Node duplicate_node(const Node& node, Symbol tgt, std::span<const Splitter> splitters) {
  if (tgt == kBase) throw Error(ErrorKind::NotFound, "the root cannot be duplicated");
  require_proper(node, tgt);
  Node x = require_arrow(node, tgt).target;
  auto proper = symbols(x);
  proper.erase(proper.begin());
  std::vector<Part> parts;
  for (const Splitter& sp : splitters) parts.push_back(Part{x, {proper.begin(), proper.end()}, sp});
  return split_node_impl(node, tgt, parts, true, true);
}

}  // namespace bac
