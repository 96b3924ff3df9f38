#include <algorithm>
#include <set>

#include "bac/unchecked.hpp"
#include "ops_internal.hpp"

namespace bac {

using detail::require_arrow;
using detail::require_proper;
using detail::sym_str;

Node empty() { return Node(); }

Node singleton(Symbol sym) {
  if (sym == kBase) throw Error(ErrorKind::BaseReserved, "a singleton needs a proper symbol");
  return Node({Edge{{{kBase, sym}}, Node()}});
}

Node merge_root_nodes(std::span<const Node> nodes) {
  std::set<Symbol> seen;
  std::vector<Edge> edges;
  for (const Node& n : nodes) {
    for (Symbol s : symbols(n)) {
      if (s != kBase && !seen.insert(s).second) {
        throw Error(ErrorKind::SymbolCollision, "symbol " + sym_str(s) + " appears on more than one root");
      }
    }
    edges.insert(edges.end(), n.edges().begin(), n.edges().end());
  }
  return Node(std::move(edges));
}

Node remove_leaf_node(const Node& node, Symbol tgt) {
  require_proper(node, tgt);
  Arrow a = require_arrow(node, tgt);
  if (!a.target.is_leaf()) throw Error(ErrorKind::NotLeaf, "object " + sym_str(tgt) + " still has outgoing morphisms");
  Node out = modify_under(node, tgt, [&](const Arrow& curr, const Edge& e, Location loc, const Node* inner) {
    if (loc == Location::Boundary) return std::vector<Edge>{};
    Arrow child = join(curr, to_arrow(e));
    Dict dict;
    for (auto [k, v] : e.dict) {
      if (child.dict.at(k) != tgt) dict.emplace(k, v);
    }
    return std::vector<Edge>{Edge{std::move(dict), *inner}};
  });
  detail::debug_check(out, "remove_leaf_node");
  return out;
}

namespace {

Node remove_nd_symbol_impl(const Node& node, Symbol src, Symbol tgt, bool checked) {
  Arrow s_arrow = require_arrow(node, src);
  const Node& s_node = s_arrow.target;
  require_proper(s_node, tgt);
  if (checked && !nondecomposable(s_node, tgt)) {
    throw Error(ErrorKind::NotNondecomposable,
                "symbol " + sym_str(tgt) + " on object " + sym_str(src) + " is a composite");
  }
  std::vector<Edge> kept;
  for (const Edge& e : s_node.edges()) {
    if (e.dict.at(kBase) != tgt) kept.push_back(e);
  }
  Node reduced(std::move(kept));
  if (checked) {
    auto expected = symbols(s_node);
    expected.erase(std::find(expected.begin(), expected.end(), tgt));
    if (symbols(reduced) != expected) {
      throw Error(ErrorKind::NoAlternativePath, "removing " + sym_str(tgt) + " from object " + sym_str(src) +
                                                    " leaves some morphisms with no other path");
    }
  }
  if (src == kBase) return reduced;
  Node out = modify_under(node, src, [&](const Arrow&, const Edge& e, Location loc, const Node* inner) {
    if (loc == Location::Boundary) {
      Dict dict = e.dict;
      dict.erase(tgt);
      return std::vector<Edge>{Edge{std::move(dict), reduced}};
    }
    if (checked && symbols(*inner) != symbols(e.target)) {
      throw Error(ErrorKind::NoAlternativePath,
                  "removing " + sym_str(tgt) + " from object " + sym_str(src) + " disconnects an ancestor morphism");
    }
    return std::vector<Edge>{Edge{e.dict, *inner}};
  });
  if (checked && symbols(out) != symbols(node)) {
    throw Error(ErrorKind::NoAlternativePath,
                "removing " + sym_str(tgt) + " from object " + sym_str(src) + " disconnects a root morphism");
  }
  return out;
}

}  // namespace

Node remove_nd_symbol(const Node& node, Symbol src, Symbol tgt) {
  Node out = remove_nd_symbol_impl(node, src, tgt, true);
  detail::debug_check(out, "remove_nd_symbol");
  return out;
}

Node unchecked::remove_nd_symbol(const Node& node, Symbol src, Symbol tgt) {
  return remove_nd_symbol_impl(node, src, tgt, false);
}

Node remove_node(const Node& node, Symbol tgt) {
  require_proper(node, tgt);
  Node x = require_arrow(node, tgt).target;
  // Morphisms into tgt disappear; morphisms through it survive as direct
  // edges to its children.
  Node out = modify_under(node, tgt, [&](const Arrow& curr, const Edge& e, Location loc, const Node* inner) {
    std::vector<Edge> result;
    if (loc == Location::Boundary) {
      for (const Edge& f : x.edges()) result.push_back(Edge{cat(e.dict, f.dict), f.target});
      return result;
    }
    Arrow child = join(curr, to_arrow(e));
    Dict dict;
    for (auto [k, v] : e.dict) {
      if (child.dict.at(k) != tgt) dict.emplace(k, v);
    }
    result.push_back(Edge{std::move(dict), *inner});
    return result;
  });
  detail::debug_check(out, "remove_node");
  return out;
}

Node merge_symbols(const Node& node, Symbol src, std::span<const Symbol> tgts, Symbol sym) {
  Arrow s_arrow = require_arrow(node, src);
  const Node& s_node = s_arrow.target;
  std::set<Symbol> group(tgts.begin(), tgts.end());
  if (group.empty()) throw Error(ErrorKind::NotFound, "nothing to merge");
  for (Symbol t : group) require_proper(s_node, t);
  if (sym == kBase) throw Error(ErrorKind::BaseReserved, "merged symbol cannot be the base symbol");
  if (!group.contains(sym) && has_symbol(s_node, sym)) {
    throw Error(ErrorKind::SymbolCollision, "symbol " + sym_str(sym) + " is already used on object " + sym_str(src));
  }

  Arrow first = require_arrow(s_node, *group.begin());
  for (Symbol t : group) {
    Arrow a = require_arrow(s_node, t);
    Dict lhs = a.dict, rhs = first.dict;
    lhs.erase(kBase);
    rhs.erase(kBase);
    if (!(a.target == first.target) || lhs != rhs) {
      throw Error(ErrorKind::TargetMismatch, "symbols " + sym_str(*group.begin()) + " and " + sym_str(t) +
                                                  " do not name parallel morphisms with the same outgoing data");
    }
  }

  std::vector<Edge> edges;
  for (const Edge& e : s_node.edges()) {
    Dict dict;
    for (auto [k, v] : e.dict) dict.emplace(k, group.contains(v) ? sym : v);
    edges.push_back(Edge{std::move(dict), e.target});
  }
  Node merged(std::move(edges));
  if (src == kBase) {
    detail::debug_check(merged, "merge_symbols");
    return merged;
  }
  Node out = modify_under(node, src, [&](const Arrow&, const Edge& e, Location loc, const Node* inner) {
    if (loc == Location::Inner) return std::vector<Edge>{Edge{e.dict, *inner}};
    Dict dict;
    std::optional<Symbol> image;
    for (auto [k, v] : e.dict) {
      if (!group.contains(k)) {
        dict.emplace(k, v);
        continue;
      }
      if (image && *image != v) {
        throw Error(ErrorKind::IncomingMismatch, "an incoming morphism tells the merged symbols apart (" +
                                                      sym_str(*image) + " vs " + sym_str(v) + ")");
      }
      image = v;
    }
    dict.emplace(sym, *image);
    return std::vector<Edge>{Edge{std::move(dict), merged}};
  });
  detail::debug_check(out, "merge_symbols");
  return out;
}

Node relabel(const Node& node, Symbol tgt, const Dict& mapping) {
  Node t_node = require_arrow(node, tgt).target;
  auto syms = symbols(t_node);
  if (dict_keys(mapping) != syms) {
    throw Error(ErrorKind::NotBijective, "mapping keys must be exactly the symbols of object " + sym_str(tgt));
  }
  if (dict_values(mapping).size() != mapping.size()) {
    throw Error(ErrorKind::NotBijective, "mapping sends two symbols to the same value");
  }
  if (mapping.at(kBase) != kBase) throw Error(ErrorKind::BaseMoved, "mapping must fix the base symbol");

  std::vector<Edge> edges;
  for (const Edge& e : t_node.edges()) edges.push_back(Edge{cat(mapping, e.dict), e.target});
  Node renamed(std::move(edges));
  if (tgt == kBase) return renamed;
  return modify_under(node, tgt, [&](const Arrow&, const Edge& e, Location loc, const Node* inner) {
    if (loc == Location::Inner) return std::vector<Edge>{Edge{e.dict, *inner}};
    Dict dict;
    for (auto [k, v] : e.dict) dict.emplace(mapping.at(k), v);
    return std::vector<Edge>{Edge{std::move(dict), renamed}};
  });
}

Node rewire(const Node& node, Symbol tgt, std::span<const Symbol> syms) {
  Node t_node = require_arrow(node, tgt).target;
  std::vector<Edge> edges;
  for (Symbol s : syms) {
    require_proper(t_node, s);
    Arrow a = require_arrow(t_node, s);
    edges.push_back(Edge{std::move(a.dict), std::move(a.target)});
  }
  Node rewired(std::move(edges));
  if (symbols(rewired) != symbols(t_node)) {
    throw Error(ErrorKind::CoverageGap, "the chosen generators do not reach every symbol of object " + sym_str(tgt));
  }
  if (tgt == kBase) return rewired;
  return modify_under(node, tgt, [&](const Arrow&, const Edge& e, Location loc, const Node* inner) {
    return std::vector<Edge>{Edge{e.dict, loc == Location::Inner ? *inner : rewired}};
  });
}

}  // namespace bac
