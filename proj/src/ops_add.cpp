#include <algorithm>
#include <map>
#include <set>

#include "bac/unchecked.hpp"
#include "ops_internal.hpp"

namespace bac {

using detail::require_arrow;
using detail::require_proper;
using detail::sym_str;

namespace {

std::map<Symbol, Arrow> arrow_table(const Node& node) {
  std::map<Symbol, Arrow> out;
  for (Arrow& a : arrows(node)) {
    Symbol s = symbol(a);
    out.emplace(s, std::move(a));
  }
  return out;
}

std::vector<Symbol> keys_mapping_to(const Dict& dict, Symbol value) {
  std::vector<Symbol> out;
  for (auto [k, v] : dict) {
    if (v == value) out.push_back(k);
  }
  return out;
}

bool coangle_pair_ok(const std::map<Symbol, Arrow>& table, const Coangle& c1, const Coangle& c2) {
  Symbol s1 = c1.short_chain.fst, s2 = c2.short_chain.fst;
  for (const auto& [z, a_z] : table) {
    auto q1s = keys_mapping_to(a_z.dict, s1);
    auto q2s = keys_mapping_to(a_z.dict, s2);
    for (Symbol q1 : q1s) {
      Arrow a1 = require_arrow(a_z.target, q1);
      for (Symbol q2 : q2s) {
        Arrow a2 = require_arrow(a_z.target, q2);
        bool before = a1.dict.at(c1.short_chain.snd) == a2.dict.at(c2.short_chain.snd);
        bool after = a1.dict.at(c1.long_chain.snd) == a2.dict.at(c2.long_chain.snd);
        if (before && !after) return false;
      }
    }
  }
  return true;
}

bool angle_pair_ok(const Node& s_node, const Node& t_node, const Angle& x1, const Angle& x2) {
  auto t1 = arrow(t_node, x1.from_tgt.snd), t2 = arrow(t_node, x2.from_tgt.snd);
  auto y1 = arrow(s_node, x1.from_src.snd), y2 = arrow(s_node, x2.from_src.snd);
  if (!t1 || !t2 || !y1 || !y2) return false;
  if (!(t1->target == y1->target) || !(t2->target == y2->target)) return false;
  for (auto [w1, v1] : t1->dict) {
    for (auto [w2, v2] : t2->dict) {
      if (v1 == v2 && y1->dict.at(w1) != y2->dict.at(w2)) return false;
    }
  }
  return true;
}

void check_inserter(const Node& node, Symbol src, const Inserter& inserter) {
  for (const Arrow& a_p : arrows(node)) {
    Symbol p = symbol(a_p);
    if (p == src) continue;
    auto rs = keys_mapping_to(a_p.dict, src);
    if (rs.empty()) continue;
    if (!inserter) throw Error(ErrorKind::InserterClash, "no inserter given for object " + sym_str(p));
    std::set<Symbol> minted;
    for (Symbol r : rs) {
      Symbol m = inserter(Chain2{p, r});
      if (m == kBase || has_symbol(a_p.target, m) || !minted.insert(m).second) {
        throw Error(ErrorKind::InserterClash,
                    "inserter gives " + sym_str(m) + " for " + to_string(Chain2{p, r}) + ", which is not fresh");
      }
    }
  }
}

/// Adds the new incoming morphisms on every ancestor of `src` after its node
/// has been replaced by `replacement`, which gained the symbol `sym`.
Node insert_under(const Node& node, Symbol src, Symbol sym, const Node& replacement, const Inserter& inserter) {
  return modify_under(node, src, [&](const Arrow& curr, const Edge& e, Location loc, const Node* inner) {
    Symbol p = symbol(curr);
    Dict dict = e.dict;
    if (loc == Location::Boundary) {
      dict.emplace(sym, inserter(Chain2{p, e.dict.at(kBase)}));
      return std::vector<Edge>{Edge{std::move(dict), replacement}};
    }
    Arrow child = join(curr, to_arrow(e));
    Symbol m = symbol(child);
    for (auto [k, v] : e.dict) {
      if (child.dict.at(k) == src) dict.emplace(inserter(Chain2{m, k}), inserter(Chain2{p, v}));
    }
    return std::vector<Edge>{Edge{std::move(dict), *inner}};
  });
}

}  // namespace

Picklists find_valid_coangles_angles(const Node& node, Symbol src, Symbol tgt) {
  if (src == kBase) throw Error(ErrorKind::BaseReserved, "the root already has its only morphism to every object");
  Arrow a_s = require_arrow(node, src);
  Arrow a_t = require_arrow(node, tgt);
  for (auto [k, v] : a_t.dict) {
    if (v == src) {
      throw Error(ErrorKind::LoopDetected,
                  "object " + sym_str(tgt) + " already reaches " + sym_str(src) + "; the new morphism would close a loop");
    }
  }
  auto table = arrow_table(node);
  Picklists out;
  for (Chain2 c : suffix_nd(node, src)) {
    const Arrow& a1 = table.at(c.fst);
    std::vector<Coangle> list;
    for (Symbol r : keys_mapping_to(a1.dict, tgt)) {
      Coangle cand{c, Chain2{c.fst, r}};
      if (coangle_pair_ok(table, cand, cand)) list.push_back(cand);
    }
    out.coangles.push_back(std::move(list));
  }
  const Node& s_node = a_s.target;
  const Node& t_node = a_t.target;
  for (Symbol t : symbols(t_node)) {
    if (t == kBase || !nondecomposable(t_node, t)) continue;
    std::vector<Angle> list;
    for (Symbol y : keys_mapping_to(a_s.dict, a_t.dict.at(t))) {
      Angle cand{Chain2{tgt, t}, Chain2{src, y}};
      if (angle_pair_ok(s_node, t_node, cand, cand)) list.push_back(cand);
    }
    out.angles.push_back(std::move(list));
  }
  return out;
}

bool compatible_angles(const Node& node, Symbol src, Symbol tgt, std::span<const Angle> angles) {
  Node s_node = require_arrow(node, src).target;
  Node t_node = require_arrow(node, tgt).target;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    for (std::size_t j = i; j < angles.size(); ++j) {
      if (!angle_pair_ok(s_node, t_node, angles[i], angles[j])) return false;
    }
  }
  return true;
}

bool compatible_coangles(const Node& node, std::span<const Coangle> coangles) {
  auto table = arrow_table(node);
  for (std::size_t i = 0; i < coangles.size(); ++i) {
    for (std::size_t j = i; j < coangles.size(); ++j) {
      if (!coangle_pair_ok(table, coangles[i], coangles[j])) return false;
    }
  }
  return true;
}

bool compatible_coangles_angles(const Node& node, std::span<const Coangle> coangles, std::span<const Angle> angles) {
  for (const Coangle& c : coangles) {
    Node p = require_arrow(node, c.short_chain.fst).target;
    auto to_src = arrow(p, c.short_chain.snd);
    auto to_tgt = arrow(p, c.long_chain.snd);
    if (!to_src || !to_tgt) return false;
    for (const Angle& x : angles) {
      auto lhs = to_src->dict.find(x.from_src.snd);
      auto rhs = to_tgt->dict.find(x.from_tgt.snd);
      if (lhs == to_src->dict.end() || rhs == to_tgt->dict.end() || lhs->second != rhs->second) return false;
    }
  }
  return true;
}

namespace {

Node add_nd_symbol_impl(const Node& node, Symbol src, Symbol tgt, Symbol sym, std::span<const Coangle> src_alts,
                        std::span<const Angle> tgt_alts, bool checked) {
  Picklists picks = find_valid_coangles_angles(node, src, tgt);
  Arrow a_s = require_arrow(node, src);
  Arrow a_t = require_arrow(node, tgt);
  const Node& s_node = a_s.target;
  const Node& t_node = a_t.target;
  if (sym == kBase) throw Error(ErrorKind::BaseReserved, "new morphism needs a proper symbol");
  if (has_symbol(s_node, sym)) {
    throw Error(ErrorKind::SymbolCollision, "symbol " + sym_str(sym) + " is already used on object " + sym_str(src));
  }

  // Selections are matched to picklists by their fixed chain, so order does
  // not matter.
  std::map<Chain2, Symbol> coangle_choice;
  for (const Coangle& c : src_alts) {
    if (!coangle_choice.emplace(c.short_chain, c.long_chain.snd).second) {
      throw Error(ErrorKind::PicklistMismatch, "two coangles chosen for " + to_string(c.short_chain));
    }
  }
  if (coangle_choice.size() != picks.coangles.size()) {
    throw Error(ErrorKind::PicklistMismatch, "expected " + std::to_string(picks.coangles.size()) + " coangles, got " +
                                                 std::to_string(src_alts.size()));
  }
  for (const auto& list : picks.coangles) {
    bool ok = std::any_of(list.begin(), list.end(), [&](const Coangle& c) {
      auto it = coangle_choice.find(c.short_chain);
      return it != coangle_choice.end() && it->second == c.long_chain.snd;
    });
    if (!ok) throw Error(ErrorKind::PicklistMismatch, "a chosen coangle is not among the valid candidates");
  }
  std::map<Symbol, Symbol> angle_choice;
  for (const Angle& x : tgt_alts) {
    if (!angle_choice.emplace(x.from_tgt.snd, x.from_src.snd).second) {
      throw Error(ErrorKind::PicklistMismatch, "two angles chosen for " + to_string(x.from_tgt));
    }
  }
  if (angle_choice.size() != picks.angles.size()) {
    throw Error(ErrorKind::PicklistMismatch, "expected " + std::to_string(picks.angles.size()) + " angles, got " +
                                                 std::to_string(tgt_alts.size()));
  }
  for (const auto& list : picks.angles) {
    bool ok = std::any_of(list.begin(), list.end(), [&](const Angle& x) {
      auto it = angle_choice.find(x.from_tgt.snd);
      return it != angle_choice.end() && it->second == x.from_src.snd;
    });
    if (!ok) throw Error(ErrorKind::PicklistMismatch, "a chosen angle is not among the valid candidates");
  }
  if (checked && (!compatible_angles(node, src, tgt, tgt_alts) || !compatible_coangles(node, src_alts) ||
                  !compatible_coangles_angles(node, src_alts, tgt_alts))) {
    throw Error(ErrorKind::IncompatibleChoices, "the chosen coangles and angles do not fit together");
  }

  // Dictionary of the new edge: where each outgoing morphism of tgt lands
  // once precomposed with the new morphism.
  std::map<Symbol, Symbol> outgoing{{kBase, sym}};
  std::function<Symbol(Symbol)> image = [&](Symbol t) -> Symbol {
    if (auto it = outgoing.find(t); it != outgoing.end()) return it->second;
    Symbol out = kBase;
    if (nondecomposable(t_node, t)) {
      out = angle_choice.at(t);
    } else {
      for (const Edge& e : t_node.edges()) {
        auto hit = std::find_if(e.dict.begin(), e.dict.end(), [&](auto kv) { return kv.first != kBase && kv.second == t; });
        if (hit == e.dict.end()) continue;
        auto via = arrow(s_node, image(e.dict.at(kBase)));
        if (!via || !via->dict.contains(hit->first)) {
          throw Error(ErrorKind::IncompatibleChoices, "chosen angles leave " + sym_str(t) + " without an image");
        }
        out = via->dict.at(hit->first);
        break;
      }
    }
    outgoing.emplace(t, out);
    return out;
  };
  Dict d;
  for (Symbol t : symbols(t_node)) d.emplace(t, image(t));

  std::vector<Edge> s_edges(s_node.edges().begin(), s_node.edges().end());
  s_edges.push_back(Edge{std::move(d), t_node});
  Node s_new(std::move(s_edges));

  Node out;
  if (src == kBase) {
    out = s_new;
  } else {
    auto table = arrow_table(node);
    std::map<Chain2, Symbol> memo;
    // Existing morphism p -> tgt equal to (p, r) followed by the new one.
    std::function<Symbol(Symbol, Symbol)> compose = [&](Symbol p, Symbol r) -> Symbol {
      if (auto it = coangle_choice.find({p, r}); it != coangle_choice.end()) return it->second;
      if (auto it = memo.find({p, r}); it != memo.end()) return it->second;
      const Arrow& a_p = table.at(p);
      for (const Edge& e1 : a_p.target.edges()) {
        for (auto [k, v] : e1.dict) {
          if (v != r || k == kBase) continue;
          Symbol m = a_p.dict.at(e1.dict.at(kBase));
          auto it = e1.dict.find(compose(m, k));
          if (it == e1.dict.end()) {
            throw Error(ErrorKind::IncompatibleChoices, "composite through " + to_string(Chain2{p, r}) + " is undefined");
          }
          memo.emplace(Chain2{p, r}, it->second);
          return it->second;
        }
      }
      throw Error(ErrorKind::PicklistMismatch, "no coangle chosen for " + to_string(Chain2{p, r}));
    };
    out = modify_under(node, src, [&](const Arrow& curr, const Edge& e, Location loc, const Node* inner) {
      if (loc == Location::Inner) return std::vector<Edge>{Edge{e.dict, *inner}};
      Dict dict = e.dict;
      dict.emplace(sym, compose(symbol(curr), e.dict.at(kBase)));
      return std::vector<Edge>{Edge{std::move(dict), s_new}};
    });
  }
  if (checked) detail::check_result(out, ErrorKind::IncompatibleChoices, "the chosen coangles and angles do not fit together");
  return out;
}

}  // namespace

Node add_nd_symbol(const Node& node, Symbol src, Symbol tgt, Symbol sym, std::span<const Coangle> src_alts,
                   std::span<const Angle> tgt_alts) {
  return add_nd_symbol_impl(node, src, tgt, sym, src_alts, tgt_alts, true);
}

Node unchecked::add_nd_symbol(const Node& node, Symbol src, Symbol tgt, Symbol sym, std::span<const Coangle> src_alts,
                              std::span<const Angle> tgt_alts) {
  return add_nd_symbol_impl(node, src, tgt, sym, src_alts, tgt_alts, false);
}

Node add_leaf_node(const Node& node, Symbol src, Symbol sym, const Inserter& inserter) {
  if (src == kBase) throw Error(ErrorKind::BaseReserved, "use merge_root_nodes with a singleton to add a root object");
  if (sym == kBase) throw Error(ErrorKind::BaseReserved, "new object needs a proper symbol");
  Node s_node = require_arrow(node, src).target;
  if (has_symbol(s_node, sym)) {
    throw Error(ErrorKind::SymbolCollision, "symbol " + sym_str(sym) + " is already used on object " + sym_str(src));
  }
  check_inserter(node, src, inserter);
  std::vector<Edge> edges(s_node.edges().begin(), s_node.edges().end());
  edges.push_back(Edge{{{kBase, sym}}, Node()});
  Node out = insert_under(node, src, sym, Node(std::move(edges)), inserter);
  detail::debug_check(out, "add_leaf_node");
  return out;
}

Node add_parent_node(const Node& node, Chain2 morphism, Symbol sym, const Dict& mapping, const Inserter& inserter) {
  auto [src, tgt] = morphism;
  Node s_node = require_arrow(node, src).target;
  require_proper(s_node, tgt);
  Arrow a_t = require_arrow(s_node, tgt);
  if (dict_keys(mapping) != symbols(a_t.target)) {
    throw Error(ErrorKind::InvalidMapping, "mapping keys must be exactly the symbols of the target of " +
                                               to_string(morphism));
  }
  if (dict_values(mapping).size() != mapping.size()) {
    throw Error(ErrorKind::NotInjective, "mapping sends two symbols to the same value");
  }
  for (auto [k, v] : mapping) {
    if (v == kBase) throw Error(ErrorKind::BaseReserved, "mapping cannot use the base symbol as a value");
  }
  if (sym == kBase) throw Error(ErrorKind::BaseReserved, "new object needs a proper symbol");
  if (has_symbol(s_node, sym)) {
    throw Error(ErrorKind::SymbolCollision, "symbol " + sym_str(sym) + " is already used on object " + sym_str(src));
  }
  if (src != kBase) check_inserter(node, src, inserter);

  Node middle({Edge{mapping, a_t.target}});
  Dict into{{kBase, sym}};
  for (auto [t, m] : mapping) into.emplace(m, a_t.dict.at(t));
  std::vector<Edge> edges;
  for (const Edge& e : s_node.edges()) {
    if (e.dict.at(kBase) != tgt) edges.push_back(e);
  }
  edges.push_back(Edge{std::move(into), std::move(middle)});
  Node s_new(std::move(edges));
  Node out = src == kBase ? s_new : insert_under(node, src, sym, s_new, inserter);
  detail::debug_check(out, "add_parent_node");
  return out;
}

Node add_parent_node_on_root(const Node& node, Symbol tgt, Symbol sym, const Dict& mapping) {
  return add_parent_node(node, Chain2{kBase, tgt}, sym, mapping, Inserter{});
}

}  // namespace bac
