#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bac/error.hpp"

namespace bac {

/// Name of an object inside one node's namespace. 0 is the base symbol.
using Symbol = std::uint64_t;
inline constexpr Symbol kBase = 0;

/// Edge weight: maps symbols of the child node to symbols of the parent node.
/// A sorted vector of pairs with the subset of the std::map interface the
/// library needs; dictionaries are small and copied often.
class Dict {
 public:
  using value_type = std::pair<Symbol, Symbol>;
  using iterator = std::vector<value_type>::iterator;
  using const_iterator = std::vector<value_type>::const_iterator;

  Dict() = default;
  Dict(std::initializer_list<value_type> init) {
    for (const auto& [k, v] : init) emplace(k, v);
  }

  iterator begin() noexcept { return items_.begin(); }
  iterator end() noexcept { return items_.end(); }
  const_iterator begin() const noexcept { return items_.begin(); }
  const_iterator end() const noexcept { return items_.end(); }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  void reserve(std::size_t n) { items_.reserve(n); }

  const_iterator find(Symbol k) const {
    auto it = lower(k);
    return it != items_.end() && it->first == k ? it : items_.end();
  }
  bool contains(Symbol k) const { return find(k) != items_.end(); }
  Symbol at(Symbol k) const {
    auto it = find(k);
    if (it == items_.end()) throw std::out_of_range("dictionary has no key " + std::to_string(k));
    return it->second;
  }
  Symbol& operator[](Symbol k) { return emplace(k, 0).first->second; }

  std::pair<iterator, bool> emplace(Symbol k, Symbol v) {
    if (items_.empty() || items_.back().first < k) {
      items_.emplace_back(k, v);
      return {items_.end() - 1, true};
    }
    auto pos = items_.begin() + (lower(k) - items_.cbegin());
    if (pos != items_.end() && pos->first == k) return {pos, false};
    return {items_.insert(pos, value_type{k, v}), true};
  }
  std::size_t erase(Symbol k) {
    auto it = find(k);
    if (it == items_.end()) return 0;
    items_.erase(it);
    return 1;
  }

  friend bool operator==(const Dict&, const Dict&) = default;
  friend std::strong_ordering operator<=>(const Dict& a, const Dict& b) { return a.items_ <=> b.items_; }

 private:
  const_iterator lower(Symbol k) const {
    return std::lower_bound(items_.begin(), items_.end(), k, [](const value_type& p, Symbol s) { return p.first < s; });
  }

  std::vector<value_type> items_;
};

struct Edge;

/// A bounded acyclic category, stored as an immutable tree whose edges are
/// weighted by dictionaries. Equality is structural; subtrees may be shared
/// between values but sharing is never observable.
class Node {
 public:
  Node() = default;
  /// Builds a node from edges in any order; duplicates collapse.
  explicit Node(std::vector<Edge> edges);

  std::span<const Edge> edges() const;
  bool is_leaf() const noexcept { return impl_ == nullptr; }
  std::size_t hash() const noexcept;

  friend bool operator==(const Node& a, const Node& b);
  friend std::strong_ordering operator<=>(const Node& a, const Node& b);

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

struct Edge {
  Dict dict;
  Node target;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend std::strong_ordering operator<=>(const Edge& a, const Edge& b);
};

struct NodeHash {
  std::size_t operator()(const Node& n) const noexcept { return n.hash(); }
};

/// Composite of a path: the downward functor it represents, which is also an
/// initial morphism (and hence an object) of the source node.
struct Arrow {
  Dict dict;
  Node target;

  friend bool operator==(const Arrow&, const Arrow&) = default;
};

/// A morphism named by two symbols: `fst` on the reference node, `snd` on the
/// node referenced by `fst`.
struct Chain2 {
  Symbol fst = kBase;
  Symbol snd = kBase;

  friend auto operator<=>(const Chain2&, const Chain2&) = default;
};

enum class Location { Inner, Boundary, Outer };

std::string to_string(Location loc);
std::string to_string(const Chain2& chain);
std::string to_string(const Dict& dict);

// -- symbols and dictionaries ------------------------------------------------

/// {0} together with every value of every outgoing dictionary, ascending.
std::vector<Symbol> symbols(const Node& node);
bool has_symbol(const Node& node, Symbol s);
/// One past the largest symbol of `node`.
Symbol fresh_symbol(const Node& node);

/// result[k] = outer[inner[k]]. Throws MissingKey if inner leaves outer's keys.
Dict cat(const Dict& outer, const Dict& inner);
Dict identity_dict(std::span<const Symbol> syms);
std::vector<Symbol> dict_keys(const Dict& dict);
std::vector<Symbol> dict_values(const Dict& dict);

// -- arrow algebra -------------------------------------------------------------

Arrow root(const Node& node);
Arrow to_arrow(const Edge& edge);
Arrow join(const Arrow& first, const Arrow& second);
Symbol symbol(const Arrow& a);
Location locate(const Arrow& a, Symbol s);
std::optional<Arrow> arrow(const Node& node, Symbol s);
/// Every arrow starting at `node`, one per symbol, ordered by symbol.
std::vector<Arrow> arrows(const Node& node);
/// All arrows a23 of divisor.target with join(divisor, a23) == dividend.
std::vector<Arrow> divide(const Arrow& divisor, const Arrow& dividend);

std::optional<std::pair<Arrow, Arrow>> arrow2(const Node& node, Chain2 chain);
Chain2 symbol2(const std::pair<Arrow, Arrow>& pair);

/// True iff `s` only ever appears as the image of the base symbol.
bool nondecomposable(const Node& node, Symbol s);
/// Chains (s1, s2) composing to `tgt` whose second step is nondecomposable.
std::vector<Chain2> suffix_nd(const Node& node, Symbol tgt);
/// Every chain (s1, s2) with s1, s2 proper composing to `tgt`, ascending.
std::vector<Chain2> proper_chains_to(const Node& node, Symbol tgt);

// -- traversal ---------------------------------------------------------------

/// Bottom-up accumulation. `visit(node, child_results)` receives one result
/// per edge of `node`, in edge order. Structurally equal subtrees are visited
/// once. Runs on an explicit stack, so depth is not bounded by the call stack.
template <class R, class Visit>
R fold(const Node& node, Visit&& visit) {
  std::unordered_map<Node, R, NodeHash> memo;
  struct Frame {
    Node node;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;
  stack.push_back({node, 0});
  while (!stack.empty()) {
    Frame& top = stack.back();
    auto edges = top.node.edges();
    if (top.next == 0 && memo.contains(top.node)) {
      stack.pop_back();
      continue;
    }
    bool pushed = false;
    while (top.next < edges.size()) {
      const Node& child = edges[top.next].target;
      ++top.next;
      if (!memo.contains(child)) {
        stack.push_back({child, 0});
        pushed = true;
        break;
      }
    }
    if (pushed) continue;
    std::vector<R> children;
    children.reserve(edges.size());
    for (const Edge& e : edges) children.push_back(memo.at(e.target));
    R result = visit(top.node, std::span<const R>(children));
    memo.emplace(top.node, std::move(result));
    stack.pop_back();
  }
  return memo.at(node);
}

template <class R>
struct EdgeVisit {
  const Edge* edge = nullptr;
  Location location = Location::Outer;
  /// Result for the child object; set only when location is Inner.
  const R* inner = nullptr;
};

/// Visits, once per object, every node from which the object `sym` is
/// reachable (the root included). `visit(curr, edge_visits)` gets the arrow
/// from the root to the visited node and one classified entry per edge.
/// Returns nullopt when sym == 0 (the root is the boundary).
template <class R, class Visit>
std::optional<R> fold_under(const Node& node, Symbol sym, Visit&& visit) {
  if (!has_symbol(node, sym)) {
    throw Error(ErrorKind::InvalidSymbol, "symbol " + std::to_string(sym) + " is not on the node");
  }
  if (sym == kBase) return std::nullopt;
  std::map<Symbol, R> memo;
  std::function<const R&(const Arrow&)> go = [&](const Arrow& curr) -> const R& {
    Symbol key = symbol(curr);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    auto edges = curr.target.edges();
    std::vector<EdgeVisit<R>> visits;
    visits.reserve(edges.size());
    for (const Edge& e : edges) {
      Arrow next = join(curr, to_arrow(e));
      EdgeVisit<R> v{&e, locate(next, sym), nullptr};
      if (v.location == Location::Inner) v.inner = &go(next);
      visits.push_back(v);
    }
    R result = visit(curr, std::span<const EdgeVisit<R>>(visits));
    return memo.emplace(key, std::move(result)).first->second;
  };
  return go(root(node));
}

/// Per-edge rewrite used by modify_under. `inner` is the rebuilt child when
/// the location is Inner and null otherwise.
using EdgeEdit =
    std::function<std::vector<Edge>(const Arrow& curr, const Edge& edge, Location loc, const Node* inner)>;

/// Rebuilds every node that reaches `sym`, replacing each of its edges by
/// whatever `edit` returns. Subtrees that do not reach `sym` are reused.
/// When sym == 0 the node is returned unchanged.
Node modify_under(const Node& node, Symbol sym, const EdgeEdit& edit);

/// Rebuilds every node reachable from the root, bottom-up; `edit` sees each
/// edge together with the already rebuilt child.
Node modify(const Node& node,
            const std::function<std::vector<Edge>(const Arrow& curr, const Edge& edge, const Node& child)>& edit);

// -- laws ----------------------------------------------------------------------

enum class Law { Totality, Surjectivity, Supportivity };
std::string to_string(Law law);

struct Violation {
  Law law;
  /// Edge indices from the root to the node where the violation was found.
  std::vector<std::size_t> path;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(Law law) const;
  std::string to_string() const;
};

/// Checks totality, surjectivity and supportivity (with the two derived laws)
/// at every distinct node. An empty report means the node is a valid BAC.
ValidationReport validate(const Node& node);

}  // namespace bac
