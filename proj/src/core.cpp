#include "bac/core.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace bac {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingKey: return "MissingKey";
    case ErrorKind::InvalidSymbol: return "InvalidSymbol";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::BaseReserved: return "BaseReserved";
    case ErrorKind::SymbolCollision: return "SymbolCollision";
    case ErrorKind::NotLeaf: return "NotLeaf";
    case ErrorKind::NotNondecomposable: return "NotNondecomposable";
    case ErrorKind::NoAlternativePath: return "NoAlternativePath";
    case ErrorKind::LoopDetected: return "LoopDetected";
    case ErrorKind::IncompatibleChoices: return "IncompatibleChoices";
    case ErrorKind::PicklistMismatch: return "PicklistMismatch";
    case ErrorKind::InserterClash: return "InserterClash";
    case ErrorKind::InvalidMapping: return "InvalidMapping";
    case ErrorKind::NotInjective: return "NotInjective";
    case ErrorKind::NotBijective: return "NotBijective";
    case ErrorKind::BaseMoved: return "BaseMoved";
    case ErrorKind::NotSplittable: return "NotSplittable";
    case ErrorKind::CoverageGap: return "CoverageGap";
    case ErrorKind::SplitterClash: return "SplitterClash";
    case ErrorKind::IncomingMismatch: return "IncomingMismatch";
    case ErrorKind::TargetMismatch: return "TargetMismatch";
    case ErrorKind::ZipMismatch: return "ZipMismatch";
    case ErrorKind::MergerClash: return "MergerClash";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::LawViolation: return "LawViolation";
  }
  return "Unknown";
}

namespace {

std::size_t mix(std::size_t h, std::uint64_t v) {
  // splitmix64 finalizer, fixed width so hashes agree across platforms
  std::uint64_t z = static_cast<std::uint64_t>(h) ^ (v + 0x9e3779b97f4a7c15ULL + (static_cast<std::uint64_t>(h) << 6));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return static_cast<std::size_t>(z ^ (z >> 31));
}

}  // namespace

struct Node::Impl {
  std::vector<Edge> edges;
  std::size_t hash = 0;
};

Node::Node(std::vector<Edge> edges) {
  if (edges.empty()) return;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  auto impl = std::make_shared<Impl>();
  std::size_t h = mix(0, edges.size());
  for (const Edge& e : edges) {
    h = mix(h, e.dict.size());
    for (auto [k, v] : e.dict) h = mix(mix(h, k), v);
    h = mix(h, e.target.hash());
  }
  impl->edges = std::move(edges);
  impl->hash = h;
  impl_ = std::move(impl);
}

std::span<const Edge> Node::edges() const {
  if (!impl_) return {};
  return impl_->edges;
}

std::size_t Node::hash() const noexcept { return impl_ ? impl_->hash : 0x5bd1e995; }

bool operator==(const Node& a, const Node& b) {
  if (a.impl_ == b.impl_) return true;
  if (!a.impl_ || !b.impl_) return false;
  if (a.impl_->hash != b.impl_->hash) return false;
  return a.impl_->edges == b.impl_->edges;
}

std::strong_ordering operator<=>(const Node& a, const Node& b) {
  if (a.impl_ == b.impl_) return std::strong_ordering::equal;
  auto ea = a.edges();
  auto eb = b.edges();
  return std::lexicographical_compare_three_way(ea.begin(), ea.end(), eb.begin(), eb.end());
}

std::strong_ordering operator<=>(const Edge& a, const Edge& b) {
  if (auto c = a.dict <=> b.dict; c != 0) return c;
  return a.target <=> b.target;
}

std::string to_string(Location loc) {
  switch (loc) {
    case Location::Inner: return "Inner";
    case Location::Boundary: return "Boundary";
    case Location::Outer: return "Outer";
  }
  return "?";
}

std::string to_string(const Chain2& chain) {
  return "(" + std::to_string(chain.fst) + "," + std::to_string(chain.snd) + ")";
}

std::string to_string(const Dict& dict) {
  std::string out = "{";
  bool first = true;
  for (auto [k, v] : dict) {
    if (!first) out += ",";
    first = false;
    out += std::to_string(k) + "->" + std::to_string(v);
  }
  return out + "}";
}

std::vector<Symbol> symbols(const Node& node) {
  std::size_t total = 1;
  for (const Edge& e : node.edges()) total += e.dict.size();
  std::vector<Symbol> out;
  out.reserve(total);
  out.push_back(kBase);
  for (const Edge& e : node.edges()) {
    for (auto [k, v] : e.dict) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool has_symbol(const Node& node, Symbol s) {
  if (s == kBase) return true;
  for (const Edge& e : node.edges()) {
    for (auto [k, v] : e.dict) {
      if (v == s) return true;
    }
  }
  return false;
}

Symbol fresh_symbol(const Node& node) { return symbols(node).back() + 1; }

Dict cat(const Dict& outer, const Dict& inner) {
  Dict out;
  out.reserve(inner.size());
  for (auto [k, v] : inner) {
    auto it = outer.find(v);
    if (it == outer.end()) {
      throw Error(ErrorKind::MissingKey, "symbol " + std::to_string(v) + " is not a key of " + to_string(outer));
    }
    out.emplace(k, it->second);
  }
  return out;
}

Dict identity_dict(std::span<const Symbol> syms) {
  Dict out;
  out.reserve(syms.size());
  for (Symbol s : syms) out.emplace(s, s);
  return out;
}

std::vector<Symbol> dict_keys(const Dict& dict) {
  std::vector<Symbol> out;
  out.reserve(dict.size());
  for (auto [k, v] : dict) out.push_back(k);
  return out;
}

std::vector<Symbol> dict_values(const Dict& dict) {
  std::vector<Symbol> out;
  out.reserve(dict.size());
  for (auto [k, v] : dict) out.push_back(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Arrow root(const Node& node) {
  auto syms = symbols(node);
  return Arrow{identity_dict(syms), node};
}

Arrow to_arrow(const Edge& edge) { return Arrow{edge.dict, edge.target}; }

Arrow join(const Arrow& first, const Arrow& second) { return Arrow{cat(first.dict, second.dict), second.target}; }

Symbol symbol(const Arrow& a) {
  auto it = a.dict.find(kBase);
  if (it == a.dict.end()) throw Error(ErrorKind::MissingKey, "arrow dictionary has no base key");
  return it->second;
}

Location locate(const Arrow& a, Symbol s) {
  Symbol base = symbol(a);
  if (s == base) return Location::Boundary;
  for (auto [k, v] : a.dict) {
    if (v == s) return Location::Inner;
  }
  return Location::Outer;
}

std::optional<Arrow> arrow(const Node& node, Symbol s) {
  if (s == kBase) return root(node);
  for (const Edge& e : node.edges()) {
    for (auto [k, v] : e.dict) {
      if (v != s) continue;
      auto sub = arrow(e.target, k);
      if (sub) return join(to_arrow(e), *sub);
    }
  }
  return std::nullopt;
}

std::vector<Arrow> arrows(const Node& node) {
  using Table = std::map<Symbol, Arrow>;
  std::unordered_map<Node, Table, NodeHash> tables;
  fold<int>(node, [&](const Node& n, std::span<const int>) {
    Table out;
    out.emplace(kBase, root(n));
    for (const Edge& e : n.edges()) {
      for (const auto& [s, a] : tables.at(e.target)) {
        Symbol key = e.dict.at(a.dict.at(kBase));
        if (!out.contains(key)) out.emplace(key, Arrow{cat(e.dict, a.dict), a.target});
      }
    }
    tables.emplace(n, std::move(out));
    return 0;
  });
  const Table& table = tables.at(node);
  std::vector<Arrow> out;
  out.reserve(table.size());
  for (const auto& [s, a] : table) out.push_back(a);
  return out;
}

std::vector<Arrow> divide(const Arrow& divisor, const Arrow& dividend) {
  std::vector<Arrow> out;
  Symbol want = symbol(dividend);
  for (Symbol s : symbols(divisor.target)) {
    auto it = divisor.dict.find(s);
    if (it == divisor.dict.end() || it->second != want) continue;
    auto candidate = arrow(divisor.target, s);
    if (candidate && join(divisor, *candidate) == dividend) out.push_back(std::move(*candidate));
  }
  return out;
}

std::optional<std::pair<Arrow, Arrow>> arrow2(const Node& node, Chain2 chain) {
  auto first = arrow(node, chain.fst);
  if (!first) return std::nullopt;
  auto second = arrow(first->target, chain.snd);
  if (!second) return std::nullopt;
  return std::make_pair(std::move(*first), std::move(*second));
}

Chain2 symbol2(const std::pair<Arrow, Arrow>& pair) { return Chain2{symbol(pair.first), symbol(pair.second)}; }

bool nondecomposable(const Node& node, Symbol s) {
  if (s == kBase || !has_symbol(node, s)) {
    throw Error(ErrorKind::InvalidSymbol, "symbol " + std::to_string(s) + " is not a proper symbol");
  }
  for (const Edge& e : node.edges()) {
    for (auto [k, v] : e.dict) {
      if (v == s && k != kBase) return false;
    }
  }
  return true;
}

std::vector<Chain2> suffix_nd(const Node& node, Symbol tgt) {
  if (!has_symbol(node, tgt)) {
    throw Error(ErrorKind::InvalidSymbol, "symbol " + std::to_string(tgt) + " is not on the node");
  }
  std::vector<Chain2> out;
  if (tgt == kBase) return out;
  for (const Arrow& a : arrows(node)) {
    Symbol s1 = symbol(a);
    for (auto [k, v] : a.dict) {
      if (v == tgt && k != kBase && nondecomposable(a.target, k)) out.push_back({s1, k});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Chain2> proper_chains_to(const Node& node, Symbol tgt) {
  if (!has_symbol(node, tgt)) {
    throw Error(ErrorKind::InvalidSymbol, "symbol " + std::to_string(tgt) + " is not on the node");
  }
  std::vector<Chain2> out;
  for (const Arrow& a : arrows(node)) {
    Symbol s1 = symbol(a);
    if (s1 == kBase) continue;
    for (auto [k, v] : a.dict) {
      if (v == tgt && k != kBase) out.push_back({s1, k});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Node modify_under(const Node& node, Symbol sym, const EdgeEdit& edit) {
  auto result = fold_under<Node>(node, sym, [&](const Arrow& curr, std::span<const EdgeVisit<Node>> visits) {
    std::vector<Edge> edges;
    for (const auto& v : visits) {
      if (v.location == Location::Outer) {
        edges.push_back(*v.edge);
        continue;
      }
      auto replaced = edit(curr, *v.edge, v.location, v.inner);
      edges.insert(edges.end(), std::make_move_iterator(replaced.begin()), std::make_move_iterator(replaced.end()));
    }
    return Node(std::move(edges));
  });
  return result ? *result : node;
}

Node modify(const Node& node,
            const std::function<std::vector<Edge>(const Arrow& curr, const Edge& edge, const Node& child)>& edit) {
  std::map<Symbol, Node> memo;
  std::function<Node(const Arrow&)> go = [&](const Arrow& curr) -> Node {
    Symbol key = symbol(curr);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<Edge> edges;
    for (const Edge& e : curr.target.edges()) {
      Node child = go(join(curr, to_arrow(e)));
      auto replaced = edit(curr, e, child);
      edges.insert(edges.end(), replaced.begin(), replaced.end());
    }
    Node out(std::move(edges));
    memo.emplace(key, out);
    return out;
  };
  return go(root(node));
}

// -- validation ---------------------------------------------------------------

std::string to_string(Law law) {
  switch (law) {
    case Law::Totality: return "Totality";
    case Law::Surjectivity: return "Surjectivity";
    case Law::Supportivity: return "Supportivity";
  }
  return "?";
}

bool ValidationReport::has(Law law) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.law == law; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const Violation& v : violations) {
    out << bac::to_string(v.law) << " at [";
    for (std::size_t i = 0; i < v.path.size(); ++i) out << (i ? "," : "") << v.path[i];
    out << "]: " << v.detail << "\n";
  }
  return out.str();
}

namespace {

struct NodeCheck {
  std::map<Symbol, Arrow> arrows;
  std::vector<Violation> local;  // paths relative to this node
};

NodeCheck check_node(const Node& n, const std::vector<const NodeCheck*>& children) {
  NodeCheck out;
  out.arrows.emplace(kBase, root(n));
  auto edges = n.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    auto child_syms = symbols(e.target);
    bool total = true;
    for (Symbol s : child_syms) {
      if (!e.dict.contains(s)) {
        total = false;
        out.local.push_back({Law::Totality, {},
                             "edge " + std::to_string(i) + " " + to_string(e.dict) + " has no key for child symbol " +
                                 std::to_string(s)});
      }
    }
    for (auto [k, v] : e.dict) {
      if (!std::binary_search(child_syms.begin(), child_syms.end(), k)) {
        total = false;
        out.local.push_back({Law::Surjectivity, {},
                             "edge " + std::to_string(i) + " key " + std::to_string(k) +
                                 " is not covered by the child's outgoing edges"});
      }
      if (v == kBase) {
        out.local.push_back({Law::Supportivity, {},
                             "edge " + std::to_string(i) + " maps " + std::to_string(k) + " to the base symbol"});
      }
    }
    if (!total) continue;
    for (const auto& [s, a] : children[i]->arrows) {
      Arrow composite;
      try {
        composite = join(to_arrow(e), a);
      } catch (const Error&) {
        continue;
      }
      Symbol key = symbol(composite);
      for (auto [k, v] : composite.dict) {
        if (k != kBase && v == key) {
          out.local.push_back({Law::Supportivity, {},
                               "path through edge " + std::to_string(i) + " maps " + std::to_string(k) +
                                   " and the base symbol both to " + std::to_string(key)});
          break;
        }
      }
      auto [it, inserted] = out.arrows.try_emplace(key, composite);
      if (!inserted && !(it->second == composite)) {
        out.local.push_back({Law::Supportivity, {},
                             "two paths map the base symbol to " + std::to_string(key) + " with different " +
                                 (it->second.dict == composite.dict ? "targets" : "dictionaries") + " (" +
                                 to_string(it->second.dict) + " vs " + to_string(composite.dict) + ")"});
      }
    }
  }
  return out;
}

}  // namespace

ValidationReport validate(const Node& node) {
  std::unordered_map<Node, NodeCheck, NodeHash> checks;
  fold<int>(node, [&](const Node& n, std::span<const int>) {
    std::vector<const NodeCheck*> children;
    for (const Edge& e : n.edges()) children.push_back(&checks.at(e.target));
    checks.emplace(n, check_node(n, children));
    return 0;
  });

  // First-discovered path to every distinct node, breadth first.
  ValidationReport report;
  std::unordered_map<Node, bool, NodeHash> seen;
  std::vector<std::pair<Node, std::vector<std::size_t>>> queue{{node, {}}};
  seen.emplace(node, true);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto [n, path] = queue[head];
    for (Violation v : checks.at(n).local) {
      v.path = path;
      report.violations.push_back(std::move(v));
    }
    auto edges = n.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (seen.emplace(edges[i].target, true).second) {
        auto next = path;
        next.push_back(i);
        queue.emplace_back(edges[i].target, std::move(next));
      }
    }
  }
  return report;
}

}  // namespace bac
