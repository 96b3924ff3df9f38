#include <algorithm>
#include <map>
#include <random>

#include "bac/ops.hpp"
#include "bac/oracle.hpp"

namespace bac {

namespace {

// Only raw engine output is used: distributions and std::shuffle are
// implementation-defined and would break cross-platform determinism.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  bool coin() { return (engine_() & 1) != 0; }

  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }

  template <class T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<Symbol> proper(const Node& n) {
  auto s = symbols(n);
  s.erase(s.begin());
  return s;
}

Node node_of(const Node& n, Symbol s) { return arrow(n, s)->target; }

/// Fresh names for every incoming morphism of `src`, distinct per source.
std::map<Chain2, Symbol> fresh_names(const Node& n, Symbol tgt) {
  std::map<Chain2, Symbol> out;
  for (const Arrow& a : arrows(n)) {
    Symbol p = symbol(a);
    if (p == tgt) continue;
    Symbol next = fresh_symbol(a.target);
    for (auto [k, v] : a.dict) {
      if (v == tgt) out.emplace(Chain2{p, k}, next++);
    }
  }
  return out;
}

class Fuzzer {
 public:
  Fuzzer(std::uint64_t seed, std::size_t budget) : rng_(seed), budget_(budget) {}

  Node run(const FuzzObserver& observer) {
    Node n = empty();
    if (budget_ == 0) return n;
    std::size_t attempts = 8 * budget_ + 8;
    for (std::size_t i = 0; i < attempts; ++i) {
      std::string op;
      Node next;
      try {
        next = step(n, op);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::LawViolation) throw;
        continue;
      }
      if (op.empty() || proper(next).size() > budget_) continue;
      if (observer) observer(op, n, next);
      n = next;
    }
    return n;
  }

 private:
  Rng rng_;
  std::size_t budget_;

  Node step(const Node& n, std::string& op) {
    auto objs = proper(n);
    if (objs.empty()) {
      op = "introduce";
      return merge_root_nodes(std::vector<Node>{n, singleton(fresh_symbol(n))});
    }
    std::vector<Symbol> with_root = objs;
    with_root.insert(with_root.begin(), kBase);
    switch (rng_.below(16)) {
      case 0:
      case 1: {
        op = "introduce";
        return merge_root_nodes(std::vector<Node>{n, singleton(fresh_symbol(n))});
      }
      case 2:
      case 3: {
        op = "add-leaf";
        Symbol src = rng_.pick(objs);
        auto names = fresh_names(n, src);
        return add_leaf_node(n, src, fresh_symbol(node_of(n, src)), [&](Chain2 c) { return names.at(c); });
      }
      case 4:
      case 5:
      case 6: {
        op = "add-nd";
        Symbol src = rng_.pick(objs), tgt = rng_.pick(objs);
        auto picks = find_valid_coangles_angles(n, src, tgt);
        std::vector<Coangle> cs;
        std::vector<Angle> as;
        for (const auto& list : picks.coangles) {
          if (list.empty()) return n;
          cs.push_back(rng_.pick(list));
        }
        for (const auto& list : picks.angles) {
          if (list.empty()) return n;
          as.push_back(rng_.pick(list));
        }
        return add_nd_symbol(n, src, tgt, fresh_symbol(node_of(n, src)), cs, as);
      }
      case 7: {
        op = "add-parent";
        Symbol src = rng_.pick(with_root);
        Node s = node_of(n, src);
        auto syms = proper(s);
        if (syms.empty()) return n;
        Symbol tgt = rng_.pick(syms);
        Symbol offset = 1 + rng_.below(3);
        Dict mapping;
        for (Symbol t : symbols(node_of(s, tgt))) mapping.emplace(t, t + offset);
        auto names = fresh_names(n, src);
        return add_parent_node(n, Chain2{src, tgt}, fresh_symbol(s), mapping, [&](Chain2 c) { return names.at(c); });
      }
      case 8: {
        op = "remove-nd";
        Symbol src = rng_.pick(with_root);
        Node s = node_of(n, src);
        std::vector<Symbol> nds;
        for (Symbol t : proper(s)) {
          if (nondecomposable(s, t)) nds.push_back(t);
        }
        if (nds.empty()) return n;
        return remove_nd_symbol(n, src, rng_.pick(nds));
      }
      case 9: {
        std::vector<Symbol> leaves;
        for (Symbol s : objs) {
          if (node_of(n, s).is_leaf()) leaves.push_back(s);
        }
        if (leaves.empty()) return n;
        op = "remove-leaf";
        return remove_leaf_node(n, rng_.pick(leaves));
      }
      case 10: {
        op = "remove-node";
        return remove_node(n, rng_.pick(objs));
      }
      case 11: {
        op = "split-sym";
        Symbol src = rng_.pick(with_root);
        Node s = node_of(n, src);
        auto syms = proper(s);
        if (syms.empty()) return n;
        Symbol tgt = rng_.pick(syms);
        PrefixPartition parts{{tgt, {}}, {fresh_symbol(s), {}}};
        if (!nondecomposable(s, tgt)) {
          auto classes = partition_prefix(s, tgt);
          if (classes.size() < 2) return n;
          rng_.shuffle(classes);
          std::size_t cut = 1 + rng_.below(classes.size() - 1);
          for (std::size_t i = 0; i < classes.size(); ++i) {
            auto& dst = parts[i < cut ? 0 : 1].second;
            dst.insert(dst.end(), classes[i].begin(), classes[i].end());
          }
        }
        return split_symbol(n, src, tgt, parts);
      }
      case 12: {
        op = "merge-syms";
        Symbol src = rng_.pick(with_root);
        Node s = node_of(n, src);
        auto syms = proper(s);
        std::vector<std::pair<Symbol, Symbol>> pairs;
        for (std::size_t i = 0; i < syms.size(); ++i) {
          Arrow a = *arrow(s, syms[i]);
          a.dict.erase(kBase);
          for (std::size_t j = i + 1; j < syms.size(); ++j) {
            Arrow b = *arrow(s, syms[j]);
            b.dict.erase(kBase);
            if (a == b) pairs.emplace_back(syms[i], syms[j]);
          }
        }
        if (pairs.empty()) return n;
        auto [x, y] = rng_.pick(pairs);
        std::vector<Symbol> tgts{x, y};
        return merge_symbols(n, src, tgts, x);
      }
      case 13: {
        Symbol tgt = rng_.pick(objs);
        Node x = node_of(n, tgt);
        auto names = fresh_names(n, tgt);
        Splitter keep = [](Chain2 c) { return std::optional<Symbol>(c.snd); };
        Splitter renamed = [&](Chain2 c) { return std::optional<Symbol>(names.at(c)); };
        auto classes = partition_symbols(x);
        if (classes.size() < 2 || rng_.coin()) {
          op = "duplicate-node";
          std::vector<Splitter> sps{keep, renamed};
          return duplicate_node(n, tgt, sps);
        }
        op = "split-node";
        rng_.shuffle(classes);
        std::size_t cut = 1 + rng_.below(classes.size() - 1);
        std::vector<SplitPart> parts{{keep, {}}, {renamed, {}}};
        for (std::size_t i = 0; i < classes.size(); ++i) {
          auto& dst = parts[i < cut ? 0 : 1].symbols;
          dst.insert(dst.end(), classes[i].begin(), classes[i].end());
        }
        return split_node(n, tgt, parts);
      }
      case 14: {
        Symbol tgt = rng_.pick(with_root);
        Node x = node_of(n, tgt);
        if (rng_.coin()) {
          op = "relabel";
          auto syms = proper(x);
          auto perm = syms;
          rng_.shuffle(perm);
          Dict mapping{{kBase, kBase}};
          for (std::size_t i = 0; i < syms.size(); ++i) mapping.emplace(syms[i], perm[i]);
          return relabel(n, tgt, mapping);
        }
        op = "rewire";
        std::vector<Symbol> gens;
        for (Symbol s : proper(x)) {
          if (nondecomposable(x, s) || rng_.below(4) == 0) gens.push_back(s);
        }
        return rewire(n, tgt, gens);
      }
      default: {
        op = "merge-nodes";
        return merge_two(n, objs);
      }
    }
  }

  // Relabels one object into a disjoint namespace, then merges it with
  // another object that has matching incoming generators.
  Node merge_two(const Node& n, const std::vector<Symbol>& objs) {
    if (objs.size() < 2) return n;
    Symbol x1 = rng_.pick(objs), x2 = rng_.pick(objs);
    if (x1 == x2) return n;
    Node n1 = node_of(n, x1), n2 = node_of(n, x2);
    Symbol base = fresh_symbol(n1);
    Dict mapping{{kBase, kBase}};
    Symbol next = base;
    for (Symbol s : proper(n2)) mapping.emplace(s, next++);
    Node relabelled = relabel(n, x2, mapping);
    auto c1 = suffix_nd(relabelled, x1), c2 = suffix_nd(relabelled, x2);
    if (c1.size() != c2.size()) return n;
    // Pair generators source by source, in random order within a source.
    std::map<Symbol, std::vector<Chain2>> by1, by2;
    for (Chain2 c : c1) by1[c.fst].push_back(c);
    for (Chain2 c : c2) by2[c.fst].push_back(c);
    SuffixFamily f1{x1, {}}, f2{x2, {}};
    for (auto& [src, list] : by1) {
      auto it = by2.find(src);
      if (it == by2.end() || it->second.size() != list.size()) return n;
      rng_.shuffle(it->second);
      f1.chains.insert(f1.chains.end(), list.begin(), list.end());
      f2.chains.insert(f2.chains.end(), it->second.begin(), it->second.end());
    }
    std::vector<SuffixFamily> families{f1, f2};
    return merge_nodes(relabelled, families, [](Symbol, const std::vector<Symbol>& members) { return members.front(); });
  }
};

}  // namespace

Node fuzz_bac(std::uint64_t seed, std::size_t budget, const FuzzObserver& observer) {
  return Fuzzer(seed, budget).run(observer);
}

}  // namespace bac
