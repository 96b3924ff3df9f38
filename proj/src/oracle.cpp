#include "bac/oracle.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace bac {

std::size_t MatCategory::hom_size(Symbol s, Symbol t) const {
  auto it = homs.find({s, t});
  return it == homs.end() ? 0 : it->second.size();
}

MatCategory materialize(const Node& node) {
  auto table = arrows(node);
  if (table.size() > kMaxMaterializeObjects) {
    throw Error(ErrorKind::TooLarge, std::to_string(table.size()) + " objects exceed the materialize guard");
  }
  std::size_t total = 0;
  for (const Arrow& a : table) total += symbols(a.target).size();
  if (total > kMaxMaterializeMorphisms) {
    throw Error(ErrorKind::TooLarge, std::to_string(total) + " morphisms exceed the materialize guard");
  }

  MatCategory cat;
  std::map<Chain2, std::size_t> id_of;
  std::map<Symbol, const Arrow*> by_object;
  for (const Arrow& a : table) {
    Symbol s = symbol(a);
    cat.objects.push_back(s);
    by_object.emplace(s, &a);
    for (Symbol x : symbols(a.target)) {
      Symbol t = a.dict.at(x);
      std::size_t id = cat.morphisms.size();
      cat.morphisms.push_back({s, t, Chain2{s, x}});
      cat.homs[{s, t}].push_back(id);
      id_of.emplace(Chain2{s, x}, id);
      if (x == kBase) cat.identity.emplace(s, id);
    }
  }
  for (std::size_t f = 0; f < cat.morphisms.size(); ++f) {
    const auto& mf = cat.morphisms[f];
    Arrow along = *arrow(by_object.at(mf.source)->target, mf.chain.snd);
    for (const auto& [key, ids] : cat.homs) {
      if (key.first != mf.target) continue;
      for (std::size_t g : ids) {
        Symbol y = cat.morphisms[g].chain.snd;
        cat.compose.emplace(std::make_pair(g, f), id_of.at({mf.source, along.dict.at(y)}));
      }
    }
  }
  return cat;
}

CategoryCheck check_category(const MatCategory& cat) {
  CategoryCheck out;
  // A missing entry for a composable pair is a closure failure, reported with
  // the associativity problems.
  auto comp = [&](std::size_t g, std::size_t f) -> std::optional<std::size_t> {
    auto it = cat.compose.find({g, f});
    if (it != cat.compose.end()) return it->second;
    if (cat.morphisms[g].source == cat.morphisms[f].target) {
      out.associative = false;
      out.problems.push_back("no composite of " + to_string(cat.morphisms[g].chain) + " after " +
                             to_string(cat.morphisms[f].chain));
    }
    return std::nullopt;
  };
  for (const auto& [gf, h] : cat.compose) {
    const auto& f = cat.morphisms[gf.second];
    const auto& g = cat.morphisms[gf.first];
    const auto& c = cat.morphisms[h];
    if (c.source != f.source || c.target != g.target) {
      out.associative = false;
      out.problems.push_back("composite " + to_string(c.chain) + " has the wrong endpoints");
    }
  }
  for (std::size_t f = 0; f < cat.morphisms.size(); ++f) {
    const auto& mf = cat.morphisms[f];
    if (comp(cat.identity.at(mf.target), f) != f || comp(f, cat.identity.at(mf.source)) != f) {
      out.unital = false;
      out.problems.push_back("identity law fails at " + to_string(mf.chain));
    }
    for (const auto& [key, gs] : cat.homs) {
      if (key.first != mf.target) continue;
      for (std::size_t g : gs) {
        auto gf = comp(g, f);
        for (const auto& [key2, hs] : cat.homs) {
          if (key2.first != key.second) continue;
          for (std::size_t h : hs) {
            auto hg = comp(h, g);
            auto lhs = gf ? comp(h, *gf) : std::nullopt;
            auto rhs = hg ? comp(*hg, f) : std::nullopt;
            if (!lhs || !rhs || *lhs != *rhs) {
              out.associative = false;
              out.problems.push_back("associativity fails at " + to_string(mf.chain));
            }
          }
        }
      }
    }
  }
  for (const auto& [key, ids] : cat.homs) {
    auto [s, t] = key;
    if (s == t && ids.size() != 1) {
      out.acyclic = false;
      out.problems.push_back("object " + std::to_string(s) + " has a non-identity endomorphism");
    }
    if (s != t && cat.hom_size(t, s) != 0) {
      out.acyclic = false;
      out.problems.push_back("objects " + std::to_string(s) + " and " + std::to_string(t) + " form a cycle");
    }
  }
  for (Symbol t : cat.objects) {
    if (cat.hom_size(kBase, t) != 1) {
      out.base_initial = false;
      out.problems.push_back("object " + std::to_string(t) + " does not have exactly one morphism from the base");
    }
  }
  return out;
}

namespace {

using Walk = std::pair<Dict, Node>;

Walk step(const Walk& w, const Edge& e) {
  Dict d;
  for (auto [k, v] : e.dict) d.emplace(k, w.first.at(v));
  return {std::move(d), e.target};
}

/// Distinct composites of every path out of `start`, identity included.
std::set<Walk> all_paths(const Node& start) {
  Dict id;
  for (Symbol x : symbols(start)) id.emplace(x, x);
  std::set<Walk> seen;
  std::vector<Walk> todo{{std::move(id), start}};
  while (!todo.empty()) {
    Walk w = std::move(todo.back());
    todo.pop_back();
    if (!seen.insert(w).second) continue;
    for (const Edge& e : w.second.edges()) todo.push_back(step(w, e));
  }
  return seen;
}

}  // namespace

std::size_t count_paths(const Node& node, Symbol s, Symbol t) {
  const Walk* to_s = nullptr;
  auto from_root = all_paths(node);
  for (const Walk& w : from_root) {
    if (w.first.at(kBase) == s) {
      to_s = &w;
      break;
    }
  }
  if (!to_s) return 0;
  std::size_t count = 0;
  for (const Walk& w : all_paths(to_s->second)) {
    if (to_s->first.at(w.first.at(kBase)) == t) ++count;
  }
  return count;
}

namespace {

struct Matcher {
  const MatCategory& a;
  const MatCategory& b;
  std::map<Symbol, Symbol> obj;
  std::vector<std::size_t> order;  // morphisms of a, hom by hom
  std::vector<std::ptrdiff_t> image;
  std::vector<bool> used;

  bool consistent(std::size_t f) const {
    for (const auto& [gf, h] : a.compose) {
      auto [g, f2] = gf;
      if (g != f && f2 != f && h != f) continue;
      if (image[g] < 0 || image[f2] < 0 || image[h] < 0) continue;
      if (b.compose.at({static_cast<std::size_t>(image[g]), static_cast<std::size_t>(image[f2])}) !=
          static_cast<std::size_t>(image[h])) {
        return false;
      }
    }
    return true;
  }

  bool assign(std::size_t i) {
    if (i == order.size()) return true;
    std::size_t f = order[i];
    const auto& mf = a.morphisms[f];
    auto it = b.homs.find({obj.at(mf.source), obj.at(mf.target)});
    if (it == b.homs.end()) return false;
    for (std::size_t cand : it->second) {
      if (used[cand]) continue;
      image[f] = static_cast<std::ptrdiff_t>(cand);
      used[cand] = true;
      if (consistent(f) && assign(i + 1)) return true;
      used[cand] = false;
      image[f] = -1;
    }
    return false;
  }

  bool try_objects(std::size_t i, std::set<Symbol>& taken) {
    if (i == a.objects.size()) {
      for (const auto& [key, ids] : a.homs) {
        if (ids.size() != b.hom_size(obj.at(key.first), obj.at(key.second))) return false;
      }
      order.clear();
      for (const auto& [key, ids] : a.homs) order.insert(order.end(), ids.begin(), ids.end());
      image.assign(a.morphisms.size(), -1);
      used.assign(b.morphisms.size(), false);
      return assign(0);
    }
    Symbol s = a.objects[i];
    for (Symbol t : b.objects) {
      if ((s == kBase) != (t == kBase) || taken.contains(t)) continue;
      // Prune on hom sizes to already placed objects.
      bool fits = true;
      for (const auto& [s2, t2] : obj) {
        if (a.hom_size(s, s2) != b.hom_size(t, t2) || a.hom_size(s2, s) != b.hom_size(t2, t)) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;
      obj.emplace(s, t);
      taken.insert(t);
      if (try_objects(i + 1, taken)) return true;
      obj.erase(s);
      taken.erase(t);
    }
    return false;
  }
};

}  // namespace

bool equivalent(const MatCategory& c1, const MatCategory& c2) {
  if (c1.objects.size() > kMaxEquivalenceObjects || c2.objects.size() > kMaxEquivalenceObjects) {
    throw Error(ErrorKind::TooLarge, "equivalence search is limited to " + std::to_string(kMaxEquivalenceObjects) +
                                         " objects");
  }
  if (c1.objects.size() != c2.objects.size() || c1.morphisms.size() != c2.morphisms.size()) return false;
  Matcher m{c1, c2, {}, {}, {}, {}};
  std::set<Symbol> taken;
  return m.try_objects(0, taken);
}

}  // namespace bac
