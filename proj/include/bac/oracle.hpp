#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bac/core.hpp"

namespace bac {

/// Explicit finite category: every morphism listed, composition tabulated.
struct MatCategory {
  struct Morphism {
    Symbol source = kBase;
    Symbol target = kBase;
    /// (source, symbol on the source's node)
    Chain2 chain;
  };

  /// Object 0 and one object per proper root symbol, ascending.
  std::vector<Symbol> objects;
  std::vector<Morphism> morphisms;
  std::map<std::pair<Symbol, Symbol>, std::vector<std::size_t>> homs;
  /// (g, f) -> g after f, for every composable pair.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> compose;
  std::map<Symbol, std::size_t> identity;

  std::size_t hom_size(Symbol s, Symbol t) const;
};

inline constexpr std::size_t kMaxMaterializeObjects = 64;
inline constexpr std::size_t kMaxMaterializeMorphisms = 4096;
inline constexpr std::size_t kMaxEquivalenceObjects = 8;

/// Throws TooLarge above the size guards.
MatCategory materialize(const Node& node);

struct CategoryCheck {
  bool associative = true;
  bool unital = true;
  bool acyclic = true;
  bool base_initial = true;
  std::vector<std::string> problems;

  bool ok() const noexcept { return associative && unital && acyclic && base_initial; }
};

CategoryCheck check_category(const MatCategory& cat);

/// Number of distinct composite arrows from object s to object t found by
/// walking every path of node(s) edge by edge, identities included. Shares no
/// code with materialize.
std::size_t count_paths(const Node& node, Symbol s, Symbol t);

/// True iff some object bijection fixing 0 extends to a composition
/// preserving bijection of morphisms. Throws TooLarge above 8 objects.
bool equivalent(const MatCategory& c1, const MatCategory& c2);

/// Called after every operation the fuzzer applies successfully.
using FuzzObserver = std::function<void(const std::string& op, const Node& before, const Node& after)>;

/// Valid BAC built by random precondition-checked operations from empty().
/// `budget` caps the number of proper root symbols; 0 gives empty().
/// Deterministic per seed on every platform.
Node fuzz_bac(std::uint64_t seed, std::size_t budget, const FuzzObserver& observer = {});

}  // namespace bac
