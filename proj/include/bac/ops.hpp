#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bac/core.hpp"

namespace bac {

/// Candidate composition rule on the incoming side of a new morphism
/// src -> tgt: `short_chain` is an incoming morphism s1 -> src, `long_chain`
/// the existing morphism s1 -> tgt it should compose to.
struct Coangle {
  Chain2 short_chain;
  Chain2 long_chain;

  friend auto operator<=>(const Coangle&, const Coangle&) = default;
};

/// Candidate composition rule on the outgoing side: `from_tgt` is an outgoing
/// morphism tgt -> x, `from_src` the existing morphism src -> x it yields.
struct Angle {
  Chain2 from_tgt;
  Chain2 from_src;

  friend auto operator<=>(const Angle&, const Angle&) = default;
};

struct Picklists {
  /// One picklist per nondecomposable incoming morphism of src.
  std::vector<std::vector<Coangle>> coangles;
  /// One picklist per nondecomposable outgoing morphism of tgt.
  std::vector<std::vector<Angle>> angles;
};

using PrefixPartition = std::vector<std::pair<Symbol, std::vector<Chain2>>>;
using SymbolPartition = std::vector<std::vector<Symbol>>;

/// Mints the symbol of a new incoming morphism for the chain (s1, s2).
using Inserter = std::function<Symbol(Chain2)>;
/// Mints the symbol a split part gives to the incoming morphism (s1, s2);
/// nullopt means the part does not receive that morphism.
using Splitter = std::function<std::optional<Symbol>(Chain2)>;
/// Mints the merged symbol for a family of symbols on the node of `source`.
using Merger = std::function<Symbol(Symbol source, const std::vector<Symbol>& members)>;

struct SplitPart {
  Splitter splitter;
  std::vector<Symbol> symbols;
};

struct SuffixFamily {
  Symbol target = kBase;
  std::vector<Chain2> chains;
};

/// Incoming morphisms from `source` that become one morphism after a merge,
/// listed in family order.
struct SuffixGroup {
  Symbol source = kBase;
  std::vector<Symbol> members;

  friend bool operator==(const SuffixGroup&, const SuffixGroup&) = default;
};

struct ZipResult {
  std::vector<SuffixGroup> groups;
  /// Positional pairing of the listed nondecomposable chains.
  std::vector<std::vector<Chain2>> pairs;
};

// -- construction --------------------------------------------------------------

Node empty();
Node singleton(Symbol sym);
/// Unions the root edges of `nodes`; proper root symbols must be disjoint.
Node merge_root_nodes(std::span<const Node> nodes);

// -- removal -------------------------------------------------------------------

Node remove_leaf_node(const Node& node, Symbol tgt);
Node remove_nd_symbol(const Node& node, Symbol src, Symbol tgt);
/// Removes the object `tgt` and every morphism into or out of it. Morphisms
/// that merely pass through it are kept. On a leaf this is remove_leaf_node.
Node remove_node(const Node& node, Symbol tgt);

// -- adding morphisms ------------------------------------------------------------

Picklists find_valid_coangles_angles(const Node& node, Symbol src, Symbol tgt);
bool compatible_angles(const Node& node, Symbol src, Symbol tgt, std::span<const Angle> angles);
bool compatible_coangles(const Node& node, std::span<const Coangle> coangles);
bool compatible_coangles_angles(const Node& node, std::span<const Coangle> coangles, std::span<const Angle> angles);

/// Adds the nondecomposable morphism (src, sym) from object src to object tgt.
/// One coangle per coangle picklist and one angle per angle picklist.
Node add_nd_symbol(const Node& node, Symbol src, Symbol tgt, Symbol sym, std::span<const Coangle> src_alts,
                   std::span<const Angle> tgt_alts);

Node add_leaf_node(const Node& node, Symbol src, Symbol sym, const Inserter& inserter);
Node add_parent_node_on_root(const Node& node, Symbol tgt, Symbol sym, const Dict& mapping);
/// Interpolates a new object in the middle of the morphism `morphism`.
/// `inserter` names the new incoming morphisms on the ancestors of its source;
/// it is unused when the source is the root.
Node add_parent_node(const Node& node, Chain2 morphism, Symbol sym, const Dict& mapping, const Inserter& inserter);

// -- splitting -------------------------------------------------------------------

std::vector<std::vector<Chain2>> partition_prefix(const Node& node, Symbol tgt);
Node split_symbol(const Node& node, Symbol src, Symbol tgt, const PrefixPartition& partition);
Node duplicate_nd_symbol(const Node& node, Symbol src, Symbol tgt, std::span<const Symbol> syms);

SymbolPartition partition_symbols(const Node& node);
std::vector<Node> split_root_node(const Node& node, const SymbolPartition& partition);
Node split_node(const Node& node, Symbol tgt, std::span<const SplitPart> parts);
/// Every part receives a full copy of the node; splitters must be total.
Node duplicate_node(const Node& node, Symbol tgt, std::span<const Splitter> splitters);

// -- merging ----------------------------------------------------------------------

Node merge_symbols(const Node& node, Symbol src, std::span<const Symbol> tgts, Symbol sym);
ZipResult zip_suffixes(const Node& node, std::span<const SuffixFamily> families);
Node merge_nodes(const Node& node, std::span<const SuffixFamily> families, const Merger& merger);

// -- unification ------------------------------------------------------------------

Node relabel(const Node& node, Symbol tgt, const Dict& mapping);
Node rewire(const Node& node, Symbol tgt, std::span<const Symbol> syms);

}  // namespace bac
