#pragma once

// Variants of the editing operations that skip the precondition which would
// have rejected the call, and the final law check. They exist so tests can
// show what goes wrong when an illegal edit is forced through. Not for use in
// application code.

#include "bac/ops.hpp"

namespace bac::unchecked {

Node add_nd_symbol(const Node& node, Symbol src, Symbol tgt, Symbol sym, std::span<const Coangle> src_alts,
                   std::span<const Angle> tgt_alts);
Node remove_nd_symbol(const Node& node, Symbol src, Symbol tgt);
Node split_symbol(const Node& node, Symbol src, Symbol tgt, const PrefixPartition& partition);
Node split_node(const Node& node, Symbol tgt, std::span<const SplitPart> parts);
Node merge_nodes(const Node& node, std::span<const SuffixFamily> families, const Merger& merger);

}  // namespace bac::unchecked
