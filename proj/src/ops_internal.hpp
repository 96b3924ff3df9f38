#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "bac/core.hpp"
#include "bac/ops.hpp"

namespace bac::detail {

inline std::string sym_str(Symbol s) { return std::to_string(s); }

inline std::string syms_str(const std::vector<Symbol>& syms) {
  std::string out = "[";
  for (std::size_t i = 0; i < syms.size(); ++i) out += (i ? "," : "") + std::to_string(syms[i]);
  return out + "]";
}

/// Arrow from the root of `node` to object `s`; throws NotFound.
inline Arrow require_arrow(const Node& node, Symbol s) {
  auto a = arrow(node, s);
  if (!a) throw Error(ErrorKind::NotFound, "symbol " + sym_str(s) + " is not on the node");
  return std::move(*a);
}

/// `s` must be a proper symbol of `node`.
inline void require_proper(const Node& node, Symbol s) {
  if (s == kBase) throw Error(ErrorKind::BaseReserved, "the base symbol cannot be used here");
  if (!has_symbol(node, s)) throw Error(ErrorKind::NotFound, "symbol " + sym_str(s) + " is not on the node");
}

inline void check_result(const Node& result, ErrorKind kind, const std::string& what) {
  auto report = validate(result);
  if (!report.ok()) throw Error(kind, what + "\n" + report.to_string());
}

/// Postcondition check for operations whose preconditions should already
/// guarantee a valid result. Compiled out with NDEBUG.
inline void debug_check([[maybe_unused]] const Node& result, [[maybe_unused]] const char* op) {
#ifndef NDEBUG
  check_result(result, ErrorKind::LawViolation, std::string(op) + " produced an invalid node");
#endif
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace bac::detail
