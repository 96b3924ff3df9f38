#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bac {

enum class ErrorKind {
  MissingKey,
  InvalidSymbol,
  NotFound,
  BaseReserved,
  SymbolCollision,
  NotLeaf,
  NotNondecomposable,
  NoAlternativePath,
  LoopDetected,
  IncompatibleChoices,
  PicklistMismatch,
  InserterClash,
  InvalidMapping,
  NotInjective,
  NotBijective,
  BaseMoved,
  NotSplittable,
  CoverageGap,
  SplitterClash,
  IncomingMismatch,
  TargetMismatch,
  ZipMismatch,
  MergerClash,
  TooLarge,
  SyntaxError,
  LawViolation,
};

std::string_view to_string(ErrorKind kind);

/// Failure of a precondition or law check. Every fallible operation in the
/// library throws this type; `kind()` is stable and meant for dispatch.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bac
