#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bac/core.hpp"

namespace bac {

/// Bad command line in a script: unknown verb, wrong arity, malformed token.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Named slots holding valid nodes.
class Workspace {
 public:
  const Node& get(const std::string& slot) const;
  bool contains(const std::string& slot) const { return slots_.contains(slot); }
  /// Validates before storing; throws LawError on a broken node.
  void set(const std::string& slot, Node node);
  const std::map<std::string, Node>& slots() const { return slots_; }

 private:
  std::map<std::string, Node> slots_;
};

struct ScriptOptions {
  /// Run every line but write no files and roll the workspace back after run().
  bool dry_run = false;
  /// Continue after a failing line; the exit status still reports the failure.
  bool keep_going = false;
  bool color = false;
  /// Relative paths in load/save/draw resolve against this directory.
  std::filesystem::path base_dir = ".";
};

/// Exit statuses shared with the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Line-oriented interpreter for the editing language. Each line runs as one
/// transaction: a failing line leaves the workspace as it was.
class Interpreter {
 public:
  Interpreter(std::ostream& out, ScriptOptions opts = {});

  /// Runs a whole script. Returns the status of the first failing line, or 0.
  int run(std::string_view script);
  /// Runs one line; `line_no` is only used in messages.
  int execute(std::string_view line, std::size_t line_no);

  Workspace& workspace() { return ws_; }
  const Workspace& workspace() const { return ws_; }

 private:
  /// A file the current line wants written once it succeeds.
  struct Write {
    std::filesystem::path path;
    std::string text;
  };

  void dispatch(const std::vector<std::string>& words, Workspace& ws, std::vector<Write>& writes);

  std::ostream& out_;
  ScriptOptions opts_;
  Workspace ws_;
};

/// Splits a line into words, dropping a trailing `#` comment.
std::vector<std::string> tokenize(std::string_view line);

}  // namespace bac
