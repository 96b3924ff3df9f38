// Command-line front end: validate, show and draw .bac files, run .bacs scripts.

#include <unistd.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bac/script.hpp"
#include "bac/serde.hpp"

namespace {

using bac::kExitFailure;
using bac::kExitOk;
using bac::kExitUsage;

/// Read errors and syntax errors are usage failures; law errors are not.
struct Loaded {
  std::optional<bac::Node> node;
  int status = kExitOk;
};

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "bac: cannot read " << path << "\n";
    return std::nullopt;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Loaded load(const std::string& path) {
  auto text = read_file(path);
  if (!text) return {std::nullopt, kExitFailure};
  try {
    return {bac::parse(*text), kExitOk};
  } catch (const bac::ParseError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return {std::nullopt, kExitUsage};
  } catch (const bac::LawError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return {std::nullopt, kExitFailure};
  }
}

bool color_from_env() {
  const char* v = std::getenv("BAC_COLOR");
  return v != nullptr && std::string(v) == "1";
}

int cmd_validate(const std::string& path) {
  auto text = read_file(path);
  if (!text) return kExitFailure;
  bac::Node n;
  try {
    n = bac::parse_unchecked(*text);
  } catch (const bac::ParseError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return kExitUsage;
  }
  auto report = bac::validate(n);
  if (report.ok()) {
    std::cout << path << ": ok\n";
    return kExitOk;
  }
  std::string shown = report.to_string();
  while (!shown.empty() && shown.back() == '\n') shown.pop_back();
  std::cout << path << ": " << shown << "\n";
  return kExitFailure;
}

int cmd_show(const std::string& path) {
  auto l = load(path);
  if (!l.node) return l.status;
  std::cout << bac::print(*l.node) << "\n";
  return kExitOk;
}

int cmd_draw(const std::string& path, const std::string& out) {
  auto l = load(path);
  if (!l.node) return l.status;
  std::string dot = bac::to_dot(*l.node);
  if (out.empty() || out == "-") {
    std::cout << dot;
    return kExitOk;
  }
  std::ofstream f(out, std::ios::binary);
  if (!(f << dot)) {
    std::cerr << "bac: cannot write " << out << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_apply(const std::string& path, bac::ScriptOptions opts) {
  auto text = read_file(path);
  if (!text) return kExitFailure;
  opts.base_dir = std::filesystem::path(path).parent_path();
  if (opts.base_dir.empty()) opts.base_dir = ".";
  bac::Interpreter interp(std::cout, opts);
  return interp.run(*text);
}

/// Reads commands from stdin until EOF. Failing lines are reported and the
/// session goes on; the exit status is that of the first failure.
int cmd_repl(bac::ScriptOptions opts) {
  bool tty = isatty(STDIN_FILENO) != 0;
  bac::Interpreter interp(std::cout, opts);
  int status = kExitOk;
  std::size_t line_no = 0;
  std::string line;
  while (true) {
    if (tty) std::cout << "bac> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    ++line_no;
    bac::Workspace saved = interp.workspace();
    int s = interp.execute(line, line_no);
    if (opts.dry_run) interp.workspace() = saved;
    if (s != kExitOk && status == kExitOk) status = s;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded acyclic categories: validate, edit and draw."};
  app.require_subcommand(1);

  std::string file, out;
  bac::ScriptOptions opts;
  opts.color = color_from_env();

  auto* validate = app.add_subcommand("validate", "Check the category laws of a .bac file");
  validate->add_option("file", file, "Node in canonical text form")->required();
  auto* show = app.add_subcommand("show", "Print a .bac file in canonical form");
  show->add_option("file", file)->required();
  auto* draw = app.add_subcommand("draw", "Export a .bac file as a Graphviz graph");
  draw->add_option("file", file)->required();
  draw->add_option("-o,--output", out, "Output .dot path (stdout if omitted)");
  auto* apply = app.add_subcommand("apply", "Run a .bacs script");
  apply->add_option("script", file)->required();
  auto* repl = app.add_subcommand("repl", "Read script commands from stdin");
  for (auto* sub : {apply, repl}) {
    sub->add_flag("--dry-run", opts.dry_run, "Run without writing files or keeping changes");
    sub->add_flag("--keep-going", opts.keep_going, "Do not stop at the first failing line");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*validate) return cmd_validate(file);
  if (*show) return cmd_show(file);
  if (*draw) return cmd_draw(file, out);
  if (*apply) return cmd_apply(file, opts);
  return cmd_repl(opts);
}
