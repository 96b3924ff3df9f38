#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bac/ops.hpp"
#include "bac/oracle.hpp"
#include "bac/script.hpp"
#include "bac/serde.hpp"
#include "fixtures.hpp"

using namespace bac;

namespace {

struct Run {
  int status;
  std::string transcript;
  Workspace ws;
};

Run run(const std::string& script, ScriptOptions opts = {}) {
  if (opts.base_dir == ".") opts.base_dir = BAC_DATA_DIR;
  std::ostringstream out;
  Interpreter interp(out, opts);
  int status = interp.run(script);
  return {status, out.str(), interp.workspace()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "bac_test_script";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("  add-nd A 1 2 3   # comment") == std::vector<std::string>{"add-nd", "A", "1", "2", "3"});
  CHECK(tokenize("# only a comment").empty());
  CHECK(tokenize("").empty());
}

TEST_CASE("new and show") {
  Run r = run("new A empty\nshow A\n");
  CHECK(r.status == kExitOk);
  CHECK(contains(r.transcript, "\n   []\n"));
  CHECK(contains(r.transcript, "symbols: 0\n"));
  CHECK(r.ws.get("A") == empty());
}

TEST_CASE("remove-nd on a composite symbol fails at that line") {
  Run r = run("load A seg.bac\nshow A\nremove-nd A 0 2\nshow A\n");
  CHECK(r.status == kExitFailure);
  CHECK(contains(r.transcript, "error line 3: NotNondecomposable"));
  CHECK_FALSE(contains(r.transcript, "4: show A"));
  CHECK(r.ws.get("A") == fx::seg());
}

TEST_CASE("usage and parse errors exit with status 2") {
  CHECK(run("frobnicate A\n").status == kExitUsage);
  CHECK(run("new A\n").status == kExitUsage);
  CHECK(run("new A empty\nremove-leaf A one\n").status == kExitUsage);
  CHECK(run("show Nowhere\n").status == kExitUsage);
  CHECK(run("new 9bad empty\n").status == kExitUsage);
  CHECK(run("add-nd A 1 2 3 --bogus 1\n").status == kExitUsage);
}

TEST_CASE("missing files are failures, not usage errors") {
  Run r = run("load A does-not-exist.bac\n");
  CHECK(r.status == kExitFailure);
  CHECK_FALSE(r.ws.contains("A"));
}

TEST_CASE("loading a file that breaks a law") {
  Run r = run("load A broken.bac\n");
  CHECK(r.status == kExitFailure);
  CHECK(contains(r.transcript, "Totality"));
  CHECK_FALSE(r.ws.contains("A"));
}

TEST_CASE("a failing line leaves the workspace unchanged") {
  Run r = run("load A seg.bac\nremove-leaf A 1\nremove-leaf A 2\n", {.keep_going = true});
  CHECK(r.status == kExitFailure);
  CHECK(contains(r.transcript, "error line 2: NotLeaf"));
  CHECK(print(r.ws.get("A")) == "[{0->1,2->3} [{0->2} []]]");
}

TEST_CASE("keep-going reports the first failure and runs the rest") {
  Run r = run("new A empty\nremove-leaf A 5\nfrobnicate\nintroduce A 1\n", {.keep_going = true});
  CHECK(r.status == kExitFailure);
  CHECK(contains(r.transcript, "error line 2"));
  CHECK(contains(r.transcript, "error line 3"));
  CHECK(r.ws.get("A") == singleton(1));

  Run stop = run("new A empty\nremove-leaf A 5\nintroduce A 1\n");
  CHECK(stop.ws.get("A") == empty());
}

TEST_CASE("dry run writes nothing and keeps nothing") {
  auto dir = scratch_dir();
  auto target = dir / "dry.bac";
  std::filesystem::remove(target);
  ScriptOptions opts;
  opts.dry_run = true;
  opts.base_dir = dir;
  std::ostringstream out;
  Interpreter interp(out, opts);
  CHECK(interp.run("new A singleton 1\nsave A dry.bac\ndraw A dry.dot\n") == kExitOk);
  CHECK_FALSE(std::filesystem::exists(target));
  CHECK_FALSE(interp.workspace().contains("A"));
  CHECK(contains(out.str(), "would write"));

  CHECK(interp.run("new A empty\nremove-leaf A 1\n") == kExitFailure);
}

TEST_CASE("save, load and draw") {
  auto dir = scratch_dir();
  ScriptOptions opts;
  opts.base_dir = dir;
  Run r = run("load A " + fx::data_path("seg.bac") + "\nsave A out.bac\nload B out.bac\ndraw B out.dot\n", opts);
  CHECK(r.status == kExitOk);
  CHECK(r.ws.get("B") == fx::seg());
  CHECK(slurp((dir / "out.bac").string()) == fx::kSeg + "\n");
  CHECK(slurp((dir / "out.dot").string()) == to_dot(fx::seg()));
}

TEST_CASE("geometric aliases expand to the plain verbs") {
  Run geo = run(
      "nullitope W\nintroduce W 1\nintroduce W 2\nincident W 1 2 1 --coangle 0,1:0,2\n"
      "disconnect W 0 1 --part 1= --part 3=\n");
  Run plain = run(
      "new W empty\nnew T singleton 1\nmerge-roots W T\nnew T singleton 2\nmerge-roots W T\n"
      "add-nd W 1 2 1 --coangle 0,1:0,2\nsplit-sym W 0 1 --part 1= --part 3=\n");
  CHECK(geo.status == kExitOk);
  CHECK(plain.status == kExitOk);
  CHECK(geo.ws.get("W") == plain.ws.get("W"));

  Run back = run("load W seg.bac\nunincident W 1 2\nconnect W 0 2,3 2\n");
  CHECK(back.status == kExitFailure);
  CHECK(contains(back.transcript, "error line 2"));
}

TEST_CASE("script edits match direct library calls") {
  Run r = run(
      "load C seg.bac\nmerge-syms C 0 2,3 2\n"
      "load S seg.bac\nmerge-syms S 0 2,3 2\nsplit-sym S 0 2 --part 2=1,1 --part 3=1,2\n");
  CHECK(r.status == kExitOk);
  CHECK(r.ws.get("C") == fx::circ());
  CHECK(r.ws.get("C") == merge_symbols(fx::seg(), 0, std::vector<Symbol>{2, 3}, 2));
  CHECK(r.ws.get("S") == fx::seg());
}

TEST_CASE("candidates prints the picklists") {
  Run r = run("nullitope W\nintroduce W 1\nintroduce W 2\ncandidates W 1 2\n");
  CHECK(r.status == kExitOk);
  CHECK(contains(r.transcript, "picklist --coangle 0,1:0,2"));
}

TEST_CASE("ball intersection script") {
  std::string script = slurp(fx::data_path("ball-intersection.bacs"));
  Run r = run(script);
  INFO(r.transcript);
  REQUIRE(r.status == kExitOk);
  const Node& w = r.ws.get("W");
  CHECK(print(w) == "[{0->1,2->5,3->6,4->7} [{0->3,1->2} [{0->1} []],{0->4,1->2} [{0->1} []]]]");

  // One volume, two caps meeting in one circle.
  MatCategory c = materialize(w);
  CHECK(c.objects == std::vector<Symbol>{0, 1, 5, 6, 7});
  CHECK(check_category(c).ok());
  CHECK(c.hom_size(1, 6) == 1);
  CHECK(c.hom_size(1, 7) == 1);
  CHECK(c.hom_size(6, 5) == 1);
  CHECK(c.hom_size(7, 5) == 1);
  CHECK(c.hom_size(1, 5) == 1);
  CHECK(c.hom_size(6, 7) == 0);

  // Every intermediate state is a valid category as well.
  std::ostringstream out;
  ScriptOptions opts;
  opts.base_dir = BAC_DATA_DIR;
  Interpreter interp(out, opts);
  std::istringstream lines(script);
  std::size_t line_no = 0;
  for (std::string line; std::getline(lines, line);) {
    REQUIRE(interp.execute(line, ++line_no) == kExitOk);
    if (!interp.workspace().contains("W")) continue;
    const Node& now = interp.workspace().get("W");
    CHECK_MESSAGE(validate(now).ok(), "line " << line_no);
    CHECK_MESSAGE(check_category(materialize(now)).ok(), "line " << line_no);
  }
}

TEST_CASE("transcripts are deterministic") {
  std::string script = slurp(fx::data_path("ball-intersection.bacs"));
  Run a = run(script);
  Run b = run(script);
  CHECK(a.transcript == b.transcript);
  CHECK(print(a.ws.get("W")) == print(b.ws.get("W")));
}

TEST_CASE("colored transcripts") {
  ScriptOptions opts;
  opts.color = true;
  Run r = run("remove-leaf Nowhere 1\n", opts);
  CHECK(contains(r.transcript, "\x1b[31merror\x1b[0m"));
  CHECK_FALSE(contains(run("remove-leaf Nowhere 1\n").transcript, "\x1b["));
}
