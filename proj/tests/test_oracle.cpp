#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "bac/ops.hpp"
#include "bac/oracle.hpp"
#include "bac/serde.hpp"
#include "fixtures.hpp"

using namespace bac;

namespace {

using HomTable = std::map<std::pair<Symbol, Symbol>, std::size_t>;

HomTable hom_table(const MatCategory& c) {
  HomTable t;
  for (const auto& [key, ids] : c.homs) {
    if (!ids.empty()) t[key] = ids.size();
  }
  return t;
}

Node singletons(std::size_t count) {
  std::vector<Node> parts;
  for (Symbol s = 1; s <= count; ++s) parts.push_back(singleton(s));
  return merge_root_nodes(parts);
}

}  // namespace

TEST_CASE("materialize small fixtures") {
  MatCategory empty_cat = materialize(empty());
  CHECK(empty_cat.objects == std::vector<Symbol>{0});
  CHECK(empty_cat.morphisms.size() == 1);
  CHECK(check_category(empty_cat).ok());

  MatCategory pt = materialize(fx::pt());
  CHECK(pt.objects == std::vector<Symbol>{0, 1});
  CHECK(hom_table(pt) == HomTable{{{0, 0}, 1}, {{0, 1}, 1}, {{1, 1}, 1}});
  CHECK(check_category(pt).ok());

  MatCategory circ = materialize(fx::circ());
  CHECK(circ.objects == std::vector<Symbol>{0, 1, 2});
  CHECK(circ.hom_size(1, 2) == 2);
  CHECK(circ.hom_size(0, 2) == 1);
  CHECK(circ.hom_size(2, 1) == 0);
  CHECK(check_category(circ).ok());
}

TEST_CASE("materialize matches hand-enumerated hom-sets") {
  // Each list is the full set of non-empty hom-sets, identities included.
  CHECK(hom_table(materialize(fx::seg())) ==
        HomTable{{{0, 0}, 1}, {{0, 1}, 1}, {{0, 2}, 1}, {{0, 3}, 1}, {{1, 1}, 1}, {{1, 2}, 1}, {{1, 3}, 1},
                 {{2, 2}, 1}, {{3, 3}, 1}});
  CHECK(hom_table(materialize(fx::vee())) ==
        HomTable{{{0, 0}, 1}, {{0, 1}, 1}, {{0, 2}, 1}, {{0, 3}, 1}, {{0, 4}, 1}, {{0, 5}, 1},
                 {{1, 1}, 1}, {{1, 3}, 1}, {{1, 4}, 1}, {{2, 2}, 1}, {{2, 3}, 1}, {{2, 5}, 1},
                 {{3, 3}, 1}, {{4, 4}, 1}, {{5, 5}, 1}});
  CHECK(hom_table(materialize(fx::pp2())) ==
        HomTable{{{0, 0}, 1}, {{0, 1}, 1}, {{0, 2}, 1}, {{1, 1}, 1}, {{1, 2}, 1}, {{2, 2}, 1}});
}

TEST_CASE("composition in the circle") {
  MatCategory c = materialize(fx::circ());
  // Both morphisms 1 -> 2 composed with the unique 0 -> 1 give the unique 0 -> 2.
  std::size_t to1 = c.homs.at({0, 1}).front();
  std::size_t to2 = c.homs.at({0, 2}).front();
  for (std::size_t g : c.homs.at({1, 2})) CHECK(c.compose.at({g, to1}) == to2);
  for (Symbol o : c.objects) {
    std::size_t id = c.identity.at(o);
    CHECK(c.morphisms[id].source == o);
    CHECK(c.morphisms[id].target == o);
  }
}

TEST_CASE("check_category notices a broken composition table") {
  MatCategory c = materialize(fx::circ());
  auto ids = c.homs.at({1, 2});
  std::size_t to1 = c.homs.at({0, 1}).front();
  c.compose[{ids[0], to1}] = ids[1];
  CategoryCheck check = check_category(c);
  CHECK_FALSE(check.ok());
  CHECK_FALSE(check.problems.empty());
}

TEST_CASE("materialize size guard") {
  CHECK_NOTHROW(materialize(singletons(kMaxMaterializeObjects - 1)));
  try {
    materialize(singletons(kMaxMaterializeObjects));
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooLarge);
  }
}

TEST_CASE("equivalent") {
  MatCategory seg = materialize(fx::seg());
  CHECK(equivalent(seg, seg));
  CHECK_FALSE(equivalent(materialize(fx::pt()), materialize(fx::two())));
  CHECK_FALSE(equivalent(seg, materialize(fx::circ())));
  CHECK_FALSE(equivalent(materialize(fx::vee()), materialize(fx::tsd())));
  CHECK(equivalent(materialize(fx::two()), materialize(parse("[{0->5} [],{0->9} []]"))));

  try {
    equivalent(materialize(singletons(9)), materialize(singletons(9)));
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooLarge);
  }
}

TEST_CASE("equivalent is invariant under relabelling the root") {
  std::mt19937_64 rng(7);
  std::size_t tried = 0;
  for (std::uint64_t seed = 0; seed < 200 && tried < 60; ++seed) {
    Node n = fuzz_bac(seed, 1 + seed % 7);
    auto syms = symbols(n);
    if (syms.size() > kMaxEquivalenceObjects) continue;
    std::vector<Symbol> image(syms.begin() + 1, syms.end());
    for (Symbol& s : image) s += 100;
    std::shuffle(image.begin(), image.end(), rng);
    Dict pi;
    pi.emplace(kBase, kBase);
    for (std::size_t i = 1; i < syms.size(); ++i) pi.emplace(syms[i], image[i - 1]);
    Node renamed = relabel(n, kBase, pi);
    CHECK(equivalent(materialize(n), materialize(renamed)));
    ++tried;
  }
  CHECK(tried >= 50);
}

TEST_CASE("fuzz_bac") {
  CHECK(fuzz_bac(1, 0) == empty());
  CHECK(fuzz_bac(99, 0) == empty());
  Node n = fuzz_bac(1, 10);
  CHECK(validate(n).ok());
  CHECK(print(fuzz_bac(1, 10)) == print(n));
  CHECK(symbols(n).size() <= 11);

  std::size_t distinct = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    if (!(fuzz_bac(seed, 10) == fuzz_bac(seed + 1, 10))) ++distinct;
  }
  CHECK(distinct > 10);
}

TEST_CASE("fuzz_bac observer sees every applied operation") {
  std::size_t steps = 0;
  Node last = empty();
  Node n = fuzz_bac(3, 12, [&](const std::string& op, const Node& before, const Node& after) {
    CHECK_FALSE(op.empty());
    CHECK(before == last);
    CHECK(validate(after).ok());
    last = after;
    ++steps;
  });
  CHECK(steps > 0);
  CHECK(last == n);
}

TEST_CASE("hom-set sizes agree with direct path counting on fuzzed nodes") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Node n = fuzz_bac(seed, 1 + seed % 8);
    MatCategory c = materialize(n);
    CategoryCheck check = check_category(c);
    CHECK_MESSAGE(check.ok(), "seed " << seed);
    for (Symbol s : c.objects) {
      for (Symbol t : c.objects) {
        CHECK_MESSAGE(c.hom_size(s, t) == count_paths(n, s, t), "seed " << seed << " " << s << "->" << t);
      }
    }
  }
}
