#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bac/core.hpp"
#include "bac/oracle.hpp"
#include "fixtures.hpp"

using namespace bac;

namespace {

Arrow arr(Dict d, Node t = Node()) { return Arrow{std::move(d), std::move(t)}; }

int count_distinct_nodes(const Node& node) {
  int count = 0;
  fold<int>(node, [&](const Node&, std::span<const int>) { return ++count; });
  return count;
}

}  // namespace

TEST_CASE("symbols of fixtures") {
  CHECK(symbols(fx::empty()) == std::vector<Symbol>{0});
  CHECK(symbols(fx::pt()) == std::vector<Symbol>{0, 1});
  CHECK(symbols(fx::seg()) == std::vector<Symbol>{0, 1, 2, 3});
  CHECK(fresh_symbol(fx::seg()) == 4);
}

TEST_CASE("cat composes dictionaries") {
  CHECK(cat({{0, 1}, {1, 2}, {2, 3}}, {{0, 1}}) == Dict{{0, 2}});
  Dict d{{0, 2}, {1, 1}};
  CHECK(cat(identity_dict(std::vector<Symbol>{0, 1, 2}), d) == d);
  try {
    cat({{0, 1}}, {{0, 2}});
    FAIL("expected MissingKey");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingKey);
  }
}

TEST_CASE("cat agrees with path enumeration on SEG") {
  // Root edge then Nseg's {0->1} edge lands on root symbol 2; the brute force
  // walker sees exactly one arrow from object 1 to object 2.
  CHECK(count_paths(fx::seg(), 1, 2) == 1);
  CHECK(count_paths(fx::seg(), 0, 2) == 1);
}

TEST_CASE("root") {
  CHECK(root(fx::empty()) == arr({{0, 0}}));
  CHECK(root(fx::pt()).dict == Dict{{0, 0}, {1, 1}});
}

TEST_CASE("join") {
  Node seg = fx::seg();
  const Edge& top = seg.edges()[0];
  const Edge& left = top.target.edges()[0];
  CHECK(join(to_arrow(top), to_arrow(left)) == arr({{0, 2}}));

  Node circ = fx::circ();
  const Edge& c = circ.edges()[0];
  auto low = c.target.edges();
  CHECK(join(to_arrow(c), to_arrow(low[0])) == arr({{0, 2}}));
  CHECK(join(to_arrow(c), to_arrow(low[1])) == arr({{0, 2}}));
}

TEST_CASE("locate") {
  CHECK(locate(root(fx::seg()), 0) == Location::Boundary);
  CHECK(locate(*arrow(fx::seg(), 1), 2) == Location::Inner);
  CHECK(locate(*arrow(fx::two(), 1), 2) == Location::Outer);
}

TEST_CASE("arrow and symbol") {
  CHECK(*arrow(fx::seg(), 2) == arr({{0, 2}}));
  CHECK_FALSE(arrow(fx::pt(), 5).has_value());
  CHECK(symbol(root(fx::seg())) == 0);
  CHECK(symbol(*arrow(fx::seg(), 2)) == 2);
  CHECK(arrows(fx::seg()).size() == 4);
}

TEST_CASE("divide") {
  Node seg = fx::seg();
  Arrow a = *arrow(seg, 2);
  CHECK(divide(root(seg), a) == std::vector<Arrow>{a});
  CHECK(divide(*arrow(seg, 1), *arrow(seg, 2)) == std::vector<Arrow>{arr({{0, 1}})});
  CHECK(divide(*arrow(seg, 2), *arrow(seg, 3)).empty());
}

TEST_CASE("arrow2 and symbol2") {
  Node seg = fx::seg();
  auto p = arrow2(seg, {1, 1});
  REQUIRE(p.has_value());
  CHECK(p->first == arr({{0, 1}, {1, 2}, {2, 3}}, fx::nseg()));
  CHECK(p->second == arr({{0, 1}}));
  CHECK(symbol2(*p) == Chain2{1, 1});
  auto q = arrow2(seg, {0, 3});
  REQUIRE(q.has_value());
  CHECK(q->first == root(seg));
  CHECK(q->second == *arrow(seg, 3));
  CHECK(symbol2(*q) == Chain2{0, 3});
  CHECK_FALSE(arrow2(fx::pt(), {1, 5}).has_value());
}

TEST_CASE("nondecomposable") {
  CHECK(nondecomposable(fx::seg(), 1));
  CHECK_FALSE(nondecomposable(fx::seg(), 2));
  try {
    nondecomposable(fx::pt(), 0);
    FAIL("expected InvalidSymbol");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidSymbol);
  }
}

TEST_CASE("suffix_nd") {
  CHECK(suffix_nd(fx::two(), 1) == std::vector<Chain2>{{0, 1}});
  CHECK(suffix_nd(fx::vee(), 3) == std::vector<Chain2>{{1, 1}, {2, 1}});
  CHECK(suffix_nd(fx::seg(), 1) == std::vector<Chain2>{{0, 1}});
}

TEST_CASE("fold visits each distinct node once") {
  CHECK(count_distinct_nodes(fx::seg()) == 3);
  int calls = 0;
  std::size_t children = 99;
  fold<int>(fx::empty(), [&](const Node&, std::span<const int> c) {
    ++calls;
    children = c.size();
    return 0;
  });
  CHECK(calls == 1);
  CHECK(children == 0);
}

TEST_CASE("fold survives deep chains") {
  // A tower of 20000 objects would overflow a recursive fold.
  Node n;
  for (int i = 0; i < 20000; ++i) n = Node({Edge{{{0, 1}}, n}});
  CHECK(count_distinct_nodes(n) == 20001);
}

TEST_CASE("fold_under") {
  Node seg = fx::seg();
  int visited = 0;
  std::vector<Location> low;
  auto r = fold_under<int>(seg, 3, [&](const Arrow& curr, std::span<const EdgeVisit<int>> vs) {
    ++visited;
    if (symbol(curr) == 1) {
      for (const auto& v : vs) low.push_back(v.location);
    }
    return 0;
  });
  CHECK(r.has_value());
  CHECK(visited == 2);
  std::sort(low.begin(), low.end());
  CHECK(low == std::vector<Location>{Location::Boundary, Location::Outer});

  int none = 0;
  auto z = fold_under<int>(seg, 0, [&](const Arrow&, std::span<const EdgeVisit<int>>) { return ++none; });
  CHECK_FALSE(z.has_value());
  CHECK(none == 0);
}

TEST_CASE("modify_under with identity edit") {
  Node seg = fx::seg();
  Node out = modify_under(seg, 3, [](const Arrow&, const Edge& e, Location, const Node* inner) {
    return std::vector<Edge>{Edge{e.dict, inner ? *inner : e.target}};
  });
  CHECK(out == seg);
  CHECK(modify_under(seg, 0, [](const Arrow&, const Edge&, Location, const Node*) { return std::vector<Edge>{}; }) ==
        seg);
}

TEST_CASE("validate") {
  CHECK(validate(fx::seg()).ok());
  CHECK(validate(fx::circ()).ok());
  CHECK(validate(fx::vee()).ok());

  auto missing = validate(parse_unchecked("[{0->1,1->2} " + fx::kNseg + "]"));
  CHECK(missing.has(Law::Totality));

  auto clash = validate(parse_unchecked("[{0->1} [],{0->1,1->2} [{0->1} []]]"));
  CHECK(clash.has(Law::Supportivity));

  auto extra = validate(parse_unchecked("[{0->1,5->2} []]"));
  CHECK(extra.has(Law::Surjectivity));

  auto zero = validate(parse_unchecked("[{0->1,1->0} [{0->1} []]]"));
  CHECK(zero.has(Law::Supportivity));

  auto dup_base = validate(parse_unchecked("[{0->1,1->1} [{0->1} []]]"));
  CHECK(dup_base.has(Law::Supportivity));
}

TEST_CASE("violation paths point at the offending node") {
  auto report = validate(parse_unchecked("[{0->1,1->2,2->3} [{0->1,1->2} " + fx::kNseg + "]]"));
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations.front().law == Law::Totality);
  CHECK(report.violations.front().path == std::vector<std::size_t>{0});
}

TEST_CASE("join is associative with root as identity on fuzzed arrows") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Node n = fuzz_bac(seed, 8);
    for (const Arrow& a : arrows(n)) {
      CHECK(join(root(n), a) == a);
      CHECK(join(a, root(a.target)) == a);
      for (const Arrow& b : arrows(a.target)) {
        for (const Arrow& c : arrows(b.target)) {
          CHECK(join(join(a, b), c) == join(a, join(b, c)));
        }
      }
    }
  }
}

TEST_CASE("derived laws hold on fuzzed nodes") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Node n = fuzz_bac(seed, 10);
    for (const Arrow& a : arrows(n)) {
      Symbol base = symbol(a);
      int hits = 0;
      for (auto [k, v] : a.dict) {
        if (base != 0) CHECK(v != 0);
        if (v == base) ++hits;
      }
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("arrow2 and symbol2 round-trip on fuzzed nodes") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Node n = fuzz_bac(seed, 8);
    for (const Arrow& a : arrows(n)) {
      for (Symbol x : symbols(a.target)) {
        Chain2 c{symbol(a), x};
        auto p = arrow2(n, c);
        REQUIRE(p.has_value());
        CHECK(symbol2(*p) == c);
      }
    }
  }
}
