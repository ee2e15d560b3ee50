#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bridgefold/tree_of_groups.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bridgefold;

namespace {

// Independent image in Z/p * Z/q: merge adjacent equal-generator syllables,
// reduce exponents mod p or q, drop zero syllables, iterate to a fixed
// point.  Together with the abelianization (u -> q, v -> p) this pair is a
// complete invariant: the kernel of the quotient map is the center, and the
// abelianization is injective on the center.
std::vector<std::pair<char, long long>> fp_image(int p, int q,
                                                 const std::vector<TorusSyllable>& raw) {
  std::vector<std::pair<char, long long>> cur;
  for (const auto& s : raw) cur.push_back({s.gen, s.exp});
  for (;;) {
    std::vector<std::pair<char, long long>> merged;
    for (const auto& s : cur) {
      if (!merged.empty() && merged.back().first == s.first)
        merged.back().second += s.second;
      else
        merged.push_back(s);
    }
    std::vector<std::pair<char, long long>> reduced;
    for (const auto& s : merged) {
      long long mod = s.first == 'u' ? p : q;
      long long e = ((s.second % mod) + mod) % mod;
      if (e != 0) reduced.push_back({s.first, e});
    }
    if (reduced == cur) return cur;
    cur = std::move(reduced);
  }
}

long long ab_image(int p, int q, const std::vector<TorusSyllable>& raw) {
  long long total = 0;
  for (const auto& s : raw) total += static_cast<long long>(s.exp) * (s.gen == 'u' ? q : p);
  return total;
}

std::vector<TorusSyllable> as_raw(const TorusElement& a) {
  std::vector<TorusSyllable> raw;
  if (a.center != 0) raw.push_back({'u', static_cast<int>(a.center * a.p)});
  for (const auto& s : a.syllables) raw.push_back(s);
  return raw;
}

std::vector<TorusSyllable> random_raw(std::mt19937& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), which(0, 1), exp(-6, 6);
  std::vector<TorusSyllable> raw;
  int k = len(rng);
  for (int i = 0; i < k; ++i) {
    int e = exp(rng);
    if (e == 0) e = 1;
    raw.push_back({which(rng) ? 'u' : 'v', e});
  }
  return raw;
}

const std::vector<std::pair<int, int>> kCoprime = {{3, 2}, {5, 2}, {5, 3}, {7, 2},
                                                   {7, 3}, {7, 4}, {5, 4}, {4, 3}};

ComposingElement ce(std::vector<int> letters, long long z = 0) {
  return {Word(std::move(letters)), z};
}

}  // namespace

TEST_CASE("torus normal forms match the quotient-pair oracle") {
  std::mt19937 rng(401);
  for (int iter = 0; iter < 400; ++iter) {
    auto [p, q] = kCoprime[iter % kCoprime.size()];
    auto raw_a = random_raw(rng, 8);
    auto raw_b = random_raw(rng, 8);
    TorusElement a = torus_normal_form(p, q, raw_a);
    TorusElement b = torus_normal_form(p, q, raw_b);

    // normal form invariants: alternating syllables with exponents in range
    for (std::size_t i = 0; i < a.syllables.size(); ++i) {
      const auto& s = a.syllables[i];
      CHECK((s.gen == 'u' || s.gen == 'v'));
      CHECK(s.exp >= 1);
      CHECK(s.exp < (s.gen == 'u' ? p : q));
      if (i) CHECK(s.gen != a.syllables[i - 1].gen);
    }

    // oracle agreement on equality
    bool same = fp_image(p, q, raw_a) == fp_image(p, q, raw_b) &&
                ab_image(p, q, raw_a) == ab_image(p, q, raw_b);
    CHECK(torus_equal(a, b) == same);
    CHECK((a == b) == same);

    // normal form is a fixed point of itself
    CHECK(torus_normal_form(p, q, as_raw(a)) == a);

    // multiplication concatenates raw spellings
    std::vector<TorusSyllable> cat = raw_a;
    cat.insert(cat.end(), raw_b.begin(), raw_b.end());
    CHECK(torus_multiply(a, b) == torus_normal_form(p, q, cat));

    CHECK(torus_multiply(a, torus_invert(a)).is_identity());
    CHECK(torus_multiply(torus_invert(a), a).is_identity());
    CHECK(torus_equal(torus_power(a, 3), torus_multiply(a, torus_multiply(a, a))));
  }
}

TEST_CASE("inserting central relator pairs preserves equality") {
  std::mt19937 rng(403);
  for (int iter = 0; iter < 100; ++iter) {
    auto [p, q] = kCoprime[iter % kCoprime.size()];
    auto raw = random_raw(rng, 6);
    std::vector<TorusSyllable> padded = raw;
    std::uniform_int_distribution<std::size_t> at(0, padded.size());
    padded.insert(padded.begin() + at(rng), {'u', p});
    padded.insert(padded.begin() + at(rng) % (padded.size() + 1), {'v', -q});
    CHECK(torus_equal(torus_normal_form(p, q, raw), torus_normal_form(p, q, padded)));
  }
}

TEST_CASE("named torus elements") {
  TorusElement u4 = torus_normal_form(3, 2, {{'u', 4}});
  CHECK(u4.center == 1);
  REQUIRE(u4.syllables.size() == 1);
  CHECK(u4.syllables[0] == TorusSyllable{'u', 1});

  CHECK(torus_equal(torus_normal_form(3, 2, {{'u', 3}}), torus_normal_form(3, 2, {{'v', 2}})));
  CHECK(torus_normal_form(3, 2, {{'u', 1}, {'u', -1}}).is_identity());
  CHECK(to_string(torus_identity(3, 2)) == "1");

  TorusElement m32 = torus_meridian(3, 2);
  CHECK(to_string(m32) == "c^-1,u^2,v");
  CHECK(torus_equal(m32, torus_normal_form(3, 2, {{'u', -1}, {'v', 1}})));
  CHECK(to_string(torus_meridian(5, 2)) == "c^-1,u^3,v");

  for (auto [p, q] : kCoprime) {
    TorusElement m = torus_meridian(p, q);
    TorusElement l = torus_longitude(p, q);
    CHECK(ab_image(p, q, as_raw(m)) == 1);
    CHECK(ab_image(p, q, as_raw(l)) == 0);
    // peripheral elements commute
    CHECK(torus_equal(torus_multiply(m, l), torus_multiply(l, m)));
    // longitude is the central element shifted by meridian powers
    TorusElement z = torus_normal_form(p, q, {{'u', p}});
    CHECK(torus_equal(torus_multiply(torus_power(m, static_cast<long long>(p) * q), l), z));
    // the center commutes with everything
    std::mt19937 rng(405);
    TorusElement g = torus_normal_form(p, q, random_raw(rng, 6));
    CHECK(torus_equal(torus_multiply(z, g), torus_multiply(g, z)));
  }
}

TEST_CASE("circle-factor products") {
  CHECK(cs_multiply(ce({1}, 1), ce({2}, -1)) == ce({1, 2}, 0));
  std::mt19937 rng(407);
  for (int iter = 0; iter < 100; ++iter) {
    std::uniform_int_distribution<int> td(-3, 3);
    ComposingElement a{testsupport::random_word(rng, 3, 5), td(rng)};
    ComposingElement b{testsupport::random_word(rng, 3, 5), td(rng)};
    ComposingElement c{testsupport::random_word(rng, 3, 5), td(rng)};
    CHECK(cs_multiply(cs_multiply(a, b), c) == cs_multiply(a, cs_multiply(b, c)));
    CHECK(cs_multiply(a, cs_invert(a)).is_identity());
    // t is central
    ComposingElement t{Word{}, 1};
    CHECK(cs_multiply(t, a) == cs_multiply(a, t));
  }
}

TEST_CASE("meridional classification in the composing space: named cases") {
  auto whole = cs_classify({{ce({}), 1}, {ce({}), 2}}, 2);
  CHECK(whole.whole_group);
  CHECK(whole.full_at_identity == std::vector<bool>{true, true});

  auto single = cs_classify({{ce({}), 1}}, 2);
  CHECK_FALSE(single.whole_group);
  REQUIRE(single.basis.size() == 1);
  CHECK(single.basis[0] == PeripheralConjugate{Word{}, 1});
  CHECK(single.full_at_identity == std::vector<bool>{true, false});

  auto conj = cs_classify({{ce({2}), 1}}, 3);
  CHECK_FALSE(conj.whole_group);
  REQUIRE(conj.basis.size() == 1);
  CHECK(conj.basis[0] == PeripheralConjugate{Word({2}), 1});
  CHECK(conj.full_at_identity == std::vector<bool>{false, false, false});

  // t-exponents on the conjugators never matter
  auto conj_t = cs_classify({{ce({2}, 5), 1}}, 3);
  CHECK(conj_t.basis == conj.basis);

  CHECK_THROWS_AS(cs_classify({{ce({}), 4}}, 3), std::invalid_argument);
  CHECK_THROWS_AS(cs_classify({{ce({}), 0}}, 3), std::invalid_argument);
}

TEST_CASE("meridional classification agrees with brute-force membership") {
  std::mt19937 rng(409);
  for (int iter = 0; iter < 120; ++iter) {
    int n = std::uniform_int_distribution<int>(2, 4)(rng);
    bool tiny = iter % 2 == 0;
    int k = std::uniform_int_distribution<int>(1, tiny ? 2 : 4)(rng);
    std::vector<CsGenerator> s;
    std::vector<Word> words;
    std::uniform_int_distribution<int> idx(1, n), td(-2, 2);
    for (int i = 0; i < k; ++i) {
      Word conj = testsupport::random_word(rng, n, tiny ? 1 : 4);
      s.push_back({{conj, td(rng)}, idx(rng)});
      words.push_back(PeripheralConjugate{conj, s.back().index}.word(n));
    }
    CsClassification cls = cs_classify(s, n);  // honest input: must not throw
    SubgroupGraph g = SubgroupGraph::build(words, n);
    CHECK(cls.whole_group == g.is_whole_group());
    if (cls.whole_group) continue;

    CHECK(cls.basis.size() <= s.size());
    // the boundary circle subgroup never meets a proper meridional subgroup
    CHECK(g.peripheral_cycles(n + 1).empty());
    for (int i = 1; i <= n; ++i) {
      bool full = cls.full_at_identity[i - 1];
      CHECK(full == min_positive_power_in(g, Word{}, Word({i})).has_value());
      if (tiny) {
        // small enough that the ball of radius 8 decides membership
        auto ball = testsupport::brute_ball(words, 8);
        REQUIRE(ball.complete);
        CHECK(full == ball.contains(Word({i})));
      } else {
        auto ball = testsupport::brute_ball(words, 3, 20000);
        if (ball.contains(Word({i}))) CHECK(full);
      }
    }
  }
}

TEST_CASE("vertex groups and edge inclusions of built trees") {
  KnotTree trefoil = parse_tree("torus(3,2)");
  TreeOfGroups tg0 = TreeOfGroups::build(trefoil);
  CHECK(tg0.num_vertices() == 1);
  CHECK(tg0.num_edges() == 0);
  CHECK(tg0.vertex(0).kind == VertexKind::V0);

  KnotTree sat = parse_tree("sat(braid 3 \"s2 s1^-1 s2 s2\", torus(3,2))");
  TreeOfGroups tg1 = TreeOfGroups::build(sat);
  CHECK(tg1.num_vertices() == 2);
  REQUIRE(tg1.num_edges() == 1);
  CHECK(tg1.vertex(0).kind == VertexKind::V1);
  CHECK(tg1.vertex(0).braid.n == 3);
  CHECK(tg1.edge(0).parent == 0);
  CHECK(tg1.edge(0).child == 1);
  CHECK(tg1.edge_of_child(1) == 0);
  CHECK(tg1.edge_of_child(0) == -1);

  KnotTree sums = parse_tree("sum(torus(3,2), torus(5,2))");
  TreeOfGroups tg2 = TreeOfGroups::build(sums);
  CHECK(tg2.num_vertices() == 3);
  REQUIRE(tg2.num_edges() == 2);
  CHECK(tg2.vertex(0).kind == VertexKind::V2);
  CHECK(tg2.vertex(0).fanout == 2);
  CHECK(tg2.edge(0).j_index == 1);
  CHECK(tg2.edge(1).j_index == 2);

  SUBCASE("satellite-root inclusions") {
    GroupElement a10 = tg1.alpha_map(0, 1, 0);
    CHECK(equal(a10, GroupElement{BraidSpaceElement{Word({1, 2, 3}), 0}}));
    CHECK(equal(tg1.alpha_map(0, 0, 1), GroupElement{BraidSpaceElement{Word{}, 1}}));
    CHECK(equal(tg1.alpha_map(0, 0, 0), identity_element(tg1.vertex(0))));
    CHECK(equal(tg1.omega_map(0, 2, 0), GroupElement{OpaqueElement{2, 0}}));
    CHECK(equal(tg1.omega_map(0, 0, 1), GroupElement{OpaqueElement{0, 1}}));
  }

  SUBCASE("composing-root inclusions") {
    CHECK(equal(tg2.alpha_map(0, 1, 0), GroupElement{ComposingElement{Word{}, 1}}));
    CHECK(equal(tg2.alpha_map(0, 0, 1), GroupElement{ComposingElement{Word({1}), 0}}));
    CHECK(equal(tg2.alpha_map(1, 0, 1), GroupElement{ComposingElement{Word({2}), 0}}));
    CHECK(equal(tg2.omega_map(0, 3, -2), GroupElement{OpaqueElement{3, -2}}));
  }

  SUBCASE("exact leaves take peripheral normal forms") {
    TreeOfGroups tgx = TreeOfGroups::build(sums, true);
    GroupElement m = tgx.omega_map(0, 1, 0);
    CHECK(equal(m, GroupElement{torus_meridian(3, 2)}));
    GroupElement l = tgx.omega_map(1, 0, 1);
    CHECK(equal(l, GroupElement{torus_longitude(5, 2)}));
  }

  SUBCASE("nested composing child uses the boundary word") {
    TreeOfGroups tgn =
        TreeOfGroups::build(parse_tree("sum(sum(torus(3,2), torus(3,2)), torus(5,2))"));
    // edge 0 goes to the inner composing vertex with fanout 2
    REQUIRE(tgn.vertex(tgn.edge(0).child).kind == VertexKind::V2);
    CHECK(equal(tgn.omega_map(0, 1, 0), GroupElement{ComposingElement{Word{}, 1}}));
    CHECK(equal(tgn.omega_map(0, 0, 1),
                GroupElement{ComposingElement{generator_word(3, 2), 0}}));
  }

  SUBCASE("satellite child meridian is the first fiber generator") {
    TreeOfGroups tgs =
        TreeOfGroups::build(parse_tree("sum(sat(braid 2 \"s1\", torus(3,2)), torus(3,2))"));
    REQUIRE(tgs.vertex(tgs.edge(0).child).kind == VertexKind::V1);
    CHECK(equal(tgs.omega_map(0, 2, 0), GroupElement{BraidSpaceElement{Word({1, 1}), 0}}));
    CHECK_THROWS_AS(tgs.omega_map(0, 1, 1), std::invalid_argument);
  }

  SUBCASE("edge inclusions are homomorphisms on the peripheral lattice") {
    std::mt19937 rng(411);
    std::uniform_int_distribution<int> zd(-3, 3);
    for (const TreeOfGroups* tg : {&tg1, &tg2}) {
      for (int e = 0; e < tg->num_edges(); ++e) {
        const auto& parent = tg->vertex(tg->edge(e).parent);
        const auto& child = tg->vertex(tg->edge(e).child);
        for (int rep = 0; rep < 20; ++rep) {
          long long a = zd(rng), b = zd(rng), c = zd(rng), d = zd(rng);
          CHECK(equal(tg->alpha_map(e, a + c, b + d),
                      multiply(parent, tg->alpha_map(e, a, b), tg->alpha_map(e, c, d))));
          long long bb = child.kind == VertexKind::V1 ? 0 : b;
          long long dd = child.kind == VertexKind::V1 ? 0 : d;
          CHECK(equal(tg->omega_map(e, a + c, bb + dd),
                      multiply(child, tg->omega_map(e, a, bb), tg->omega_map(e, c, dd))));
        }
      }
    }
  }
}

TEST_CASE("element parsing per vertex kind") {
  TreeOfGroups tg =
      TreeOfGroups::build(parse_tree("sat(braid 3 \"s2 s1^-1 s2 s2\", torus(3,2))"));
  const auto& braid_desc = tg.vertex(0);
  CHECK(equal(parse_element(braid_desc, "x3,X1,t^2"),
              GroupElement{BraidSpaceElement{Word({3, -1}), 2}}));
  CHECK(is_identity(parse_element(braid_desc, "1")));
  CHECK(equal(parse_element(braid_desc, "t^-1"), GroupElement{BraidSpaceElement{Word{}, -1}}));
  CHECK_THROWS_AS(parse_element(braid_desc, "x4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_element(braid_desc, "m"), std::invalid_argument);

  const auto& leaf_desc = tg.vertex(1);
  CHECK(equal(parse_element(leaf_desc, "m^2,l^-1"), GroupElement{OpaqueElement{2, -1}}));
  CHECK(equal(parse_element(leaf_desc, "m,m,l"), GroupElement{OpaqueElement{2, 1}}));
  CHECK_THROWS_AS(parse_element(leaf_desc, "u"), std::invalid_argument);

  TreeOfGroups tgx = TreeOfGroups::build(parse_tree("sum(torus(3,2), torus(5,2))"), true);
  const auto& torus_desc = tgx.vertex(1);
  CHECK(equal(parse_element(torus_desc, "m"), GroupElement{torus_meridian(3, 2)}));
  CHECK(equal(parse_element(torus_desc, "v,m,v^-1"),
              GroupElement{torus_multiply(
                  torus_multiply(torus_normal_form(3, 2, {{'v', 1}}), torus_meridian(3, 2)),
                  torus_invert(torus_normal_form(3, 2, {{'v', 1}})))}));
  CHECK(equal(parse_element(torus_desc, "c"),
              GroupElement{torus_normal_form(3, 2, {{'u', 3}})}));

  const auto& comp_desc = tgx.vertex(0);
  CHECK(equal(parse_element(comp_desc, "x1,t^-1"), GroupElement{ComposingElement{Word({1}), -1}}));
}

TEST_CASE("path files walk the tree and return to the root") {
  TreeOfGroups tg = TreeOfGroups::build(parse_tree("sum(torus(3,2), torus(5,2))"));
  auto paths = parse_paths(tg,
                           "a:1 e:d1 a:m e:u1 a:1\n"
                           "\n"
                           "a:t e:d2 a:m^2,l e:u2 a:1\n");
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].edges == std::vector<int>{0, 0});
  CHECK(paths[0].descending == std::vector<bool>{true, false});
  REQUIRE(paths[0].elements.size() == 3);
  CHECK(is_identity(paths[0].elements[0]));
  CHECK(equal(paths[0].elements[1], GroupElement{OpaqueElement{1, 0}}));
  CHECK(paths[1].edges == std::vector<int>{1, 1});
  CHECK(equal(paths[1].elements[0], GroupElement{ComposingElement{Word{}, 1}}));

  CHECK_THROWS_AS(parse_paths(tg, "a:1 e:d1 a:m"), ParseError);
  CHECK_THROWS_AS(parse_paths(tg, "a:1 e:d9 a:m e:u9 a:1"), ParseError);
  CHECK_THROWS_AS(parse_paths(tg, "a:1 e:u1 a:m e:d1 a:1"), ParseError);
  CHECK_THROWS_AS(parse_paths(tg, "a:1 a:1"), ParseError);
  CHECK_THROWS_AS(parse_paths(tg, "e:d1 a:m e:u1"), ParseError);
  try {
    parse_paths(tg, "a:1 e:d1 a:m e:u1 a:1\na:1 e:d1 a:zz e:u1 a:1");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("presentation text mentions every vertex and edge map") {
  TreeOfGroups tg = TreeOfGroups::build(parse_tree("sum(torus(3,2), torus(5,2))"), true);
  std::string text = tg.presentation();
  CHECK(text.find("t") != std::string::npos);
  CHECK(text.find("x1") != std::string::npos);
  CHECK(text.find("x2") != std::string::npos);
  CHECK(text.find("c^-1,u^2,v") != std::string::npos);
  CHECK(text.find("c^-1,u^3,v") != std::string::npos);
}
