#include <random>
#include <stdexcept>

#include "bridgefold/braid.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bridgefold;

namespace {

BraidSpaceElement random_bs(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> td(-3, 3);
  return {testsupport::random_word(rng, n, 6), td(rng)};
}

}  // namespace

TEST_CASE("braid word parsing") {
  BraidWord b = parse_braid("s2 s1^-1 s2^3", 3);
  CHECK(b.letters == std::vector<int>{2, -1, 2, 2, 2});
  CHECK(parse_braid(to_string(b), 3) == b);
  CHECK_THROWS_AS(parse_braid("s3", 3), std::invalid_argument);
  CHECK_THROWS_AS(parse_braid("q1", 3), std::invalid_argument);
  CHECK_THROWS_AS(parse_braid("s0", 3), std::invalid_argument);
}

TEST_CASE("permutation of the reference pattern") {
  BraidWord b = parse_braid("s2 s1^-1 s2 s2", 3);
  Permutation tau = permutation(b);
  CHECK(tau.of(1) == 3);
  CHECK(tau.of(3) == 2);
  CHECK(tau.of(2) == 1);
  CHECK(is_knot_pattern(b));
  CHECK_FALSE(is_knot_pattern(parse_braid("s1", 3)));
  CHECK_FALSE(is_knot_pattern(parse_braid("s1 s1", 2)));
  CHECK(is_knot_pattern(parse_braid("s1", 2)));
  CHECK(permutation(concat(b, inverse(b))) == Permutation::identity(3));
}

TEST_CASE("single generator action on the free group") {
  FreeAutomorphism phi = artin(parse_braid("s1", 2));
  CHECK(phi.images[0] == Word({1, 2, -1}));
  CHECK(phi.images[1] == Word({1}));
}

TEST_CASE("action laws on random braids") {
  std::mt19937 rng(211);
  for (int iter = 0; iter < 200; ++iter) {
    int n = std::uniform_int_distribution<int>(2, 6)(rng);
    BraidWord a = testsupport::random_braid(rng, n, 10);
    BraidWord b = testsupport::random_braid(rng, n, 10);

    // the boundary word is fixed by every braid action
    Word p = positive_product(n);
    CHECK(artin(a).apply(p) == p);

    // homomorphism into Aut(F_n): letters act in reading order
    CHECK(artin(concat(a, b)) == compose(artin(a), artin(b)));
    CHECK(compose(artin(a), artin(inverse(a))) == FreeAutomorphism::identity(n));
    CHECK(compose(artin(inverse(a)), artin(a)) == FreeAutomorphism::identity(n));

    // generator images are conjugates of generators, permuted like strands
    FreeAutomorphism phi = artin(a);
    Permutation tau = permutation(a);
    Word prod;
    for (int i = 1; i <= n; ++i) {
      auto [conj, target] = decompose_image(phi.images[i - 1]);
      CHECK(target == tau.of(i));
      if (!conj.empty()) {
        int last = conj.letter(conj.length() - 1);
        CHECK(last != target);
        CHECK(last != -target);
      }
      prod = multiply(prod, conjugate(conj, Word({target})));
    }
    CHECK(prod == p);
  }
}

TEST_CASE("decomposition of conjugates") {
  CHECK(decompose_image(Word({1, 2, -1})) == std::pair{Word({1}), 2});
  CHECK(decompose_image(Word({1})) == std::pair{Word{}, 1});
  CHECK(decompose_image(Word({2, -1, 3, 1, -2})) == std::pair{Word({2, -1}), 3});
  CHECK_THROWS_AS(decompose_image(Word({1, 2})), std::invalid_argument);
  CHECK_THROWS_AS(decompose_image(Word({-1})), std::invalid_argument);
  CHECK_THROWS_AS(decompose_image(Word{}), std::invalid_argument);
}

TEST_CASE("twisted product arithmetic") {
  BraidContext ctx = BraidContext::make(parse_braid("s1", 2));
  BraidSpaceElement t{Word{}, 1};
  BraidSpaceElement x1{Word({1}), 0};
  CHECK(bs_multiply(ctx, t, x1) == BraidSpaceElement{Word({1, 2, -1}), 1});

  std::mt19937 rng(223);
  for (int iter = 0; iter < 150; ++iter) {
    int n = std::uniform_int_distribution<int>(2, 4)(rng);
    BraidContext c = BraidContext::make(testsupport::random_braid(rng, n, 6));
    BraidSpaceElement a = random_bs(rng, n);
    BraidSpaceElement b = random_bs(rng, n);
    BraidSpaceElement d = random_bs(rng, n);
    CHECK(bs_multiply(c, bs_multiply(c, a, b), d) == bs_multiply(c, a, bs_multiply(c, b, d)));
    CHECK(bs_multiply(c, a, bs_invert(c, a)).is_identity());
    CHECK(bs_multiply(c, bs_invert(c, a), a).is_identity());

    // conjugation by t realizes the braid action
    Word w = testsupport::random_word(rng, n, 6);
    BraidSpaceElement lhs =
        bs_multiply(c, bs_multiply(c, BraidSpaceElement{Word{}, 1}, BraidSpaceElement{w, 0}),
                    BraidSpaceElement{Word{}, -1});
    CHECK(lhs == BraidSpaceElement{c.phi.apply(w), 0});
    CHECK(c.apply_power(c.apply_power(w, 2), -2) == w);
    CHECK(c.apply_power(w, -1) == c.phi_inv.apply(w));
  }
}

TEST_CASE("meridian conjugates rewrite into the fiber") {
  BraidContext ctx = BraidContext::make(parse_braid("s1", 2));
  CHECK(rewrite_meridian_conjugate(ctx, {Word{}, 1}) == PeripheralConjugate{Word({1}), 2});
  CHECK(rewrite_meridian_conjugate(ctx, {Word{}, 0}) == PeripheralConjugate{Word{}, 1});

  std::mt19937 rng(227);
  for (int iter = 0; iter < 150; ++iter) {
    int n = std::uniform_int_distribution<int>(2, 4)(rng);
    BraidContext c = BraidContext::make(testsupport::random_knot_braid(rng, n));
    BraidSpaceElement g = random_bs(rng, n);
    PeripheralConjugate pc = rewrite_meridian_conjugate(c, g);
    CHECK(pc.index >= 1);
    CHECK(pc.index <= n);
    BraidSpaceElement conj = bs_multiply(
        c, bs_multiply(c, g, BraidSpaceElement{Word({1}), 0}), bs_invert(c, g));
    CHECK(conj == BraidSpaceElement{pc.word(n), 0});
  }
}

TEST_CASE("meridional subgroups of the fiber") {
  BraidContext ctx = BraidContext::make(parse_braid("s1", 2));
  auto nc = classify_meridional(ctx, {{Word{}, 0}, {Word{}, 1}});
  CHECK(nc.normal_closure);

  auto single = classify_meridional(ctx, {{Word{}, 0}});
  CHECK_FALSE(single.normal_closure);
  REQUIRE(single.basis.size() == 1);
  CHECK(single.basis[0] == PeripheralConjugate{Word{}, 1});

  std::mt19937 rng(229);
  for (int iter = 0; iter < 80; ++iter) {
    int n = std::uniform_int_distribution<int>(2, 4)(rng);
    BraidContext c = BraidContext::make(testsupport::random_knot_braid(rng, n));
    int k = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<BraidSpaceElement> conjugators;
    std::vector<Word> words;
    for (int i = 0; i < k; ++i) {
      conjugators.push_back(random_bs(rng, n));
      words.push_back(rewrite_meridian_conjugate(c, conjugators.back()).word(n));
    }
    auto cls = classify_meridional(c, conjugators);
    SubgroupGraph g = SubgroupGraph::build(words, n);
    if (cls.normal_closure) {
      CHECK(g.is_whole_group());
    } else {
      CHECK(cls.basis.size() <= conjugators.size());
      std::vector<Word> basis_words;
      for (const auto& pc : cls.basis) basis_words.push_back(pc.word(n));
      CHECK(SubgroupGraph::build(basis_words, n) == g);
    }
  }
}
