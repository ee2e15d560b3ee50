#pragma once

// Braid words, their permutations, and the induced free-group
// automorphisms, plus arithmetic in the braid space F_n x| <t>.
//
// Conventions (fixed once, asserted by tests):
//   * permutation: transpositions compose left to right over the braid
//     word, i.e. the first letter is applied last to a strand index.
//   * Artin action of a single generator s_i:
//       x_i |-> x_i x_{i+1} x_i^-1,  x_{i+1} |-> x_i
//     and a word acts by composing the letter actions left to right, so
//     that the image target permutation coincides with permutation().
//   * braid space: elements w * t^r with t w t^-1 = phi(w); products
//     follow (w1, r1)(w2, r2) = (w1 * phi^r1(w2), r1 + r2).

#include <optional>
#include <string>
#include <vector>

#include "bridgefold/stallings.hpp"
#include "bridgefold/word.hpp"

namespace bridgefold {

struct BraidWord {
  int strands = 2;
  std::vector<int> letters;  // +i = s_i, -i = s_i^-1, 1 <= i < strands

  bool operator==(const BraidWord&) const = default;
};

// "s2 s1^-1 s2^3" -> letters {2, -1, 2, 2, 2}; throws std::invalid_argument.
BraidWord parse_braid(const std::string& text, int strands);
std::string to_string(const BraidWord& b);
BraidWord concat(const BraidWord& a, const BraidWord& b);
BraidWord inverse(const BraidWord& b);

// images[i-1] = image of strand i.
struct Permutation {
  std::vector<int> images;

  int of(int i) const { return images[i - 1]; }
  int size() const { return static_cast<int>(images.size()); }
  static Permutation identity(int n);
  Permutation inverse() const;
  bool operator==(const Permutation&) const = default;
};

Permutation permutation(const BraidWord& b);

// True iff the closed braid is a knot, i.e. the permutation is one n-cycle.
bool is_knot_pattern(const BraidWord& b);

// An endomorphism of F_n given by generator images; all instances built
// here are automorphisms coming from braids.
struct FreeAutomorphism {
  int n = 1;
  std::vector<Word> images;  // images[i-1] = image of x_i

  static FreeAutomorphism identity(int n);
  Word apply(const Word& w) const;
  bool operator==(const FreeAutomorphism&) const = default;
};

// Standard composition: compose(f, g)(w) = f(g(w)).
FreeAutomorphism compose(const FreeAutomorphism& f, const FreeAutomorphism& g);

FreeAutomorphism artin(const BraidWord& b);

// Splits a conjugate-of-a-generator word as (conjugator, target index),
// with the conjugator of minimal length.  Throws std::invalid_argument if
// the word is not a conjugate of a positive generator.
std::pair<Word, int> decompose_image(const Word& image);

// Cached data of a braid-space vertex group F_n x| <t>.
struct BraidContext {
  int n = 2;
  BraidWord braid;
  FreeAutomorphism phi, phi_inv;
  Permutation tau;

  static BraidContext make(const BraidWord& b);
  Word apply_power(const Word& w, long long r) const;  // phi^r(w)
  int tau_power_of(int i, long long r) const;          // tau^r(i)
};

struct BraidSpaceElement {
  Word w;
  long long t = 0;

  bool is_identity() const { return t == 0 && w.empty(); }
  bool operator==(const BraidSpaceElement&) const = default;
};

BraidSpaceElement bs_multiply(const BraidContext& ctx, const BraidSpaceElement& a,
                              const BraidSpaceElement& b);
BraidSpaceElement bs_invert(const BraidContext& ctx, const BraidSpaceElement& a);
std::string to_string(const BraidSpaceElement& a);

// Rewrites g x1 g^-1 as w x_i w^-1 with w a word of F_n and i the strand
// target; the t-part of g is eliminated through the Artin action.
PeripheralConjugate rewrite_meridian_conjugate(const BraidContext& ctx,
                                               const BraidSpaceElement& g);

struct MeridionalClassification {
  bool normal_closure = false;          // subgroup is <<x1>> = F_n
  std::vector<PeripheralConjugate> basis;  // free peripheral basis otherwise
};

// Classifies the subgroup of F_n generated by { g x1 g^-1 : g in
// conjugators } per the normal-closure dichotomy for meridional subgroups.
MeridionalClassification classify_meridional(const BraidContext& ctx,
                                             const std::vector<BraidSpaceElement>& conjugators);

}  // namespace bridgefold
