#pragma once

// Exact orbifold Euler characteristic arithmetic for (p, q) torus knots
// and the inequality chain certifying that proper meridional subgroups of
// rank below the bridge number force a contradiction (meridional tameness
// of torus knots).  No floating point: all values are exact rationals or
// integers.

#include <boost/rational.hpp>

#include <string>

namespace bridgefold {

using Rational = boost::rational<long long>;

// chi of the base 2-orbifold S^2(inf, p, q): -1 + 1/p + 1/q.
// Requires p > q >= 2 coprime; always negative under that precondition.
Rational orbifold_euler(int p, int q);

struct TamenessCertificate {
  int p = 3, q = 2, r = 1;
  Rational orbifold;          // chi(O)
  long long index_bound = 0;  // p*q*chi(O) = -pq + p + q, an integer
  long long cover = 0;        // chi of the candidate cover: 1 - r
  bool holds = false;         // the contradiction chain checks out
  std::string chain;          // evaluated chain, aligned text
};

// Evaluates the chain
//   1 - r > 1 - q >= 3 - 2q >= p*q*chi(O) >= chi(cover) = 1 - r
// for a rank-r meridional candidate (0 <= r < q) in the (p, q) torus knot
// group.  Returns the evaluated inequalities; holds == true means every
// link of the chain is satisfied, i.e. the candidate is contradictory.
TamenessCertificate tameness_certificate(int p, int q, int r);

// Euler characteristic of a degree-`sheets` cover of a space with
// chi = 1 - n (wedge of n circles): sheets * (1 - n).
long long cover_euler(long long sheets, long long n);

}  // namespace bridgefold
