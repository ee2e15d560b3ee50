#include "bridgefold/toruskit.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bridgefold {

namespace {

void check_pq(int p, int q) {
  if (!(p > q && q >= 2)) throw std::invalid_argument("need p > q >= 2");
  if (std::gcd(p, q) != 1) throw std::invalid_argument("need p, q coprime");
}

}  // namespace

Rational orbifold_euler(int p, int q) {
  check_pq(p, q);
  return Rational(-1) + Rational(1, p) + Rational(1, q);
}

TamenessCertificate tameness_certificate(int p, int q, int r) {
  check_pq(p, q);
  if (!(0 <= r && r < q)) throw std::invalid_argument("need 0 <= r < q");
  TamenessCertificate cert;
  cert.p = p;
  cert.q = q;
  cert.r = r;
  cert.orbifold = orbifold_euler(p, q);
  cert.index_bound = -static_cast<long long>(p) * q + p + q;
  cert.cover = 1 - static_cast<long long>(r);

  long long one_minus_q = 1 - static_cast<long long>(q);
  long long three_minus_2q = 3 - 2 * static_cast<long long>(q);
  bool strict = cert.cover > one_minus_q;
  bool step1 = one_minus_q >= three_minus_2q;
  bool step2 = Rational(three_minus_2q) >= Rational(p) * q * cert.orbifold;
  bool exact = Rational(p) * q * cert.orbifold == Rational(cert.index_bound);
  cert.holds = strict && step1 && step2 && exact;

  std::ostringstream out;
  out << "chi(O)        = -1 + 1/" << p << " + 1/" << q << " = " << cert.orbifold.numerator()
      << "/" << cert.orbifold.denominator() << "\n";
  out << "p*q*chi(O)    = -" << p << "*" << q << " + " << p << " + " << q << " = "
      << cert.index_bound << "\n";
  out << "3 - 2q        = " << three_minus_2q << "\n";
  out << "1 - q         = " << one_minus_q << "\n";
  out << "1 - r         = " << cert.cover << "\n";
  out << "chain         : " << cert.cover << " > " << one_minus_q << " >= " << three_minus_2q
      << " >= " << cert.index_bound << " >= chi(cover) = " << cert.cover << "  ["
      << (cert.holds ? "contradiction confirmed" : "chain broken") << "]";
  cert.chain = out.str();
  return cert;
}

long long cover_euler(long long sheets, long long n) {
  if (sheets < 1 || n < 1) throw std::invalid_argument("need sheets >= 1 and n >= 1");
  return sheets * (1 - n);
}

}  // namespace bridgefold
