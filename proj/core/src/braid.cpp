#include "bridgefold/braid.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace bridgefold {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

BraidWord parse_braid(const std::string& text, int strands) {
  require(strands >= 2, "braid needs at least two strands");
  BraidWord b;
  b.strands = strands;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "1") continue;  // identity braid
    require(tok.size() >= 2 && tok[0] == 's', "bad braid token: " + tok);
    std::size_t pos = 1;
    while (pos < tok.size() && std::isdigit(static_cast<unsigned char>(tok[pos]))) ++pos;
    require(pos > 1, "bad braid token: " + tok);
    int idx = std::atoi(tok.substr(1, pos - 1).c_str());
    require(idx >= 1 && idx < strands, "braid letter out of range: " + tok);
    long long exp = 1;
    if (pos < tok.size()) {
      require(tok[pos] == '^' && pos + 1 < tok.size(), "bad braid token: " + tok);
      exp = std::atoll(tok.substr(pos + 1).c_str());
      require(exp != 0 || tok.substr(pos + 1) == "0", "bad braid token: " + tok);
    }
    int letter = exp >= 0 ? idx : -idx;
    for (long long k = 0; k < std::llabs(exp); ++k) b.letters.push_back(letter);
  }
  return b;
}

std::string to_string(const BraidWord& b) {
  if (b.letters.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < b.letters.size(); ++i) {
    if (i) out += ' ';
    int l = b.letters[i];
    out += 's' + std::to_string(l > 0 ? l : -l);
    if (l < 0) out += "^-1";
  }
  return out;
}

BraidWord concat(const BraidWord& a, const BraidWord& b) {
  BraidWord r = a;
  r.letters.insert(r.letters.end(), b.letters.begin(), b.letters.end());
  return r;
}

BraidWord inverse(const BraidWord& b) {
  BraidWord r;
  r.strands = b.strands;
  for (auto it = b.letters.rbegin(); it != b.letters.rend(); ++it) r.letters.push_back(-*it);
  return r;
}

Permutation Permutation::identity(int n) {
  Permutation p;
  p.images.resize(n);
  for (int i = 0; i < n; ++i) p.images[i] = i + 1;
  return p;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.images.resize(images.size());
  for (int i = 0; i < size(); ++i) p.images[images[i] - 1] = i + 1;
  return p;
}

Permutation permutation(const BraidWord& b) {
  Permutation p = Permutation::identity(b.strands);
  for (int l : b.letters) {
    int i = l > 0 ? l : -l;
    std::swap(p.images[i - 1], p.images[i]);
  }
  return p;
}

bool is_knot_pattern(const BraidWord& b) {
  Permutation p = permutation(b);
  int at = 1, steps = 0;
  do {
    at = p.of(at);
    ++steps;
  } while (at != 1 && steps <= b.strands);
  return steps == b.strands;
}

FreeAutomorphism FreeAutomorphism::identity(int n) {
  FreeAutomorphism f;
  f.n = n;
  for (int i = 1; i <= n; ++i) f.images.push_back(Word({i}));
  return f;
}

Word FreeAutomorphism::apply(const Word& w) const {
  std::vector<int> out;
  for (int l : w.letters()) {
    int i = l > 0 ? l : -l;
    const std::vector<int>& im = images[i - 1].letters();
    if (l > 0) {
      out.insert(out.end(), im.begin(), im.end());
    } else {
      for (auto it = im.rbegin(); it != im.rend(); ++it) out.push_back(-*it);
    }
  }
  return Word(out);
}

FreeAutomorphism compose(const FreeAutomorphism& f, const FreeAutomorphism& g) {
  FreeAutomorphism r;
  r.n = f.n;
  for (const Word& w : g.images) r.images.push_back(f.apply(w));
  return r;
}

namespace {

// Image of x_i under one Artin generator.
Word artin_letter_image(int letter, int i, int n) {
  int j = letter > 0 ? letter : -letter;
  if (letter > 0) {
    if (i == j) return Word({j, j + 1, -j});
    if (i == j + 1) return Word({j});
  } else {
    if (i == j) return Word({j + 1});
    if (i == j + 1) return Word({-(j + 1), j, j + 1});
  }
  (void)n;
  return Word({i});
}

}  // namespace

FreeAutomorphism artin(const BraidWord& b) {
  int n = b.strands;
  FreeAutomorphism acc = FreeAutomorphism::identity(n);
  for (int letter : b.letters) {
    FreeAutomorphism next;
    next.n = n;
    for (int i = 1; i <= n; ++i) next.images.push_back(acc.apply(artin_letter_image(letter, i, n)));
    acc = std::move(next);
  }
  return acc;
}

std::pair<Word, int> decompose_image(const Word& image) {
  const std::vector<int>& l = image.letters();
  std::size_t len = l.size();
  require(len % 2 == 1, "not a conjugate of a generator: " + to_string(image));
  std::size_t mid = len / 2;
  require(l[mid] > 0, "conjugate of an inverse generator: " + to_string(image));
  for (std::size_t k = 0; k < mid; ++k)
    require(l[len - 1 - k] == -l[k], "not a conjugate of a generator: " + to_string(image));
  return {Word(std::vector<int>(l.begin(), l.begin() + mid)), l[mid]};
}

BraidContext BraidContext::make(const BraidWord& b) {
  BraidContext ctx;
  ctx.n = b.strands;
  ctx.braid = b;
  ctx.phi = artin(b);
  ctx.phi_inv = artin(inverse(b));
  ctx.tau = permutation(b);
  return ctx;
}

Word BraidContext::apply_power(const Word& w, long long r) const {
  Word out = w;
  const FreeAutomorphism& f = r >= 0 ? phi : phi_inv;
  for (long long k = 0; k < std::llabs(r); ++k) out = f.apply(out);
  return out;
}

int BraidContext::tau_power_of(int i, long long r) const {
  if (r == 0) return i;
  const Permutation p = r > 0 ? tau : tau.inverse();
  int len = 1;
  for (int at = p.of(i); at != i; at = p.of(at)) ++len;
  int at = i;
  for (long long k = std::llabs(r) % len; k > 0; --k) at = p.of(at);
  return at;
}

BraidSpaceElement bs_multiply(const BraidContext& ctx, const BraidSpaceElement& a,
                              const BraidSpaceElement& b) {
  return {multiply(a.w, ctx.apply_power(b.w, a.t)), a.t + b.t};
}

BraidSpaceElement bs_invert(const BraidContext& ctx, const BraidSpaceElement& a) {
  return {ctx.apply_power(invert(a.w), -a.t), -a.t};
}

std::string to_string(const BraidSpaceElement& a) {
  std::string out = to_string(a.w);
  if (a.t != 0) {
    if (!a.w.empty()) out += ' ';
    else out.clear();
    out += "t^" + std::to_string(a.t);
  }
  return out.empty() ? "1" : out;
}

PeripheralConjugate rewrite_meridian_conjugate(const BraidContext& ctx,
                                               const BraidSpaceElement& g) {
  Word image = ctx.apply_power(Word({1}), g.t);
  auto [conj, target] = decompose_image(image);
  return {multiply(g.w, conj), target};
}

MeridionalClassification classify_meridional(const BraidContext& ctx,
                                             const std::vector<BraidSpaceElement>& conjugators) {
  std::vector<PeripheralConjugate> gens;
  for (const BraidSpaceElement& g : conjugators)
    gens.push_back(rewrite_meridian_conjugate(ctx, g));
  PeripheralBasisResult pb = peripheral_basis(gens, ctx.n);
  MeridionalClassification out;
  out.normal_closure = pb.whole_group;
  if (!pb.whole_group) out.basis = std::move(pb.basis);
  return out;
}

}  // namespace bridgefold
