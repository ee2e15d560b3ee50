#include "bridgefold/word.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

namespace bridgefold {

std::vector<int> reduce_letters(const std::vector<int>& letters) {
  std::vector<int> out;
  out.reserve(letters.size());
  for (int l : letters) {
    if (l == 0) throw std::invalid_argument("word letter must be nonzero");
    if (!out.empty() && out.back() == -l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Word::Word(std::vector<int> letters) : letters_(reduce_letters(letters)) {}

bool Word::operator<(const Word& other) const {
  if (letters_.size() != other.letters_.size())
    return letters_.size() < other.letters_.size();
  return letters_ < other.letters_;
}

Word multiply(const Word& a, const Word& b) {
  std::vector<int> cat = a.letters();
  cat.insert(cat.end(), b.letters().begin(), b.letters().end());
  return Word(std::move(cat));
}

Word invert(const Word& a) {
  std::vector<int> inv(a.letters().rbegin(), a.letters().rend());
  for (int& l : inv) l = -l;
  return Word(std::move(inv));
}

Word conjugate(const Word& g, const Word& w) {
  return multiply(multiply(g, w), invert(g));
}

Word power(const Word& a, long long exp) {
  Word base = exp < 0 ? invert(a) : a;
  long long k = exp < 0 ? -exp : exp;
  Word out;
  for (long long i = 0; i < k; ++i) out = multiply(out, base);
  return out;
}

Word generator_word(int i, int n) {
  if (n < 1) throw std::invalid_argument("rank must be positive");
  if (i < 1 || i > n + 1) throw std::invalid_argument("generator index out of range");
  if (i <= n) return Word({i});
  // x_{n+1} = (x1...xn)^-1 so the product of all n+1 generators reduces to 1.
  std::vector<int> letters;
  for (int j = n; j >= 1; --j) letters.push_back(-j);
  return Word(std::move(letters));
}

Word positive_product(int n) {
  std::vector<int> letters;
  for (int j = 1; j <= n; ++j) letters.push_back(j);
  return Word(std::move(letters));
}

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.length(); ++i) {
    if (i) out += ' ';
    int l = w.letter(i);
    out += (l > 0 ? 'x' : 'X');
    out += std::to_string(std::abs(l));
  }
  return out;
}

Word parse_word(const std::string& text) {
  std::istringstream in(text);
  std::vector<int> letters;
  std::string tok;
  while (in >> tok) {
    if (tok == "1" && letters.empty() && in.peek() == EOF) break;
    if (tok.size() < 2 || (tok[0] != 'x' && tok[0] != 'X'))
      throw std::invalid_argument("bad word token: " + tok);
    int idx = 0;
    try {
      std::size_t pos = 0;
      idx = std::stoi(tok.substr(1), &pos);
      if (pos != tok.size() - 1) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad word token: " + tok);
    }
    if (idx < 1) throw std::invalid_argument("bad word token: " + tok);
    letters.push_back(tok[0] == 'x' ? idx : -idx);
  }
  return Word(std::move(letters));
}

int max_index(const Word& w) {
  int m = 0;
  for (int l : w.letters()) m = std::max(m, std::abs(l));
  return m;
}

}  // namespace bridgefold
