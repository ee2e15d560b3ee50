#pragma once

// Freely reduced words in a free group F_n on generators x1..xn.
//
// A letter is a nonzero int: +i stands for x_i, -i for the inverse of x_i.
// Words are kept freely reduced at all times; the constructors and all
// operations reduce their results.  The ambient rank n is not stored in the
// word itself, it is passed to the few operations that need it.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bridgefold {

class Word {
 public:
  Word() = default;
  // Reduces the letter sequence; throws std::invalid_argument on a zero letter.
  explicit Word(std::vector<int> letters);

  const std::vector<int>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int letter(std::size_t i) const { return letters_[i]; }

  bool operator==(const Word& other) const = default;

  // Lexicographic on (length, letters); gives a total order used whenever a
  // canonical representative has to be picked.
  bool operator<(const Word& other) const;

 private:
  std::vector<int> letters_;
};

// Free reduction of an arbitrary letter sequence (single stack pass).
std::vector<int> reduce_letters(const std::vector<int>& letters);

Word multiply(const Word& a, const Word& b);
Word invert(const Word& a);
// conjugate(g, w) = g * w * g^-1.
Word conjugate(const Word& g, const Word& w);
Word power(const Word& a, long long exp);

// The i-th standard generator of F_n as a word, for 1 <= i <= n+1.  The
// element x_{n+1} denotes the inverse of the product x1*...*xn, so that
// x1 * ... * x_{n+1} is trivial.
Word generator_word(int i, int n);

// The positive product x1*x2*...*xn.
Word positive_product(int n);

// Serialization: space separated tokens, lowercase for generators and
// uppercase for inverses ("x3 X1 x2").  The empty word prints as "1".
std::string to_string(const Word& w);
Word parse_word(const std::string& text);

// Largest generator index appearing in w (0 for the empty word).
int max_index(const Word& w);

}  // namespace bridgefold
