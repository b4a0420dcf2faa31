#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rng.hpp"

namespace tl {

// Finite word over the alphabet {1..m}. Letters are 1-based; the empty
// word is a valid value.
struct FiniteWord {
  std::vector<int> letters;

  FiniteWord() = default;
  FiniteWord(std::initializer_list<int> ls) : letters(ls) {}
  explicit FiniteWord(std::vector<int> ls) : letters(std::move(ls)) {}

  size_t length() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  int at(size_t k) const { return letters[k]; }

  FiniteWord concat(const FiniteWord& o) const {
    FiniteWord w = *this;
    w.letters.insert(w.letters.end(), o.letters.begin(), o.letters.end());
    return w;
  }
  FiniteWord append(int letter) const {
    FiniteWord w = *this;
    w.letters.push_back(letter);
    return w;
  }
  FiniteWord prefix(size_t k) const {
    return FiniteWord(std::vector<int>(letters.begin(), letters.begin() + k));
  }

  bool is_prefix_of(const FiniteWord& o) const {
    if (length() > o.length()) return false;
    for (size_t k = 0; k < length(); ++k)
      if (letters[k] != o.letters[k]) return false;
    return true;
  }

  bool operator==(const FiniteWord& o) const { return letters == o.letters; }

  void validate(int m) const {
    for (int l : letters)
      if (l < 1 || l > m) throw std::domain_error("word letter out of range [1, m]");
  }
};

struct BernoulliWeights {
  std::vector<double> p;
  double p_min = 0.0;
  double p_max = 0.0;

  explicit BernoulliWeights(std::vector<double> probs);

  int m() const { return static_cast<int>(p.size()); }
};

// nu_p of the cylinder [word]: the product of p over the letters.
double cylinder_measure(const FiniteWord& word, const BernoulliWeights& weights);

// i.i.d. nu_p letters, fully determined by (seed, stream, length).
FiniteWord sample_word(const BernoulliWeights& weights, size_t length, uint64_t seed,
                       uint64_t stream);

// Draw one letter from an already-positioned stream.
int sample_letter(const BernoulliWeights& weights, RngStream& rng);

// i ⊥ j: neither word a prefix of the other (disjoint cylinders).
bool incomparable(const FiniteWord& a, const FiniteWord& b);

}  // namespace tl
