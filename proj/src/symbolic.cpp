#include "symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tl {

BernoulliWeights::BernoulliWeights(std::vector<double> probs) : p(std::move(probs)) {
  if (p.size() < 2) throw std::domain_error("weights need at least two entries");
  for (double v : p)
    if (!(v > 0.0)) throw std::domain_error("weights must be strictly positive");
  double sum = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-12) throw std::domain_error("weights must sum to 1");
  p_min = *std::min_element(p.begin(), p.end());
  p_max = *std::max_element(p.begin(), p.end());
}

double cylinder_measure(const FiniteWord& word, const BernoulliWeights& weights) {
  word.validate(weights.m());
  double prod = 1.0;
  for (int l : word.letters) prod *= weights.p[static_cast<size_t>(l - 1)];
  return prod;
}

int sample_letter(const BernoulliWeights& weights, RngStream& rng) {
  double u = rng.uniform01();
  double acc = 0.0;
  int m = weights.m();
  for (int j = 0; j < m; ++j) {
    acc += weights.p[static_cast<size_t>(j)];
    if (u < acc) return j + 1;
  }
  return m;
}

FiniteWord sample_word(const BernoulliWeights& weights, size_t length, uint64_t seed,
                       uint64_t stream) {
  if (length < 1) throw std::domain_error("sample_word needs length >= 1");
  RngStream rng(seed, stream);
  FiniteWord w;
  w.letters.reserve(length);
  for (size_t k = 0; k < length; ++k) w.letters.push_back(sample_letter(weights, rng));
  return w;
}

bool incomparable(const FiniteWord& a, const FiniteWord& b) {
  return !a.is_prefix_of(b) && !b.is_prefix_of(a);
}

}  // namespace tl
