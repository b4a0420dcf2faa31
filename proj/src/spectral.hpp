#pragma once

#include <cstdint>
#include <vector>

#include "affine.hpp"
#include "symbolic.hpp"

namespace tl {

// Log-domain singular data of A_word. Directions follow the sign
// convention "first nonzero coordinate positive"; the tie alpha_1 =
// alpha_2 reports the canonical basis.
struct SingularFrame {
  double log_alpha1 = 0.0;
  double log_alpha2 = 0.0;
  Vec2 theta1{1, 0};  // image singular directions
  Vec2 theta2{0, 1};
  Vec2 eta1{1, 0};  // domain singular directions
  Vec2 eta2{0, 1};
  size_t word_len = 0;

  double ratio21() const;  // alpha_2 / alpha_1
};

// Incrementally maintained factorization A_word = W diag(e^l1, e^l2) Z^T.
// Renormalizing each step keeps words of length 1e4 away from underflow
// even though alpha_2/alpha_1 can reach e^{-4000}.
class FrameAccumulator {
 public:
  explicit FrameAccumulator(const IFSSystem& ifs) : ifs_(&ifs) {}

  void push(int letter);
  size_t length() const { return len_; }
  SingularFrame frame() const;
  double log_det() const { return logdet_; }

 private:
  const IFSSystem* ifs_;
  Mat2 W_ = Mat2::identity();
  Mat2 Z_ = Mat2::identity();
  double l1_ = 0.0;
  double l2_ = 0.0;
  double logdet_ = 0.0;
  size_t len_ = 0;
};

SingularFrame singular_frame(const IFSSystem& ifs, const FiniteWord& word);

struct LyapunovEstimate {
  double lambda1 = 0.0;  // from alpha_1; lambda1 <= lambda2
  double lambda2 = 0.0;
  double stderr1 = 0.0;
  double stderr2 = 0.0;
  int n = 0;
  int trials = 0;
};

LyapunovEstimate lyapunov_estimate(const IFSSystem& ifs, const BernoulliWeights& weights, int n,
                                   int trials, uint64_t seed, uint64_t stream, int threads = 1);

// Closed form for diagonal carpets: (-sum p_i log h_i, -sum p_i log v_i).
std::pair<double, double> carpet_lyapunov(const IFSSystem& ifs, const BernoulliWeights& weights);

struct OseledetsResult {
  Vec2 theta_bar{1, 0};
  std::vector<double> angles;      // |angle between theta_1(i|n) and theta_1(i|n+1)|
  std::vector<double> log_ratios;  // log(alpha_2/alpha_1) at each step
  size_t stop_n = 0;
  bool converged = false;
};

// Follows theta_1 along growing prefixes of a nu_p-sampled word; stops
// once increments fall below tol with geometric decay confirmed over 10
// consecutive steps.
OseledetsResult oseledets_direction(const IFSSystem& ifs, const BernoulliWeights& weights,
                                    uint64_t seed, uint64_t stream, double tol,
                                    size_t max_len = 10000);

}  // namespace tl
