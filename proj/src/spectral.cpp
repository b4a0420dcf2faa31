#include "spectral.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

#include "svd2.hpp"

namespace tl {

namespace {

Vec2 sign_normalized(Vec2 v) {
  if (v.x < 0 || (v.x == 0 && v.y < 0)) return v * -1.0;
  if (v.x == 0) v.x = 0.0;  // drop negative zero
  return v;
}

Mat2 from_columns(const Vec2& c0, const Vec2& c1) { return {c0.x, c1.x, c0.y, c1.y}; }

Mat2 reorthonormalize(const Mat2& M) {
  Vec2 c0 = M.col(0).normalized();
  Vec2 c1 = M.col(1);
  c1 = (c1 - c0 * c1.dot(c0)).normalized();
  return from_columns(c0, c1);
}

}  // namespace

double SingularFrame::ratio21() const { return std::exp(log_alpha2 - log_alpha1); }

void FrameAccumulator::push(int letter) {
  const Mat2& A = ifs_->map(letter).matrix;
  Mat2 C = Z_.transpose() * A;
  double gap = l2_ - l1_;  // <= 0
  double eps = gap < -745.0 ? 0.0 : std::exp(gap);
  Mat2 Mhat{C.a, C.b, eps * C.c, eps * C.d};
  Svd2 sv = svd2(Mhat);

  logdet_ += std::log(std::abs(A.det()));
  l1_ += std::log(sv.s1);
  l2_ = std::min(logdet_ - l1_, l1_);
  W_ = reorthonormalize(W_ * from_columns(sv.u1, sv.u2));
  Z_ = from_columns(sv.v1, sv.v2);
  ++len_;
}

SingularFrame FrameAccumulator::frame() const {
  SingularFrame f;
  f.log_alpha1 = l1_;
  f.log_alpha2 = l2_;
  f.word_len = len_;
  if (l1_ - l2_ <= 1e-12) {
    // Tie: any orthogonal pair works, report the canonical basis.
    f.theta1 = {1, 0};
    f.theta2 = {0, 1};
    f.eta1 = {1, 0};
    f.eta2 = {0, 1};
  } else {
    f.theta1 = sign_normalized(W_.col(0));
    f.theta2 = sign_normalized(W_.col(1));
    f.eta1 = sign_normalized(Z_.col(0));
    f.eta2 = sign_normalized(Z_.col(1));
  }
  return f;
}

SingularFrame singular_frame(const IFSSystem& ifs, const FiniteWord& word) {
  if (word.empty()) throw std::domain_error("singular_frame needs a nonempty word");
  word.validate(ifs.m());
  FrameAccumulator acc(ifs);
  for (int letter : word.letters) acc.push(letter);
  return acc.frame();
}

LyapunovEstimate lyapunov_estimate(const IFSSystem& ifs, const BernoulliWeights& weights, int n,
                                   int trials, uint64_t seed, uint64_t stream, int threads) {
  if (n < 10) throw std::domain_error("lyapunov_estimate needs n >= 10");
  if (trials < 2) throw std::domain_error("lyapunov_estimate needs trials >= 2");

  std::vector<double> s1(static_cast<size_t>(trials)), s2(static_cast<size_t>(trials));
  auto run_trial = [&](int t) {
    RngStream rng(seed, stream + static_cast<uint64_t>(t));
    FrameAccumulator acc(ifs);
    for (int k = 0; k < n; ++k) acc.push(sample_letter(weights, rng));
    SingularFrame f = acc.frame();
    s1[static_cast<size_t>(t)] = -f.log_alpha1 / n;
    s2[static_cast<size_t>(t)] = -f.log_alpha2 / n;
  };

  if (threads <= 1) {
    for (int t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::vector<std::future<void>> jobs;
    for (int w = 0; w < threads; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (int t = w; t < trials; t += threads) run_trial(t);
      }));
    }
    for (auto& j : jobs) j.get();
  }

  LyapunovEstimate est;
  est.n = n;
  est.trials = trials;
  double m1 = 0, m2 = 0;
  for (int t = 0; t < trials; ++t) {
    m1 += s1[static_cast<size_t>(t)];
    m2 += s2[static_cast<size_t>(t)];
  }
  m1 /= trials;
  m2 /= trials;
  double v1 = 0, v2 = 0;
  for (int t = 0; t < trials; ++t) {
    v1 += (s1[static_cast<size_t>(t)] - m1) * (s1[static_cast<size_t>(t)] - m1);
    v2 += (s2[static_cast<size_t>(t)] - m2) * (s2[static_cast<size_t>(t)] - m2);
  }
  est.lambda1 = m1;
  est.lambda2 = m2;
  est.stderr1 = std::sqrt(v1 / (trials - 1) / trials);
  est.stderr2 = std::sqrt(v2 / (trials - 1) / trials);
  return est;
}

std::pair<double, double> carpet_lyapunov(const IFSSystem& ifs, const BernoulliWeights& weights) {
  if (weights.m() != ifs.m()) throw std::domain_error("weights do not match the system");
  double lh = 0.0, lv = 0.0;
  for (int i = 1; i <= ifs.m(); ++i) {
    const Mat2& A = ifs.map(i).matrix;
    if (std::abs(A.b) > 1e-12 || std::abs(A.c) > 1e-12)
      throw std::domain_error("carpet_lyapunov needs diagonal matrices");
    double p = weights.p[static_cast<size_t>(i - 1)];
    lh -= p * std::log(std::abs(A.a));
    lv -= p * std::log(std::abs(A.d));
  }
  return {lh, lv};
}

OseledetsResult oseledets_direction(const IFSSystem& ifs, const BernoulliWeights& weights,
                                    uint64_t seed, uint64_t stream, double tol, size_t max_len) {
  OseledetsResult out;
  RngStream rng(seed, stream);
  FrameAccumulator acc(ifs);
  Vec2 prev{0, 0};
  int calm = 0;
  double prev_angle = HUGE_VAL;
  for (size_t n = 1; n <= max_len; ++n) {
    acc.push(sample_letter(weights, rng));
    SingularFrame f = acc.frame();
    out.log_ratios.push_back(f.log_alpha2 - f.log_alpha1);
    Vec2 t1 = f.theta1;
    if (n >= 2) {
      // line angle, insensitive to sign flips of the reported direction
      double ang = std::atan2(std::abs(prev.cross(t1)), std::abs(prev.dot(t1)));
      out.angles.push_back(ang);
      if (ang <= tol && ang <= prev_angle * 0.95 + 1e-15)
        ++calm;
      else
        calm = 0;
      prev_angle = ang;
      if (calm >= 10) {
        out.theta_bar = t1;
        out.stop_n = n;
        out.converged = true;
        return out;
      }
    }
    prev = t1;
    out.theta_bar = t1;
    out.stop_n = n;
  }
  out.converged = false;
  return out;
}

}  // namespace tl
