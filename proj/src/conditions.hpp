#pragma once

#include <map>
#include <string>
#include <vector>

#include "affine.hpp"
#include "symbolic.hpp"

namespace tl {

enum class Verdict { Pass, Fail, Heuristic };

struct ConditionReport {
  std::string name;
  Verdict verdict = Verdict::Fail;
  std::string witness;                  // counterexample or certificate
  std::map<std::string, double> data;   // named numeric evidence
};

// Projection criterion: the images f_i(X) of the convex hull X of E must
// cover their own projection hull in every tested direction. Diagonal
// systems only need the dominant axis.
ConditionReport check_projection_sufficient(const IFSSystem& ifs, int n_dirs, int depth = 30);

// Find a word whose singular value ratio alpha_1/alpha_2 exceeds C:
// exhaustive up to length 6, then beam search.
ConditionReport check_pinching(const IFSSystem& ifs, double C, int max_len = 32);

// Find a word moving v off every target direction (BFS, shortest then
// lexicographically smallest witness).
ConditionReport check_twisting(const IFSSystem& ifs, const Vec2& v,
                               const std::vector<Vec2>& targets, int max_len = 8);

struct CarpetReport {
  ConditionReport separation;   // level-1 rectangles pairwise disjoint
  ConditionReport coverage;     // every vertical line meets >= 2 columns
  ConditionReport lyapunov;     // lambda_h < lambda_v strictly
  bool all_pass() const;
};

CarpetReport check_carpet(const IFSSystem& ifs, const BernoulliWeights& weights);

// Finite-depth line-casting heuristic for the section-4 line condition.
ConditionReport check_line_condition(const IFSSystem& ifs, const Box2& region, int N, int depth);

// (1 - p_min)^k * 4 m^K, the measure of words whose first k blocks all
// avoid a fixed letter pattern.
double forbidden_measure_bound(const BernoulliWeights& weights, int m, int K, int k);

std::string verdict_name(Verdict v);

}  // namespace tl
