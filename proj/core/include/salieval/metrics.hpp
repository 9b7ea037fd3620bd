#pragma once

#include <string>
#include <vector>

#include "salieval/salience.hpp"

namespace salieval {

// Per-example bookkeeping behind the aggregate metrics.
struct EvalRecord {
  int example_id = 0;
  std::string method_id;
  Ranking ranking;
  std::vector<int> gt_positions;
  int k = 0;
  int hit_count = 0;       // |top_k ∩ gt|
  int covering_rank = 0;   // smallest r with gt ⊆ top_r, 1-indexed
  SalienceMap map;         // kept only when records are requested
};

// Fraction of ground-truth tokens found in the top-k of each ranking:
// sum_i |top_k(i) ∩ gt_i| / (k * |D|). Every gt set must have size k.
double precision_at_k(const std::vector<Ranking>& rankings,
                      const std::vector<std::vector<int>>& gts, int k);

// Mean over examples of the smallest prefix length covering all ground-truth
// positions (1-indexed). Throws if a gt position is missing from its ranking.
double mean_rank(const std::vector<Ranking>& rankings,
                 const std::vector<std::vector<int>>& gts);

int hit_count_top_k(const Ranking& ranking, const std::vector<int>& gt, int k);
int covering_rank_of(const Ranking& ranking, const std::vector<int>& gt);

}  // namespace salieval
