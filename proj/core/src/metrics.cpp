#include "salieval/metrics.hpp"

#include <algorithm>

namespace salieval {

int hit_count_top_k(const Ranking& ranking, const std::vector<int>& gt, int k) {
  const int top = std::min<int>(k, static_cast<int>(ranking.positions.size()));
  int hits = 0;
  for (int i = 0; i < top; ++i)
    if (std::find(gt.begin(), gt.end(), ranking.positions[static_cast<size_t>(i)]) != gt.end())
      ++hits;
  return hits;
}

int covering_rank_of(const Ranking& ranking, const std::vector<int>& gt) {
  int deepest = -1;
  for (int g : gt) {
    const auto it = std::find(ranking.positions.begin(), ranking.positions.end(), g);
    if (it == ranking.positions.end())
      throw ContractError("mean_rank: ground-truth position " + std::to_string(g) +
                          " missing from the ranking");
    deepest = std::max(deepest, static_cast<int>(it - ranking.positions.begin()));
  }
  return deepest + 1;  // 1-indexed
}

double precision_at_k(const std::vector<Ranking>& rankings,
                      const std::vector<std::vector<int>>& gts, int k) {
  if (rankings.empty() || rankings.size() != gts.size())
    throw ContractError("precision_at_k: need matching non-empty rankings and ground truths");
  if (k <= 0) throw ContractError("precision_at_k: k must be positive");
  int64_t hits = 0;
  for (size_t i = 0; i < rankings.size(); ++i) {
    if (static_cast<int>(gts[i].size()) != k)
      throw ContractError("precision_at_k: ground truth size " + std::to_string(gts[i].size()) +
                          " does not equal k=" + std::to_string(k));
    hits += hit_count_top_k(rankings[i], gts[i], k);
  }
  return static_cast<double>(hits) /
         (static_cast<double>(k) * static_cast<double>(rankings.size()));
}

double mean_rank(const std::vector<Ranking>& rankings,
                 const std::vector<std::vector<int>>& gts) {
  if (rankings.empty() || rankings.size() != gts.size())
    throw ContractError("mean_rank: need matching non-empty rankings and ground truths");
  int64_t total = 0;
  for (size_t i = 0; i < rankings.size(); ++i) total += covering_rank_of(rankings[i], gts[i]);
  return static_cast<double>(total) / static_cast<double>(rankings.size());
}

}  // namespace salieval
