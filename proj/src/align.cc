#include "qasrl/align.h"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace qasrl {

namespace {

constexpr double kEps = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Edge weights, negative where two spans do not pass the threshold.
using WeightMatrix = std::vector<std::vector<double>>;

struct Solution {
  int size = 0;
  double weight = 0.0;
  std::vector<int> match_pred;
};

// Successive shortest augmenting paths: after k augmentations the matching
// has maximum weight among matchings of size k, so the final matching has
// maximum size and, for that size, maximum weight.
Solution Solve(const WeightMatrix &weights, const std::vector<bool> &pred_on,
               const std::vector<bool> &gold_on) {
  const int n = static_cast<int>(pred_on.size());
  const int m = static_cast<int>(gold_on.size());
  std::vector<int> match_pred(n, -1), match_gold(m, -1);
  Solution solution;

  while (true) {
    std::vector<double> pred_dist(n, kInf), gold_dist(m, kInf);
    std::vector<int> gold_parent(m, -1);
    for (int i = 0; i < n; ++i) {
      if (pred_on[i] && match_pred[i] < 0) pred_dist[i] = 0.0;
    }
    for (int round = 0; round <= n + m; ++round) {
      bool changed = false;
      for (int i = 0; i < n; ++i) {
        if (pred_dist[i] == kInf) continue;
        for (int j = 0; j < m; ++j) {
          if (!gold_on[j] || weights[i][j] < 0 || match_pred[i] == j) continue;
          double d = pred_dist[i] - weights[i][j];
          if (d < gold_dist[j] - kEps) {
            gold_dist[j] = d;
            gold_parent[j] = i;
            changed = true;
          }
        }
      }
      for (int j = 0; j < m; ++j) {
        int i = match_gold[j];
        if (i < 0 || gold_dist[j] == kInf) continue;
        double d = gold_dist[j] + weights[i][j];
        if (d < pred_dist[i] - kEps) {
          pred_dist[i] = d;
          changed = true;
        }
      }
      if (!changed) break;
    }

    int target = -1;
    for (int j = 0; j < m; ++j) {
      if (match_gold[j] >= 0 || gold_dist[j] == kInf) continue;
      if (target < 0 || gold_dist[j] < gold_dist[target] - kEps) target = j;
    }
    if (target < 0) break;

    // Walk back: gold j <- pred i (new edge), pred i <- its old gold.
    int j = target;
    while (j >= 0) {
      int i = gold_parent[j];
      int previous = match_pred[i];
      match_pred[i] = j;
      match_gold[j] = i;
      j = previous;
    }
  }

  solution.match_pred = std::move(match_pred);
  for (int i = 0; i < n; ++i) {
    int j = solution.match_pred[i];
    if (j < 0) continue;
    ++solution.size;
    solution.weight += weights[i][j];
  }
  return solution;
}

}  // namespace

IouThreshold::IouThreshold(double value) : value_(value) {
  if (!(value > 0.0 && value <= 1.0)) {
    throw std::invalid_argument("IOU threshold must be in (0, 1], got " +
                                std::to_string(value));
  }
}

double iou(const Span &a, const Span &b) {
  int intersection = std::max(0, std::min(a.end, b.end) - std::max(a.start, b.start));
  int uni = a.length() + b.length() - intersection;
  if (uni <= 0) return 0.0;
  return static_cast<double>(intersection) / uni;
}

bool IouThreshold::Passes(const Span &a, const Span &b) const {
  int intersection = std::max(0, std::min(a.end, b.end) - std::max(a.start, b.start));
  if (intersection == 0) return false;
  int uni = a.length() + b.length() - intersection;
  return intersection >= value_ * uni - kEps;
}

double MatchResult::TotalIou() const {
  double total = 0.0;
  for (const Pair &pair : pairs) total += pair.iou;
  return total;
}

MatchResult align(std::span<const Span> pred, std::span<const Span> gold,
                  const IouThreshold &threshold) {
  const int n = static_cast<int>(pred.size());
  const int m = static_cast<int>(gold.size());
  WeightMatrix weights(n, std::vector<double>(m, -1.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (threshold.Passes(pred[i], gold[j])) weights[i][j] = iou(pred[i], gold[j]);
    }
  }

  std::vector<bool> pred_on(n, true), gold_on(m, true);
  const Solution optimum = Solve(weights, pred_on, gold_on);

  // Visit spans in (start, end, index) order so that ties resolve by span
  // content, not by input position. Each predicted span takes the first gold
  // span that keeps the optimum reachable.
  auto content_order = [](std::span<const Span> spans) {
    std::vector<int> order(spans.size());
    for (size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return spans[a] < spans[b]; });
    return order;
  };
  const std::vector<int> pred_order = content_order(pred);
  const std::vector<int> gold_order = content_order(gold);

  std::vector<int> chosen(n, -1);
  int fixed_size = 0;
  double fixed_weight = 0.0;
  for (int i : pred_order) {
    pred_on[i] = false;
    for (int j : gold_order) {
      if (chosen[i] >= 0) break;
      if (!gold_on[j] || weights[i][j] < 0) continue;
      gold_on[j] = false;
      Solution rest = Solve(weights, pred_on, gold_on);
      if (fixed_size + 1 + rest.size == optimum.size &&
          fixed_weight + weights[i][j] + rest.weight >= optimum.weight - kEps) {
        chosen[i] = j;
        ++fixed_size;
        fixed_weight += weights[i][j];
      } else {
        gold_on[j] = true;
      }
    }
  }

  MatchResult result;
  std::vector<bool> gold_used(m, false);
  for (int i = 0; i < n; ++i) {
    if (chosen[i] >= 0) {
      result.pairs.push_back({i, chosen[i], weights[i][chosen[i]]});
      gold_used[chosen[i]] = true;
    } else {
      result.unmatched_pred.push_back(i);
    }
  }
  for (int j = 0; j < m; ++j) {
    if (!gold_used[j]) result.unmatched_gold.push_back(j);
  }
  return result;
}

}  // namespace qasrl
