#ifndef QASRL_ALIGN_H_
#define QASRL_ALIGN_H_

#include <span>
#include <vector>

#include "qasrl/types.h"

namespace qasrl {

// Minimum token IOU for two spans to count as the same argument.
class IouThreshold {
 public:
  static constexpr double kDefault = 0.5;

  IouThreshold() = default;
  explicit IouThreshold(double value);

  double value() const { return value_; }
  bool Passes(const Span &a, const Span &b) const;

 private:
  double value_ = kDefault;
};

// |a ∩ b| / |a ∪ b| over token sets.
double iou(const Span &a, const Span &b);

struct MatchResult {
  struct Pair {
    int pred = 0;
    int gold = 0;
    double iou = 0.0;
  };
  std::vector<Pair> pairs;  // ascending by pred index
  std::vector<int> unmatched_pred;
  std::vector<int> unmatched_gold;

  double TotalIou() const;
};

// Maximum-cardinality bipartite matching over the edges whose IOU passes the
// threshold. Among maximum matchings the one with the largest total IOU is
// chosen. Remaining ties are broken lexicographically: predicted spans are
// visited in (start, end, index) order and each takes the first gold span in
// the same order that still admits an optimal matching. Identical spans on
// one side are distinct nodes, ordered by index.
MatchResult align(std::span<const Span> pred, std::span<const Span> gold,
                  const IouThreshold &threshold = IouThreshold());

}  // namespace qasrl

#endif  // QASRL_ALIGN_H_
