#ifndef QASRL_METRICS_H_
#define QASRL_METRICS_H_

#include <map>
#include <string>
#include <vector>

#include "qasrl/align.h"
#include "qasrl/question.h"
#include "qasrl/types.h"

namespace qasrl {

struct Counts {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  Counts &operator+=(const Counts &other) {
    tp += other.tp;
    fp += other.fp;
    fn += other.fn;
    return *this;
  }
  bool empty() const { return tp == 0 && fp == 0 && fn == 0; }
  bool operator==(const Counts &) const = default;
};

// Precision/recall with the zero-denominator conventions: nothing predicted
// and nothing missed scores 1, nothing predicted but something missed
// scores 0 (and symmetrically for recall). F1 is 0 when P + R is 0.
double precision(const Counts &counts);
double recall(const Counts &counts);
double f1(double p, double r);

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

enum class Mode { kUnlabeled, kLabeled };
enum class Aggregation { kMicro, kMacro };

std::string ModeName(Mode mode);
std::string AggregationName(Aggregation aggregation);

struct EvalConfig {
  Mode mode = Mode::kUnlabeled;
  bool redundant = false;
  Aggregation aggregation = Aggregation::kMicro;
  IouThreshold threshold;
  // Labeled redundant evaluation: an unmatched prediction is only ignored
  // when its question also strict-matches the gold question it overlaps.
  bool ignore_requires_label = true;
  const Vocabulary *vocab = nullptr;  // defaults to Vocabulary::Default()
};

// Scores one predicate. Units are (answer span, owning question) pairs;
// spans are aligned with `align`. In labeled mode an aligned pair only
// counts when the two questions strict-match, and a mismatched pair counts
// as both a false positive and a false negative.
Counts evaluate_verb(const VerbAnnotation &pred, const VerbAnnotation &gold,
                     const EvalConfig &config);

// Scores a redundant prediction against consolidated gold. Unmatched
// predictions that still pass the IOU threshold against some gold span are
// ignored; the rest are grouped into connected components of overlapping
// spans and each component is one false positive.
Counts evaluate_verb_redundant(const VerbAnnotation &pred,
                               const VerbAnnotation &gold,
                               const EvalConfig &config);

// Micro: P/R/F1 of the summed counts. Macro: mean per-predicate P and R,
// skipping predicates with nothing in gold and nothing predicted, then F1
// of the means. Throws std::invalid_argument when nothing is left.
Scores aggregate(const std::vector<Counts> &per_verb, Aggregation aggregation);

struct PredicateResult {
  PredicateKey key;
  Counts counts;
};

struct EvalReport {
  EvalConfig config;
  std::vector<PredicateResult> per_predicate;  // sorted by predicate key
  Counts totals;
  Scores scores;
  // Predictions for predicates that have no gold annotation; not scored.
  long skipped_predictions = 0;
};

// Scores every gold predicate. With config.redundant all predicted
// annotations of a predicate are pooled; otherwise at most one predicted
// annotation per predicate is allowed. `jobs` > 1 spreads predicates over
// threads without changing the result.
EvalReport evaluate(const AnnotationSet &pred, const AnnotationSet &gold,
                    const EvalConfig &config, int jobs = 1);

// Agreement between two single-annotation-per-predicate sets over the
// predicates they share. The result is symmetric in (a, b).
struct AgreementReport {
  std::vector<PredicateResult> per_predicate;
  Counts totals;
  Scores scores;
};
AgreementReport iaa_pairwise(const AnnotationSet &a, const AnnotationSet &b,
                             const EvalConfig &config);

struct DatasetStats {
  long verbs = 0;
  long predicates = 0;  // distinct (sentence, verb) pairs
  long questions = 0;
  long answers = 0;
  double questions_per_verb = 0.0;
  double answers_per_question = 0.0;
  long roles_total = 0;
};

DatasetStats dataset_stats(const AnnotationSet &set);

// Rates in cents. The generation bonus has no documented rate; 2 cents is a
// placeholder default.
struct CostSchedule {
  double generation_base = 5.0;
  double generation_bonus = 2.0;
  double consolidation_base = 5.0;
  double consolidation_per_question = 3.0;
};

struct CostReport {
  struct Verb {
    PredicateKey key;
    int generators = 0;
    std::vector<int> generated_questions;
    int consolidated_questions = 0;
    double cents = 0.0;
  };
  std::vector<Verb> per_verb;
  double average_cents = 0.0;
};

// Per predicate: every worker annotation is a generator paid base plus the
// bonus for each question beyond its first two; the consolidated annotation
// adds the consolidation base and the per-question rate. Throws
// std::invalid_argument when a predicate lacks generator or consolidated
// annotations.
CostReport cost(const AnnotationSet &set, const CostSchedule &schedule);

}  // namespace qasrl

#endif  // QASRL_METRICS_H_
