#include "qasrl/metrics.h"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>

namespace qasrl {

namespace {

// Flattened argument units of one annotation.
struct Units {
  std::vector<Span> spans;
  std::vector<int> owner;  // index into qa_pairs
};

Units Flatten(const VerbAnnotation &annotation) {
  Units units;
  for (size_t q = 0; q < annotation.qa_pairs.size(); ++q) {
    for (const Span &span : annotation.qa_pairs[q].answers) {
      units.spans.push_back(span);
      units.owner.push_back(static_cast<int>(q));
    }
  }
  return units;
}

void CheckSamePredicate(const VerbAnnotation &pred, const VerbAnnotation &gold) {
  if (pred.key() != gold.key()) {
    throw PredicateMismatch("prediction for " + pred.key().ToString() +
                            " scored against gold for " + gold.key().ToString());
  }
}

const Vocabulary &VocabOf(const EvalConfig &config) {
  return config.vocab ? *config.vocab : Vocabulary::Default();
}

class LabelOracle {
 public:
  LabelOracle(const VerbAnnotation &pred, const VerbAnnotation &gold,
              const Vocabulary &vocab) {
    for (const QAPair &qa : pred.qa_pairs) {
      pred_.push_back(signature(qa.question, pred.verb_forms, vocab));
    }
    for (const QAPair &qa : gold.qa_pairs) {
      gold_.push_back(signature(qa.question, gold.verb_forms, vocab));
    }
  }
  bool Match(int pred_qa, int gold_qa) const {
    return pred_[pred_qa] == gold_[gold_qa];
  }

 private:
  std::vector<StrictSignature> pred_;
  std::vector<StrictSignature> gold_;
};

// Marks which units on each side are labeled-mode or unlabeled-mode hits.
struct Hits {
  std::vector<bool> pred;
  std::vector<bool> gold;
  long tp = 0;
};

Hits CountHits(const MatchResult &match, const Units &pred, const Units &gold,
               const LabelOracle *labels) {
  Hits hits{std::vector<bool>(pred.spans.size(), false),
            std::vector<bool>(gold.spans.size(), false), 0};
  for (const MatchResult::Pair &pair : match.pairs) {
    if (labels && !labels->Match(pred.owner[pair.pred], gold.owner[pair.gold])) {
      continue;
    }
    hits.pred[pair.pred] = true;
    hits.gold[pair.gold] = true;
    ++hits.tp;
  }
  return hits;
}

int FindRoot(std::vector<int> &parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

double precision(const Counts &c) {
  if (c.tp + c.fp == 0) return c.fn == 0 ? 1.0 : 0.0;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double recall(const Counts &c) {
  if (c.tp + c.fn == 0) return c.fp == 0 ? 1.0 : 0.0;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double f1(double p, double r) {
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

std::string ModeName(Mode mode) {
  return mode == Mode::kLabeled ? "LA" : "UA";
}

std::string AggregationName(Aggregation aggregation) {
  return aggregation == Aggregation::kMacro ? "macro" : "micro";
}

Counts evaluate_verb(const VerbAnnotation &pred, const VerbAnnotation &gold,
                     const EvalConfig &config) {
  CheckSamePredicate(pred, gold);
  const Units pred_units = Flatten(pred);
  const Units gold_units = Flatten(gold);
  const MatchResult match = align(pred_units.spans, gold_units.spans, config.threshold);

  std::optional<LabelOracle> labels;
  if (config.mode == Mode::kLabeled) labels.emplace(pred, gold, VocabOf(config));
  const Hits hits = CountHits(match, pred_units, gold_units,
                              labels ? &*labels : nullptr);
  Counts counts;
  counts.tp = hits.tp;
  counts.fp = static_cast<long>(pred_units.spans.size()) - hits.tp;
  counts.fn = static_cast<long>(gold_units.spans.size()) - hits.tp;
  return counts;
}

Counts evaluate_verb_redundant(const VerbAnnotation &pred,
                               const VerbAnnotation &gold,
                               const EvalConfig &config) {
  CheckSamePredicate(pred, gold);
  const Units pred_units = Flatten(pred);
  const Units gold_units = Flatten(gold);
  const MatchResult match = align(pred_units.spans, gold_units.spans, config.threshold);

  std::optional<LabelOracle> labels;
  if (config.mode == Mode::kLabeled) labels.emplace(pred, gold, VocabOf(config));
  const Hits hits = CountHits(match, pred_units, gold_units,
                              labels ? &*labels : nullptr);

  // Predictions that are not hits and do not pass the threshold against any
  // gold unit (with an agreeing label, when required) become errors.
  const bool need_label = labels && config.ignore_requires_label;
  std::vector<int> errors;
  for (size_t p = 0; p < pred_units.spans.size(); ++p) {
    if (hits.pred[p]) continue;
    bool ignorable = false;
    for (size_t g = 0; g < gold_units.spans.size() && !ignorable; ++g) {
      if (!config.threshold.Passes(pred_units.spans[p], gold_units.spans[g])) continue;
      ignorable = !need_label || labels->Match(pred_units.owner[p], gold_units.owner[g]);
    }
    if (!ignorable) errors.push_back(static_cast<int>(p));
  }

  std::vector<int> parent(errors.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (size_t a = 0; a < errors.size(); ++a) {
    for (size_t b = a + 1; b < errors.size(); ++b) {
      if (pred_units.spans[errors[a]].Overlaps(pred_units.spans[errors[b]])) {
        parent[FindRoot(parent, static_cast<int>(a))] = FindRoot(parent, static_cast<int>(b));
      }
    }
  }
  long components = 0;
  for (size_t a = 0; a < errors.size(); ++a) {
    if (FindRoot(parent, static_cast<int>(a)) == static_cast<int>(a)) ++components;
  }

  Counts counts;
  counts.tp = hits.tp;
  counts.fp = components;
  counts.fn = static_cast<long>(gold_units.spans.size()) - hits.tp;
  return counts;
}

Scores aggregate(const std::vector<Counts> &per_verb, Aggregation aggregation) {
  if (per_verb.empty()) throw std::invalid_argument("nothing to aggregate");
  Scores scores;
  if (aggregation == Aggregation::kMicro) {
    Counts total;
    for (const Counts &c : per_verb) total += c;
    scores.precision = precision(total);
    scores.recall = recall(total);
  } else {
    double p_sum = 0.0, r_sum = 0.0;
    long n = 0;
    for (const Counts &c : per_verb) {
      if (c.empty()) continue;
      p_sum += precision(c);
      r_sum += recall(c);
      ++n;
    }
    if (n == 0) {
      throw std::invalid_argument(
          "macro aggregation: every predicate is empty on both sides");
    }
    scores.precision = p_sum / n;
    scores.recall = r_sum / n;
  }
  scores.f1 = f1(scores.precision, scores.recall);
  return scores;
}

EvalReport evaluate(const AnnotationSet &pred, const AnnotationSet &gold,
                    const EvalConfig &config, int jobs) {
  const auto gold_groups = gold.ByPredicate();
  const auto pred_groups = pred.ByPredicate();

  struct Task {
    PredicateKey key;
    const VerbAnnotation *gold;
    std::vector<const VerbAnnotation *> pred;
  };
  std::vector<Task> tasks;
  for (const auto &[key, group] : gold_groups) {
    if (group.size() != 1) {
      throw std::invalid_argument("gold holds " + std::to_string(group.size()) +
                                  " annotations for " + key.ToString());
    }
    Task task{key, group.front(), {}};
    auto it = pred_groups.find(key);
    if (it != pred_groups.end()) task.pred = it->second;
    if (!config.redundant && task.pred.size() > 1) {
      throw std::invalid_argument(
          "prediction holds " + std::to_string(task.pred.size()) +
          " annotations for " + key.ToString() + "; use redundant evaluation");
    }
    tasks.push_back(std::move(task));
  }

  EvalReport report;
  report.config = config;
  report.per_predicate.resize(tasks.size());
  auto run = [&](size_t begin, size_t end) {
    for (size_t t = begin; t < end; ++t) {
      const Task &task = tasks[t];
      VerbAnnotation predicted;
      if (task.pred.empty()) {
        predicted = *task.gold;
        predicted.source = Source::External();
        predicted.qa_pairs.clear();
      } else {
        predicted = MergeAnnotations(task.pred);
      }
      Counts counts = config.redundant
                          ? evaluate_verb_redundant(predicted, *task.gold, config)
                          : evaluate_verb(predicted, *task.gold, config);
      report.per_predicate[t] = {task.key, counts};
    }
  };
  const size_t workers =
      std::max<size_t>(1, std::min<size_t>(jobs > 0 ? jobs : 1, tasks.size()));
  if (workers <= 1) {
    run(0, tasks.size());
  } else {
    std::vector<std::thread> threads;
    const size_t chunk = (tasks.size() + workers - 1) / workers;
    for (size_t begin = 0; begin < tasks.size(); begin += chunk) {
      threads.emplace_back(run, begin, std::min(tasks.size(), begin + chunk));
    }
    for (std::thread &thread : threads) thread.join();
  }

  std::vector<Counts> counts;
  for (const PredicateResult &result : report.per_predicate) {
    report.totals += result.counts;
    counts.push_back(result.counts);
  }
  for (const auto &[key, group] : pred_groups) {
    if (!gold_groups.count(key)) ++report.skipped_predictions;
  }
  if (!counts.empty()) report.scores = aggregate(counts, config.aggregation);
  return report;
}

namespace {

// Stable text form of an annotation's content, used to pick one fixed
// orientation for a pair of annotations.
std::string CanonicalText(const VerbAnnotation &annotation) {
  std::string text = annotation.source.ToString();
  for (const QAPair &qa : annotation.qa_pairs) {
    text += '\n' + render_question(qa.question);
    for (const Span &span : qa.answers) {
      text += ' ' + std::to_string(span.start) + ':' + std::to_string(span.end);
    }
  }
  return text;
}

}  // namespace

AgreementReport iaa_pairwise(const AnnotationSet &a, const AnnotationSet &b,
                             const EvalConfig &config) {
  const auto a_groups = a.ByPredicate();
  const auto b_groups = b.ByPredicate();
  AgreementReport report;
  std::vector<Counts> counts;
  for (const auto &[key, a_group] : a_groups) {
    auto it = b_groups.find(key);
    if (it == b_groups.end()) continue;
    if (a_group.size() != 1 || it->second.size() != 1) {
      throw std::invalid_argument("agreement needs exactly one annotation per "
                                  "predicate on each side; " +
                                  key.ToString() + " has " +
                                  std::to_string(a_group.size()) + " and " +
                                  std::to_string(it->second.size()));
    }
    const VerbAnnotation &first = *a_group.front();
    const VerbAnnotation &second = *it->second.front();
    // Alignment tie-breaks depend on which side is the reference, so always
    // align in one canonical direction and mirror the counts if needed.
    Counts c;
    if (CanonicalText(first) <= CanonicalText(second)) {
      c = evaluate_verb(first, second, config);
    } else {
      c = evaluate_verb(second, first, config);
      std::swap(c.fp, c.fn);
    }
    report.per_predicate.push_back({key, c});
    report.totals += c;
    counts.push_back(c);
  }
  if (counts.empty()) {
    throw std::invalid_argument("agreement: the two sets share no predicates");
  }
  report.scores = aggregate(counts, config.aggregation);
  return report;
}

DatasetStats dataset_stats(const AnnotationSet &set) {
  DatasetStats stats;
  stats.verbs = static_cast<long>(set.annotations.size());
  stats.predicates = static_cast<long>(set.ByPredicate().size());
  for (const VerbAnnotation &annotation : set.annotations) {
    stats.questions += static_cast<long>(annotation.qa_pairs.size());
    for (const QAPair &qa : annotation.qa_pairs) {
      stats.answers += static_cast<long>(qa.answers.size());
    }
  }
  stats.roles_total = stats.questions;
  if (stats.verbs > 0) {
    stats.questions_per_verb = static_cast<double>(stats.questions) / stats.verbs;
  }
  if (stats.questions > 0) {
    stats.answers_per_question = static_cast<double>(stats.answers) / stats.questions;
  }
  return stats;
}

CostReport cost(const AnnotationSet &set, const CostSchedule &schedule) {
  for (double rate : {schedule.generation_base, schedule.generation_bonus,
                      schedule.consolidation_base,
                      schedule.consolidation_per_question}) {
    if (rate < 0) throw std::invalid_argument("cost rates must be non-negative");
  }
  CostReport report;
  double total = 0.0;
  for (const auto &[key, group] : set.ByPredicate()) {
    CostReport::Verb verb;
    verb.key = key;
    const VerbAnnotation *consolidated = nullptr;
    for (const VerbAnnotation *annotation : group) {
      if (annotation->source.kind == Source::Kind::kWorker) {
        int q = static_cast<int>(annotation->qa_pairs.size());
        verb.generated_questions.push_back(q);
        verb.cents += schedule.generation_base +
                      schedule.generation_bonus * std::max(0, q - 2);
      } else if (annotation->source.kind == Source::Kind::kConsolidated) {
        if (consolidated) {
          throw std::invalid_argument("two consolidated annotations for " +
                                      key.ToString());
        }
        consolidated = annotation;
      }
    }
    verb.generators = static_cast<int>(verb.generated_questions.size());
    if (verb.generators == 0 || !consolidated) {
      throw std::invalid_argument(
          "missing provenance for " + key.ToString() +
          ": cost needs worker and consolidated annotations");
    }
    verb.consolidated_questions = static_cast<int>(consolidated->qa_pairs.size());
    verb.cents += schedule.consolidation_base +
                  schedule.consolidation_per_question * verb.consolidated_questions;
    total += verb.cents;
    report.per_verb.push_back(std::move(verb));
  }
  if (!report.per_verb.empty()) report.average_cents = total / report.per_verb.size();
  return report;
}

}  // namespace qasrl
