#include <doctest.h>

#include <random>

#include "qasrl/dataset.h"
#include "qasrl/metrics.h"
#include "qasrl/report.h"
#include "test_support.h"

using namespace qasrl;
using namespace qasrl::testing;

namespace {

EvalConfig Config(Mode mode, bool redundant = false) {
  EvalConfig config;
  config.mode = mode;
  config.redundant = redundant;
  return config;
}

AnnotationSet SetOf(std::vector<VerbAnnotation> annotations, int length, bool redundant) {
  AnnotationSet set;
  set.redundant = redundant;
  set.sentences["r"] = Sentence{"r", std::vector<std::string>(length, "w")};
  set.annotations = std::move(annotations);
  return set;
}

}  // namespace

TEST_CASE("precision and recall conventions") {
  CHECK(precision({0, 0, 0}) == 1.0);
  CHECK(recall({0, 0, 0}) == 1.0);
  CHECK(precision({0, 0, 3}) == 0.0);
  CHECK(recall({0, 3, 0}) == 0.0);
  CHECK(f1(0.0, 0.0) == 0.0);
  CHECK(f1(0.5, 0.5) == 0.5);
}

TEST_CASE("identity scores one in both modes") {
  AnnotationSet gold = load_dataset(Fixture("gold/arrest_cut.jsonl"), DatasetFormat::kGold).set;
  for (Mode mode : {Mode::kUnlabeled, Mode::kLabeled}) {
    EvalReport report = evaluate(gold, gold, Config(mode));
    CHECK(report.scores.precision == 1.0);
    CHECK(report.scores.recall == 1.0);
    CHECK(report.scores.f1 == 1.0);
  }
}

TEST_CASE("unlabeled example") {
  VerbAnnotation gold = Verb("r", 0, CutForms(), Source::Consolidated(),
                             {Qa("Who cut something?", CutForms(), {{0, 2}, {4, 6}})});
  VerbAnnotation pred = Verb("r", 0, CutForms(), Source::Parser(),
                             {Qa("Who cut something?", CutForms(), {{0, 2}, {7, 9}})});
  Counts counts = evaluate_verb(pred, gold, Config(Mode::kUnlabeled));
  CHECK(counts == Counts{1, 1, 1});
  CHECK(precision(counts) == 0.5);
  CHECK(recall(counts) == 0.5);
}

TEST_CASE("labeled example with a voice mismatch") {
  VerbAnnotation gold = Verb("r", 0, GiveForms(), Source::Consolidated(),
                             {Qa("What was given?", GiveForms(), {{0, 2}, {4, 6}})});
  VerbAnnotation pred = Verb("r", 0, GiveForms(), Source::Parser(),
                             {Qa("What gave?", GiveForms(), {{0, 2}, {7, 9}})});
  CHECK(evaluate_verb(pred, gold, Config(Mode::kUnlabeled)) == Counts{1, 1, 1});
  CHECK(evaluate_verb(pred, gold, Config(Mode::kLabeled)) == Counts{0, 2, 2});
}

TEST_CASE("predicate mismatch is rejected") {
  VerbAnnotation a = Verb("r", 0, CutForms(), Source::Consolidated(), {});
  VerbAnnotation b = Verb("r", 1, CutForms(), Source::Consolidated(), {});
  CHECK_THROWS_AS(evaluate_verb(a, b, Config(Mode::kUnlabeled)), PredicateMismatch);
  CHECK_THROWS_AS(evaluate_verb_redundant(a, b, Config(Mode::kUnlabeled)), PredicateMismatch);
}

TEST_CASE("redundant examples") {
  const VerbForms forms = CutForms();
  VerbAnnotation gold = Verb("r", 0, forms, Source::Consolidated(),
                             {Qa("Who cut something?", forms, {{0, 3}})});

  VerbAnnotation ignored = Verb("r", 0, forms, Source::Parser(),
                                {Qa("Who cut something?", forms, {{0, 3}}),
                                 Qa("Who cut something?", forms, {{0, 2}})});
  Counts c1 = evaluate_verb_redundant(ignored, gold, Config(Mode::kUnlabeled, true));
  CHECK(c1 == Counts{1, 0, 0});
  CHECK(precision(c1) == 1.0);

  VerbAnnotation reports = Verb("r", 0, forms, Source::Parser(),
                                {Qa("Who cut something?", forms, {{0, 1}}),
                                 Qa("Who cut something?", forms, {{0, 3}})});
  CHECK(evaluate_verb_redundant(reports, gold, Config(Mode::kUnlabeled, true)) == Counts{1, 1, 0});

  VerbAnnotation far_gold = Verb("r", 0, forms, Source::Consolidated(),
                                 {Qa("Who cut something?", forms, {{6, 8}})});
  VerbAnnotation chained = Verb("r", 0, forms, Source::Parser(),
                                {Qa("What did someone cut?", forms, {{0, 2}}),
                                 Qa("What did someone cut?", forms, {{1, 3}})});
  CHECK(evaluate_verb_redundant(chained, far_gold, Config(Mode::kUnlabeled, true)) == Counts{0, 1, 1});
}

TEST_CASE("labeled redundant ignore needs a label match unless disabled") {
  const VerbForms forms = CutForms();
  VerbAnnotation gold = Verb("r", 0, forms, Source::Consolidated(),
                             {Qa("Who cut something?", forms, {{0, 3}})});
  VerbAnnotation pred = Verb("r", 0, forms, Source::Parser(),
                             {Qa("Who cut something?", forms, {{0, 3}}),
                              Qa("What did someone cut?", forms, {{0, 2}})});
  EvalConfig la = Config(Mode::kLabeled, true);
  CHECK(evaluate_verb_redundant(pred, gold, la) == Counts{1, 1, 0});
  la.ignore_requires_label = false;
  CHECK(evaluate_verb_redundant(pred, gold, la) == Counts{1, 0, 0});
}

TEST_CASE("suggest and carry fixture under redundant evaluation") {
  AnnotationSet gold = load_dataset(Fixture("gold/suggest_carry.jsonl"), DatasetFormat::kGold).set;
  AnnotationSet pred = load_dataset(Fixture("parser/suggest_carry.jsonl"), DatasetFormat::kParser).set;
  EvalReport ua = evaluate(pred, gold, Config(Mode::kUnlabeled, true));
  REQUIRE(ua.per_predicate.size() == 2);
  CHECK(ua.per_predicate[0].counts == Counts{1, 1, 0});
  CHECK(ua.per_predicate[1].counts == Counts{1, 0, 0});
  CHECK(ua.totals == Counts{2, 1, 0});
  EvalReport la = evaluate(pred, gold, Config(Mode::kLabeled, true));
  CHECK(la.per_predicate[0].counts == Counts{1, 1, 0});
  CHECK(la.per_predicate[1].counts == Counts{1, 1, 0});
  CHECK(la.totals == Counts{2, 2, 0});
  CHECK(la.scores.precision == 0.5);
}

TEST_CASE("aggregation") {
  std::vector<Counts> two = {{1, 1, 0}, {1, 0, 1}};
  Scores micro = aggregate(two, Aggregation::kMicro);
  CHECK(micro.precision == doctest::Approx(2.0 / 3));
  CHECK(micro.recall == doctest::Approx(2.0 / 3));
  Scores macro = aggregate(two, Aggregation::kMacro);
  CHECK(macro.precision == 0.75);
  CHECK(macro.recall == 0.75);
  Scores single_micro = aggregate({{3, 1, 2}}, Aggregation::kMicro);
  Scores single_macro = aggregate({{3, 1, 2}}, Aggregation::kMacro);
  CHECK(single_micro.precision == single_macro.precision);
  CHECK(single_micro.recall == single_macro.recall);
  CHECK(single_micro.f1 == single_macro.f1);
  CHECK_THROWS_AS(aggregate({}, Aggregation::kMicro), std::invalid_argument);
  CHECK_THROWS_AS(aggregate({{0, 0, 0}}, Aggregation::kMacro), std::invalid_argument);
}

TEST_CASE("iaa identity and symmetry on worker fixtures") {
  AnnotationSet w1 = load_dataset(Fixture("workers/w1.jsonl"), DatasetFormat::kDense).set;
  AnnotationSet w2 = load_dataset(Fixture("workers/w2.jsonl"), DatasetFormat::kDense).set;
  for (Mode mode : {Mode::kUnlabeled, Mode::kLabeled}) {
    CHECK(iaa_pairwise(w1, w1, Config(mode)).scores.f1 == 1.0);
    AgreementReport ab = iaa_pairwise(w1, w2, Config(mode));
    AgreementReport ba = iaa_pairwise(w2, w1, Config(mode));
    CHECK(ab.scores.f1 == ba.scores.f1);
    CHECK(ab.totals == ba.totals);
  }
  AnnotationSet other = w2;
  for (auto &a : other.annotations) a.verb_index += 100;
  for (auto &[id, s] : other.sentences) s.tokens.resize(200, "x");
  CHECK_THROWS_AS(iaa_pairwise(w1, other, Config(Mode::kUnlabeled)), std::invalid_argument);
}

TEST_CASE("dataset stats") {
  AnnotationSet set;
  set.sentences["r"] = Sentence{"r", std::vector<std::string>(10, "w")};
  const VerbForms forms = CutForms();
  set.annotations.push_back(Verb("r", 0, forms, Source::Consolidated(),
                                 {Qa("Who cut something?", forms, {{0, 1}}),
                                  Qa("What did someone cut?", forms, {{2, 3}, {4, 5}})}));
  set.annotations.push_back(Verb("r", 1, forms, Source::Consolidated(),
                                 {Qa("Who cut something?", forms, {{0, 1}}),
                                  Qa("When did someone cut something?", forms, {{6, 7}}),
                                  Qa("Where did someone cut something?", forms, {{8, 9}})}));
  DatasetStats stats = dataset_stats(set);
  CHECK(stats.verbs == 2);
  CHECK(stats.questions == 5);
  CHECK(stats.questions_per_verb == 2.5);
  CHECK(stats.answers == 6);
  CHECK(stats.answers_per_question == 1.2);

  DatasetStats empty = dataset_stats(AnnotationSet{});
  CHECK(empty.verbs == 0);
  CHECK(empty.questions_per_verb == 0.0);
  CHECK(empty.answers_per_question == 0.0);
}

TEST_CASE("cost") {
  const VerbForms forms = CutForms();
  auto qas = [&](int n) {
    std::vector<QAPair> out;
    const char *texts[] = {"Who cut something?", "What did someone cut?", "When did someone cut something?",
                           "Where did someone cut something?", "Why did someone cut something?"};
    for (int i = 0; i < n; ++i) out.push_back(Qa(texts[i], forms, {{i, i + 1}}));
    return out;
  };
  AnnotationSet set;
  set.redundant = true;
  set.sentences["r"] = Sentence{"r", std::vector<std::string>(10, "w")};
  set.annotations.push_back(Verb("r", 0, forms, Source::Worker("w1"), qas(2)));
  set.annotations.push_back(Verb("r", 0, forms, Source::Worker("w2"), qas(2)));
  set.annotations.push_back(Verb("r", 0, forms, Source::Consolidated(), qas(2)));
  CostSchedule schedule;
  CostReport report = cost(set, schedule);
  REQUIRE(report.per_verb.size() == 1);
  CHECK(report.per_verb[0].cents == 21.0);
  CHECK(report.average_cents == 21.0);

  AnnotationSet one;
  one.redundant = true;
  one.sentences = set.sentences;
  one.annotations.push_back(Verb("r", 0, forms, Source::Worker("w1"), qas(4)));
  one.annotations.push_back(Verb("r", 0, forms, Source::Consolidated(), qas(3)));
  schedule.generation_bonus = 1.5;
  CHECK(cost(one, schedule).per_verb[0].cents == 5 + 2 * 1.5 + 5 + 3 * 3);

  one.annotations.pop_back();
  CHECK_THROWS_AS(cost(one, schedule), std::invalid_argument);
}

TEST_CASE("jobs do not change the report") {
  AnnotationSet gold = load_dataset(Fixture("gold/suggest_carry.jsonl"), DatasetFormat::kGold).set;
  AnnotationSet pred = load_dataset(Fixture("parser/suggest_carry.jsonl"), DatasetFormat::kParser).set;
  EvalConfig config = Config(Mode::kLabeled, true);
  CHECK(eval_report_json(evaluate(pred, gold, config, 1)).dump() ==
        eval_report_json(evaluate(pred, gold, config, 4)).dump());
}

TEST_CASE("property: random annotation pairs") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    const int length = std::uniform_int_distribution<int>(4, 14)(rng);
    const bool redundant = trial % 2 == 1;
    VerbAnnotation gold = RandomCutAnnotation(rng, length, true, Source::Consolidated());
    VerbAnnotation pred = RandomCutAnnotation(rng, length, !redundant, Source::Parser());
    Counts ua, la;
    if (redundant) {
      ua = evaluate_verb_redundant(pred, gold, Config(Mode::kUnlabeled, true));
      la = evaluate_verb_redundant(pred, gold, Config(Mode::kLabeled, true));
    } else {
      ua = evaluate_verb(pred, gold, Config(Mode::kUnlabeled));
      la = evaluate_verb(pred, gold, Config(Mode::kLabeled));
    }
    CHECK(la.tp <= ua.tp);
    for (const Counts &c : {ua, la}) {
      const double p = precision(c), r = recall(c), f = f1(p, r);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
      CHECK(f >= 0.0);
      CHECK(f <= 1.0);
      if (c.tp == 0 && !(c.fp == 0 && c.fn == 0)) CHECK(f == 0.0);
    }
    if (!redundant) {
      AnnotationSet a = SetOf({pred}, length, false), b = SetOf({gold}, length, false);
      for (Mode mode : {Mode::kUnlabeled, Mode::kLabeled}) {
        AgreementReport ab = iaa_pairwise(a, b, Config(mode));
        AgreementReport ba = iaa_pairwise(b, a, Config(mode));
        CHECK(ab.scores.f1 == ba.scores.f1);
      }
    }
  }
}

TEST_CASE("property: micro report is invariant under annotation order") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int length = 12;
    std::vector<VerbAnnotation> gold_verbs, pred_verbs;
    for (int v = 0; v < 6; ++v) {
      VerbAnnotation g = RandomCutAnnotation(rng, length, true, Source::Consolidated());
      VerbAnnotation p = RandomCutAnnotation(rng, length, true, Source::Parser());
      g.verb_index = p.verb_index = v;
      gold_verbs.push_back(g);
      pred_verbs.push_back(p);
    }
    AnnotationSet gold = SetOf(gold_verbs, length, false);
    AnnotationSet pred = SetOf(pred_verbs, length, false);
    for (Mode mode : {Mode::kUnlabeled, Mode::kLabeled}) {
      const std::string expected = eval_report_json(evaluate(pred, gold, Config(mode))).dump();
      std::shuffle(gold.annotations.begin(), gold.annotations.end(), rng);
      std::shuffle(pred.annotations.begin(), pred.annotations.end(), rng);
      CHECK(eval_report_json(evaluate(pred, gold, Config(mode))).dump() == expected);
    }
  }
}
