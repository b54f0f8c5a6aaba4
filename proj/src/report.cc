#include "qasrl/report.h"

#include <cstdio>
#include <sstream>

namespace qasrl {

namespace {

OrderedJson Ratio(long num, long den, double value) {
  return OrderedJson{{"value", value}, {"num", num}, {"den", den},
                     {"display", percent(value)}};
}

OrderedJson Value(double value) {
  return OrderedJson{{"value", value}, {"display", percent(value)}};
}

OrderedJson ConfigJson(const EvalConfig &config) {
  return OrderedJson{{"mode", ModeName(config.mode)},
                     {"redundant", config.redundant},
                     {"aggregation", AggregationName(config.aggregation)},
                     {"iou_threshold", config.threshold.value()}};
}

OrderedJson ScoresJson(const Counts &totals, const Scores &scores,
                       Aggregation aggregation) {
  OrderedJson out{{"tp", totals.tp}, {"fp", totals.fp}, {"fn", totals.fn}};
  if (aggregation == Aggregation::kMicro) {
    out["P"] = Ratio(totals.tp, totals.tp + totals.fp, scores.precision);
    out["R"] = Ratio(totals.tp, totals.tp + totals.fn, scores.recall);
  } else {
    out["P"] = Value(scores.precision);
    out["R"] = Value(scores.recall);
  }
  out["F1"] = Value(scores.f1);
  return out;
}

OrderedJson PerPredicate(const std::vector<PredicateResult> &rows) {
  OrderedJson out = OrderedJson::array();
  for (const PredicateResult &row : rows) {
    out.push_back({{"id", row.key.ToString()},
                   {"tp", row.counts.tp},
                   {"fp", row.counts.fp},
                   {"fn", row.counts.fn}});
  }
  return out;
}

std::string Pad(const std::string &text, size_t width) {
  return text.size() >= width ? text + " " : text + std::string(width - text.size(), ' ');
}

std::string Row(const std::string &label, double p, double r, double f) {
  return Pad(label, 8) + Pad(percent(p), 8) + Pad(percent(r), 8) + percent(f) + "\n";
}

std::string SpansJson(const std::vector<Span> &spans, const Sentence &sentence,
                      OrderedJson *out) {
  std::string joined;
  for (const Span &span : spans) {
    out->push_back({{"start", span.start},
                    {"end", span.end},
                    {"text", SpanText(sentence, span)}});
    if (!joined.empty()) joined += " | ";
    joined += SpanText(sentence, span);
  }
  return joined;
}

}  // namespace

std::string percent(double ratio) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.1f", ratio * 100.0);
  return buffer;
}

OrderedJson eval_report_json(const EvalReport &report) {
  OrderedJson out;
  out["config"] = ConfigJson(report.config);
  out["per_predicate"] = PerPredicate(report.per_predicate);
  out["totals"] = ScoresJson(report.totals, report.scores, report.config.aggregation);
  out["skipped_predictions"] = report.skipped_predictions;
  return out;
}

std::string eval_table(const std::vector<EvalReport> &reports) {
  std::ostringstream out;
  if (!reports.empty()) {
    const EvalConfig &config = reports.front().config;
    out << "predicates: " << reports.front().per_predicate.size()
        << "  aggregation: " << AggregationName(config.aggregation)
        << "  redundant: " << (config.redundant ? "yes" : "no")
        << "  iou >= " << config.threshold.value() << "\n";
  }
  out << Pad("", 8) << Pad("P", 8) << Pad("R", 8) << "F1\n";
  for (const EvalReport &report : reports) {
    out << Row(ModeName(report.config.mode), report.scores.precision,
               report.scores.recall, report.scores.f1);
  }
  return out.str();
}

OrderedJson agreement_json(const AgreementReport &report, const EvalConfig &config) {
  OrderedJson out;
  OrderedJson cfg = ConfigJson(config);
  cfg.erase("redundant");
  out["config"] = cfg;
  out["per_predicate"] = PerPredicate(report.per_predicate);
  out["totals"] = ScoresJson(report.totals, report.scores, config.aggregation);
  return out;
}

std::string agreement_table(
    const std::vector<std::pair<EvalConfig, AgreementReport>> &rows) {
  std::ostringstream out;
  if (!rows.empty()) {
    out << "shared predicates: " << rows.front().second.per_predicate.size()
        << "  aggregation: " << AggregationName(rows.front().first.aggregation)
        << "\n";
  }
  out << Pad("", 8) << Pad("P", 8) << Pad("R", 8) << "F1\n";
  for (const auto &[config, report] : rows) {
    out << Row(ModeName(config.mode), report.scores.precision,
               report.scores.recall, report.scores.f1);
  }
  return out.str();
}

OrderedJson stats_json(const DatasetStats &stats) {
  return OrderedJson{{"verbs", stats.verbs},
                     {"predicates", stats.predicates},
                     {"questions", stats.questions},
                     {"answers", stats.answers},
                     {"roles_total", stats.roles_total},
                     {"questions_per_verb", stats.questions_per_verb},
                     {"answers_per_question", stats.answers_per_question}};
}

std::string stats_table(const DatasetStats &stats) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer),
                "verbs                 %ld\n"
                "predicates            %ld\n"
                "questions (roles)     %ld\n"
                "answers               %ld\n"
                "questions per verb    %.2f\n"
                "answers per question  %.2f\n",
                stats.verbs, stats.predicates, stats.questions, stats.answers,
                stats.questions_per_verb, stats.answers_per_question);
  return buffer;
}

OrderedJson cost_json(const CostReport &report, const CostSchedule &schedule) {
  OrderedJson out;
  out["schedule"] = {{"generation_base", schedule.generation_base},
                     {"generation_bonus", schedule.generation_bonus},
                     {"consolidation_base", schedule.consolidation_base},
                     {"consolidation_per_question", schedule.consolidation_per_question}};
  OrderedJson verbs = OrderedJson::array();
  for (const CostReport::Verb &verb : report.per_verb) {
    verbs.push_back({{"id", verb.key.ToString()},
                     {"generated_questions", verb.generated_questions},
                     {"consolidated_questions", verb.consolidated_questions},
                     {"cents", verb.cents}});
  }
  out["per_verb"] = std::move(verbs);
  out["average_cents"] = report.average_cents;
  return out;
}

std::string cost_table(const CostReport &report) {
  std::ostringstream out;
  char buffer[128];
  for (const CostReport::Verb &verb : report.per_verb) {
    std::string generated;
    for (int q : verb.generated_questions) {
      generated += (generated.empty() ? "" : "+") + std::to_string(q);
    }
    std::snprintf(buffer, sizeof(buffer), "%-24s gen %-8s cons %-3d %7.1f\n",
                  verb.key.ToString().c_str(), generated.c_str(),
                  verb.consolidated_questions, verb.cents);
    out << buffer;
  }
  std::snprintf(buffer, sizeof(buffer), "average per predicate: %.1f cents over %zu predicates\n",
                report.average_cents, report.per_verb.size());
  out << buffer;
  return out.str();
}

OrderedJson proposal_json(const ConsolidationProposal &proposal,
                          const Sentence &sentence) {
  OrderedJson out;
  out["id"] = proposal.key.ToString();
  OrderedJson groups = OrderedJson::array();
  for (const ProposalGroup &group : proposal.groups) {
    OrderedJson members = OrderedJson::array();
    for (const SourceQa &member : group.members) {
      OrderedJson answers = OrderedJson::array();
      SpansJson(member.qa.answers, sentence, &answers);
      members.push_back({{"source", member.source + 1},
                         {"question", render_question(member.qa.question)},
                         {"answers", std::move(answers)}});
    }
    OrderedJson answers = OrderedJson::array();
    SpansJson(group.answers, sentence, &answers);
    OrderedJson flags = OrderedJson::array();
    for (ConflictKind kind : group.flags) flags.push_back(ConflictName(kind));
    groups.push_back({{"signature", group.signature_key},
                      {"relaxed_key", group.relaxed_key},
                      {"members", std::move(members)},
                      {"answers", std::move(answers)},
                      {"flags", std::move(flags)}});
  }
  out["groups"] = std::move(groups);
  OrderedJson conflicts = OrderedJson::array();
  for (const Conflict &conflict : proposal.conflicts) {
    OrderedJson entry{{"kind", ConflictName(conflict.kind)},
                      {"group", conflict.group},
                      {"details", conflict.details}};
    if (conflict.kind == ConflictKind::kAnswerOverlap) {
      OrderedJson split = OrderedJson::array();
      SpansJson(conflict.suggested_split, sentence, &split);
      entry["suggested_split"] = std::move(split);
    }
    conflicts.push_back(std::move(entry));
  }
  out["conflicts"] = std::move(conflicts);
  return out;
}

std::string proposal_text(const ConsolidationProposal &proposal,
                          const Sentence &sentence) {
  std::ostringstream out;
  out << "== " << proposal.key.ToString() << ": ";
  for (const std::string &token : sentence.tokens) out << token << ' ';
  out << "\n";
  for (size_t g = 0; g < proposal.groups.size(); ++g) {
    const ProposalGroup &group = proposal.groups[g];
    out << "  [" << g << "]";
    for (ConflictKind kind : group.flags) out << ' ' << ConflictName(kind);
    out << "\n";
    for (const SourceQa &member : group.members) {
      OrderedJson ignored = OrderedJson::array();
      out << "    A" << member.source + 1 << ": "
          << render_question(member.qa.question) << "  "
          << SpansJson(member.qa.answers, sentence, &ignored) << "\n";
    }
  }
  for (const Conflict &conflict : proposal.conflicts) {
    if (conflict.kind != ConflictKind::kAnswerOverlap) continue;
    OrderedJson ignored = OrderedJson::array();
    out << "  split suggestion for [" << conflict.group
        << "]: " << SpansJson(conflict.suggested_split, sentence, &ignored) << "\n";
  }
  return out.str();
}

OrderedJson consolidation_report_json(const ConsolidationReport &report) {
  OrderedJson findings = OrderedJson::array();
  for (const ConsolidationFinding &finding : report.findings) {
    findings.push_back({{"code", finding.code},
                        {"qa", finding.qa_index},
                        {"violation", finding.is_violation},
                        {"message", finding.message}});
  }
  return OrderedJson{{"id", report.key.ToString()},
                     {"violations", report.violations()},
                     {"novel_roles", report.novel_roles()},
                     {"findings", std::move(findings)}};
}

OrderedJson propbank_json(const PropBankAgreement &agreement) {
  OrderedJson rows = OrderedJson::array();
  for (const PropBankPredicate &row : agreement.per_predicate) {
    rows.push_back({{"id", row.key.ToString()},
                    {"qa_spans", row.qa_spans},
                    {"qa_matched", row.qa_matched},
                    {"pb_args", row.pb_args},
                    {"pb_matched", row.pb_matched}});
  }
  return OrderedJson{{"class", ClassFilterName(agreement.filter)},
                     {"per_predicate", std::move(rows)},
                     {"P", Value(agreement.precision)},
                     {"R", Value(agreement.recall)},
                     {"F1", Value(agreement.f1)}};
}

std::string propbank_table(const std::vector<PropBankAgreement> &rows) {
  static const char *kLabels[] = {"All", "Core", "Adj."};
  std::ostringstream out;
  out << Pad("", 8) << Pad("P", 8) << Pad("R", 8) << "F1\n";
  for (const PropBankAgreement &row : rows) {
    out << Row(kLabels[static_cast<int>(row.filter)], row.precision, row.recall, row.f1);
  }
  return out.str();
}

OrderedJson validation_json(const ValidationReport &report) {
  OrderedJson violations = OrderedJson::array();
  for (const Violation &v : report.violations) {
    violations.push_back({{"code", v.code}, {"location", v.location}, {"message", v.message}});
  }
  return OrderedJson{{"ok", report.ok()}, {"violations", std::move(violations)}};
}

std::string validation_text(const ValidationReport &report) {
  if (report.ok()) return "OK: no violations\n";
  std::ostringstream out;
  for (const Violation &v : report.violations) {
    out << v.code << " " << v.location << ": " << v.message << "\n";
  }
  out << report.violations.size() << " violation(s)\n";
  return out.str();
}

}  // namespace qasrl
