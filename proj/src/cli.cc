#include "qasrl/cli.h"

#include <fstream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "qasrl/consolidation.h"
#include "qasrl/convert.h"
#include "qasrl/dataset.h"
#include "qasrl/metrics.h"
#include "qasrl/propbank.h"
#include "qasrl/report.h"

namespace qasrl {

namespace {

// Options shared by every subcommand that reads annotation files.
struct InputOptions {
  std::string lexicon_path;
  std::string modal_lexicon_path;
  std::string report = "table";

  std::optional<InflectionLexicon> lexicon;
  std::optional<Vocabulary> vocab;

  void Register(CLI::App *command) {
    command->add_option("--lexicon", lexicon_path,
                        "Inflection lexicon: stem present past past-participle "
                        "present-participle per line")
        ->check(CLI::ExistingFile);
    command->add_option("--modal-lexicon", modal_lexicon_path,
                        "Modal verbs, one per line (replaces the default list)")
        ->check(CLI::ExistingFile);
    command->add_option("--report", report, "Output format")
        ->check(CLI::IsMember({"table", "machine"}));
  }

  void Prepare() {
    if (!lexicon_path.empty()) lexicon = InflectionLexicon::Load(lexicon_path);
    if (!modal_lexicon_path.empty()) {
      vocab = Vocabulary::WithModalLexicon(Vocabulary::Default(), modal_lexicon_path);
    }
  }

  LoadOptions Load() const {
    return {lexicon ? &*lexicon : nullptr, vocab ? &*vocab : nullptr};
  }
  const Vocabulary &Vocab() const { return vocab ? *vocab : Vocabulary::Default(); }
  bool machine() const { return report == "machine"; }
};

struct EvalFlags {
  std::string mode = "ua";
  bool redundant = false;
  bool macro = false;
  double iou = IouThreshold::kDefault;
  bool label_free_ignore = false;

  void Register(CLI::App *command, bool with_redundant) {
    command->add_option("--mode", mode, "Unlabeled (ua), labeled (la) or both")
        ->check(CLI::IsMember({"ua", "la", "both"}));
    if (with_redundant) {
      command->add_flag("--redundant", redundant,
                        "Score redundant predictions (ignore redundant matches, "
                        "collapse overlapping false positives)");
      command->add_flag("--label-free-ignore", label_free_ignore,
                        "In labeled redundant scoring, ignore unmatched predictions "
                        "that overlap gold regardless of question");
    }
    command->add_flag("--macro", macro, "Macro-average over predicates");
    command->add_option("--iou-threshold", iou, "Span match threshold")
        ->check(CLI::Range(0.0, 1.0));
  }

  std::vector<EvalConfig> Configs(const Vocabulary &vocab) const {
    std::vector<EvalConfig> configs;
    for (Mode m : {Mode::kUnlabeled, Mode::kLabeled}) {
      if (mode == "ua" && m != Mode::kUnlabeled) continue;
      if (mode == "la" && m != Mode::kLabeled) continue;
      EvalConfig config;
      config.mode = m;
      config.redundant = redundant;
      config.aggregation = macro ? Aggregation::kMacro : Aggregation::kMicro;
      config.threshold = IouThreshold(iou);
      config.ignore_requires_label = !label_free_ignore;
      config.vocab = &vocab;
      configs.push_back(config);
    }
    return configs;
  }
};

LoadResult LoadWithWarnings(const std::string &path, DatasetFormat format,
                            const InputOptions &input, std::ostream &err) {
  LoadResult result = load_dataset(path, format, input.Load());
  for (const std::string &warning : result.warnings) err << "warning: " << warning << "\n";
  return result;
}

void Merge(AnnotationSet *into, AnnotationSet &&from) {
  for (auto &[id, sentence] : from.sentences) {
    auto [it, inserted] = into->sentences.emplace(id, sentence);
    if (!inserted && it->second.tokens != sentence.tokens) {
      throw FormatError("sentence '" + id + "' differs between input files");
    }
  }
  for (VerbAnnotation &annotation : from.annotations) {
    into->annotations.push_back(std::move(annotation));
  }
  into->redundant = into->redundant || from.redundant;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Validate, consolidate and score QA-SRL annotations", "qasrl"};
  app.require_subcommand(1);

  // validate
  InputOptions validate_input;
  std::string validate_path, validate_format = "gold";
  CLI::App *validate_cmd = app.add_subcommand("validate", "Check structural invariants");
  validate_cmd->add_option("--input", validate_path)->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("--format", validate_format)
      ->check(CLI::IsMember({"gold", "dense", "parser"}));
  validate_input.Register(validate_cmd);

  // eval
  InputOptions eval_input;
  EvalFlags eval_flags;
  std::string gold_path, pred_path, pred_format;
  int jobs = 1;
  CLI::App *eval_cmd = app.add_subcommand("eval", "Score predictions against gold");
  eval_cmd->add_option("--gold", gold_path)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--pred", pred_path)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--pred-format", pred_format,
                       "Format of --pred (default: parser with --redundant, else gold)")
      ->check(CLI::IsMember({"gold", "dense", "parser"}));
  eval_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  eval_flags.Register(eval_cmd, true);
  eval_input.Register(eval_cmd);

  // iaa
  InputOptions iaa_input;
  EvalFlags iaa_flags;
  std::string iaa_a, iaa_b, iaa_format = "dense";
  CLI::App *iaa_cmd = app.add_subcommand("iaa", "Agreement between two annotation sets");
  iaa_cmd->add_option("--a", iaa_a)->required()->check(CLI::ExistingFile);
  iaa_cmd->add_option("--b", iaa_b)->required()->check(CLI::ExistingFile);
  iaa_cmd->add_option("--format", iaa_format)
      ->check(CLI::IsMember({"gold", "dense", "parser"}));
  iaa_flags.Register(iaa_cmd, false);
  iaa_input.Register(iaa_cmd);

  // stats
  InputOptions stats_input;
  std::string stats_path, stats_format = "gold";
  CLI::App *stats_cmd = app.add_subcommand("stats", "Dataset statistics");
  stats_cmd->add_option("--input", stats_path)->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--format", stats_format)
      ->check(CLI::IsMember({"gold", "dense", "parser"}));
  stats_input.Register(stats_cmd);

  // cost
  InputOptions cost_input;
  std::vector<std::string> cost_paths;
  std::string cost_format = "dense";
  CostSchedule schedule;
  CLI::App *cost_cmd = app.add_subcommand("cost", "Annotation cost per predicate");
  cost_cmd->add_option("--input", cost_paths,
                       "Files with worker and consolidated annotations")
      ->required()
      ->check(CLI::ExistingFile);
  cost_cmd->add_option("--format", cost_format)
      ->check(CLI::IsMember({"gold", "dense", "parser"}));
  cost_cmd->add_option("--generation-base", schedule.generation_base, "Cents per predicate");
  cost_cmd->add_option("--generation-bonus", schedule.generation_bonus,
                       "Cents per question beyond the first two (placeholder default)");
  cost_cmd->add_option("--consolidation-base", schedule.consolidation_base, "Cents per verb");
  cost_cmd->add_option("--consolidation-per-question", schedule.consolidation_per_question,
                       "Cents per consolidated question");
  cost_input.Register(cost_cmd);

  // consolidate
  InputOptions cons_input;
  std::string cons_path, cons_gold, cons_output;
  CLI::App *cons_cmd = app.add_subcommand(
      "consolidate", "Propose merges of two workers' annotations; optionally "
                     "check a consolidated file against them");
  cons_cmd->add_option("--input", cons_path, "Worker annotations (dense format)")
      ->required()
      ->check(CLI::ExistingFile);
  cons_cmd->add_option("--consolidated", cons_gold, "Consolidated annotations to check")
      ->check(CLI::ExistingFile);
  cons_cmd->add_option("--output", cons_output, "Write proposals (JSON lines) here");
  cons_input.Register(cons_cmd);

  // propbank
  InputOptions pb_input;
  std::string pb_qasrl, pb_path, pb_format = "gold", pb_class = "table";
  CLI::App *pb_cmd = app.add_subcommand("propbank", "Agreement with PropBank arguments");
  pb_cmd->add_option("--qasrl", pb_qasrl)->required()->check(CLI::ExistingFile);
  pb_cmd->add_option("--propbank", pb_path)->required()->check(CLI::ExistingFile);
  pb_cmd->add_option("--format", pb_format)
      ->check(CLI::IsMember({"gold", "dense", "parser"}));
  pb_cmd->add_option("--class", pb_class, "all, core, adjunct, or table for all three")
      ->check(CLI::IsMember({"all", "core", "adjunct", "table"}));
  pb_cmd->add_option("--iou-threshold", eval_flags.iou)->check(CLI::Range(0.0, 1.0));
  pb_input.Register(pb_cmd);

  // convert
  InputOptions conv_input;
  std::string conv_annotations, conv_sentences, conv_output, conv_format = "gold";
  CLI::App *conv_cmd = app.add_subcommand("convert", "Import CSV exports into JSON lines");
  conv_cmd->add_option("--annotations", conv_annotations)->required()->check(CLI::ExistingFile);
  conv_cmd->add_option("--sentences", conv_sentences)->required()->check(CLI::ExistingFile);
  conv_cmd->add_option("--output", conv_output)->required();
  conv_cmd->add_option("--format", conv_format)
      ->check(CLI::IsMember({"gold", "dense", "parser"}));
  conv_input.Register(conv_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp &e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) {
      validate_input.Prepare();
      LoadResult loaded = LoadWithWarnings(
          validate_path, ParseDatasetFormat(validate_format), validate_input, err);
      ValidationReport report = validate(loaded.set, validate_input.Vocab());
      if (validate_input.machine()) {
        out << validation_json(report).dump() << "\n";
      } else {
        out << validation_text(report);
      }
      return report.ok() ? kExitOk : kExitViolations;
    }

    if (eval_cmd->parsed()) {
      eval_input.Prepare();
      LoadResult gold = LoadWithWarnings(gold_path, DatasetFormat::kGold, eval_input, err);
      ValidationReport gold_report = validate(gold.set, eval_input.Vocab());
      if (!gold_report.ok()) {
        err << "gold file does not validate:\n" << validation_text(gold_report);
        return kExitViolations;
      }
      if (pred_format.empty()) pred_format = eval_flags.redundant ? "parser" : "gold";
      LoadResult pred =
          LoadWithWarnings(pred_path, ParseDatasetFormat(pred_format), eval_input, err);
      std::vector<EvalReport> reports;
      for (const EvalConfig &config : eval_flags.Configs(eval_input.Vocab())) {
        reports.push_back(evaluate(pred.set, gold.set, config, jobs));
      }
      if (eval_input.machine()) {
        for (const EvalReport &report : reports) {
          out << eval_report_json(report).dump() << "\n";
        }
      } else {
        out << eval_table(reports);
      }
      return kExitOk;
    }

    if (iaa_cmd->parsed()) {
      iaa_input.Prepare();
      const DatasetFormat format = ParseDatasetFormat(iaa_format);
      LoadResult a = LoadWithWarnings(iaa_a, format, iaa_input, err);
      LoadResult b = LoadWithWarnings(iaa_b, format, iaa_input, err);
      std::vector<std::pair<EvalConfig, AgreementReport>> rows;
      for (const EvalConfig &config : iaa_flags.Configs(iaa_input.Vocab())) {
        rows.emplace_back(config, iaa_pairwise(a.set, b.set, config));
      }
      if (iaa_input.machine()) {
        for (const auto &[config, report] : rows) {
          out << agreement_json(report, config).dump() << "\n";
        }
      } else {
        out << agreement_table(rows);
      }
      return kExitOk;
    }

    if (stats_cmd->parsed()) {
      stats_input.Prepare();
      LoadResult loaded =
          LoadWithWarnings(stats_path, ParseDatasetFormat(stats_format), stats_input, err);
      DatasetStats stats = dataset_stats(loaded.set);
      out << (stats_input.machine() ? stats_json(stats).dump() + "\n" : stats_table(stats));
      return kExitOk;
    }

    if (cost_cmd->parsed()) {
      cost_input.Prepare();
      AnnotationSet merged;
      for (const std::string &path : cost_paths) {
        Merge(&merged,
              LoadWithWarnings(path, ParseDatasetFormat(cost_format), cost_input, err).set);
      }
      CostReport report = cost(merged, schedule);
      out << (cost_input.machine() ? cost_json(report, schedule).dump() + "\n"
                                   : cost_table(report));
      return kExitOk;
    }

    if (cons_cmd->parsed()) {
      cons_input.Prepare();
      LoadResult workers = LoadWithWarnings(cons_path, DatasetFormat::kDense, cons_input, err);
      std::map<PredicateKey, std::vector<const VerbAnnotation *>> by_key;
      for (const auto &[key, group] : workers.set.ByPredicate()) {
        for (const VerbAnnotation *annotation : group) {
          if (annotation->source.kind == Source::Kind::kWorker) by_key[key].push_back(annotation);
        }
      }
      std::unique_ptr<std::ofstream> file;
      std::ostream *sink = &out;
      if (!cons_output.empty()) {
        file = std::make_unique<std::ofstream>(cons_output);
        if (!*file) throw FormatError(cons_output + ": cannot open for writing");
        sink = file.get();
      }
      for (const auto &[key, group] : by_key) {
        if (group.size() != 2) {
          err << "warning: " << key.ToString() << " has " << group.size()
              << " worker annotations; proposals need exactly 2\n";
          continue;
        }
        const Sentence &sentence = workers.set.sentences.at(key.sentence_id);
        ConsolidationProposal proposal =
            propose(*group[0], *group[1], sentence, cons_input.Vocab());
        if (cons_input.machine() || file) {
          *sink << proposal_json(proposal, sentence).dump() << "\n";
        }
        if (!cons_input.machine()) out << proposal_text(proposal, sentence);
      }

      if (cons_gold.empty()) return kExitOk;
      LoadResult consolidated =
          LoadWithWarnings(cons_gold, DatasetFormat::kGold, cons_input, err);
      int violations = 0;
      for (const VerbAnnotation &annotation : consolidated.set.annotations) {
        auto it = by_key.find(annotation.key());
        if (it == by_key.end() || it->second.size() != 2) {
          err << "warning: no worker pair for consolidated " << annotation.key().ToString()
              << "\n";
          continue;
        }
        ConsolidationReport report = validate_consolidation(
            annotation, *it->second[0], *it->second[1], cons_input.Vocab());
        violations += report.violations();
        if (cons_input.machine()) {
          out << consolidation_report_json(report).dump() << "\n";
        } else {
          for (const ConsolidationFinding &finding : report.findings) {
            out << (finding.is_violation ? "VIOLATION " : "note ") << finding.code << " "
                << report.key.ToString() << "/" << finding.qa_index << ": "
                << finding.message << "\n";
          }
        }
      }
      return violations == 0 ? kExitOk : kExitViolations;
    }

    if (pb_cmd->parsed()) {
      pb_input.Prepare();
      LoadResult qa = LoadWithWarnings(pb_qasrl, ParseDatasetFormat(pb_format), pb_input, err);
      std::vector<PropBankFrame> frames = load_propbank(pb_path);
      std::vector<ClassFilter> filters;
      if (pb_class == "all" || pb_class == "table") filters.push_back(ClassFilter::kAll);
      if (pb_class == "core" || pb_class == "table") filters.push_back(ClassFilter::kCore);
      if (pb_class == "adjunct" || pb_class == "table") filters.push_back(ClassFilter::kAdjunct);
      std::vector<PropBankAgreement> rows;
      for (ClassFilter filter : filters) {
        rows.push_back(compare_propbank(qa.set, frames, filter, IouThreshold(eval_flags.iou)));
      }
      if (pb_input.machine()) {
        for (const PropBankAgreement &row : rows) out << propbank_json(row).dump() << "\n";
      } else {
        out << propbank_table(rows);
      }
      return kExitOk;
    }

    if (conv_cmd->parsed()) {
      conv_input.Prepare();
      std::ifstream annotations(conv_annotations), sentences(conv_sentences);
      LoadResult loaded = import_csv(annotations, sentences, conv_annotations,
                                     ParseDatasetFormat(conv_format), conv_input.Load());
      for (const std::string &warning : loaded.warnings) err << "warning: " << warning << "\n";
      ValidationReport report = validate(loaded.set, conv_input.Vocab());
      if (!report.ok()) {
        err << validation_text(report);
        return kExitViolations;
      }
      write_dataset(loaded.set, conv_output);
      out << "wrote " << loaded.set.annotations.size() << " annotations to " << conv_output
          << "\n";
      return kExitOk;
    }
  } catch (const FormatError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qasrl
