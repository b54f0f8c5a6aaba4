#include "qasrl/propbank.h"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qasrl/question.h"

namespace qasrl {

namespace {

std::string BaseLabel(const std::string &label) {
  if (label.size() > 2 && (label.rfind("C-", 0) == 0 || label.rfind("R-", 0) == 0)) {
    return label.substr(2);
  }
  return label;
}

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> columns;
  std::string column;
  std::istringstream in(line);
  while (std::getline(in, column, '\t')) {
    while (!column.empty() && (column.back() == '\r' || column.back() == ' ')) {
      column.pop_back();
    }
    columns.push_back(column);
  }
  return columns;
}

int ParseIndex(const std::string &text, const std::string &where) {
  size_t consumed = 0;
  int value = 0;
  try {
    value = std::stoi(text, &consumed);
  } catch (const std::exception &) {
    consumed = 0;
  }
  if (consumed == 0 || consumed != text.size()) {
    throw FormatError(where + ": expected an integer, got '" + text + "'");
  }
  return value;
}

}  // namespace

bool is_propbank_label(const std::string &label) {
  static const std::set<std::string> kLabels = {
      "A0",     "A1",     "A2",     "A3",     "A4",     "A5",     "AA",
      "AM-ADV", "AM-CAU", "AM-DIR", "AM-DIS", "AM-EXT", "AM-LOC", "AM-MNR",
      "AM-MOD", "AM-NEG", "AM-PNC", "AM-PRD", "AM-PRP", "AM-REC", "AM-TMP",
      "AM-ADJ", "AM-GOL", "AM-COM", "AM-DSP", "AM-LVB", "AM-PRR", "AM-CXN",
      "AM"};
  return kLabels.count(BaseLabel(label)) > 0;
}

RoleClass classify_propbank(const std::string &label) {
  static const std::set<std::string> kCore = {"A0", "A1", "A2", "A3", "A4", "A5"};
  return kCore.count(BaseLabel(label)) ? RoleClass::kCore : RoleClass::kAdjunct;
}

RoleClass classify_question(const QuestionSlots &question) {
  const std::string wh = to_lower(question.wh);
  return wh == "who" || wh == "what" ? RoleClass::kCore : RoleClass::kAdjunct;
}

std::string ClassFilterName(ClassFilter filter) {
  switch (filter) {
    case ClassFilter::kAll:
      return "all";
    case ClassFilter::kCore:
      return "core";
    case ClassFilter::kAdjunct:
      return "adjunct";
  }
  return "all";
}

std::vector<PropBankFrame> load_propbank(std::istream &in, const std::string &name) {
  std::vector<PropBankFrame> frames;
  std::map<PredicateKey, size_t> index;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = name + ":" + std::to_string(line_no);
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const std::vector<std::string> columns = SplitTabs(line);
    if (columns.size() != 2 && columns.size() != 5) {
      throw FormatError(where + ": expected 2 or 5 tab-separated columns, got " +
                        std::to_string(columns.size()));
    }
    if (columns[0].empty()) throw FormatError(where + ": empty sentence id");
    PredicateKey key{columns[0], ParseIndex(columns[1], where)};
    if (key.verb_index < 0) throw FormatError(where + ": negative predicate index");
    auto [it, inserted] = index.emplace(key, frames.size());
    if (inserted) frames.push_back({key.sentence_id, key.verb_index, {}});
    if (columns.size() == 2) continue;

    const std::string &label = columns[2];
    if (!is_propbank_label(label)) {
      throw FormatError(where + ": unknown PropBank label '" + label + "'");
    }
    Span span{ParseIndex(columns[3], where), ParseIndex(columns[4], where)};
    if (span.start < 0 || span.start >= span.end) {
      throw FormatError(where + ": invalid span [" + columns[3] + "," + columns[4] + ")");
    }
    frames[it->second].args.push_back({label, span});
  }
  return frames;
}

std::vector<PropBankFrame> load_propbank(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open file");
  return load_propbank(in, path);
}

PropBankAgreement compare_propbank(const AnnotationSet &qasrl,
                                   const std::vector<PropBankFrame> &frames,
                                   ClassFilter filter,
                                   const IouThreshold &threshold) {
  auto keep = [filter](RoleClass role) {
    return filter == ClassFilter::kAll ||
           (filter == ClassFilter::kCore) == (role == RoleClass::kCore);
  };

  std::map<PredicateKey, std::vector<const PropBankArg *>> pb_by_key;
  for (const PropBankFrame &frame : frames) {
    auto &args = pb_by_key[frame.key()];
    for (const PropBankArg &arg : frame.args) args.push_back(&arg);
  }

  PropBankAgreement result;
  result.filter = filter;
  double p_sum = 0.0, r_sum = 0.0;
  for (const auto &[key, group] : qasrl.ByPredicate()) {
    auto it = pb_by_key.find(key);
    if (it == pb_by_key.end()) continue;
    const Sentence *sentence = qasrl.FindSentence(key.sentence_id);
    const int length = sentence ? static_cast<int>(sentence->tokens.size()) : 0;

    std::vector<Span> qa_spans;
    std::vector<RoleClass> qa_class;
    for (const VerbAnnotation *annotation : group) {
      for (const QAPair &qa : annotation->qa_pairs) {
        for (const Span &span : qa.answers) {
          qa_spans.push_back(span);
          qa_class.push_back(classify_question(qa.question));
        }
      }
    }
    std::vector<Span> pb_spans;
    std::vector<RoleClass> pb_class;
    for (const PropBankArg *arg : it->second) {
      if (arg->span.end > length) {
        throw FormatError("PropBank argument " + arg->label + " of " + key.ToString() +
                          " ends past the sentence (" + std::to_string(length) +
                          " tokens)");
      }
      pb_spans.push_back(arg->span);
      pb_class.push_back(classify_propbank(arg->label));
    }

    const MatchResult match = align(qa_spans, pb_spans, threshold);
    PropBankPredicate row;
    row.key = key;
    for (RoleClass role : qa_class) row.qa_spans += keep(role);
    for (RoleClass role : pb_class) row.pb_args += keep(role);
    for (const MatchResult::Pair &pair : match.pairs) {
      row.qa_matched += keep(qa_class[pair.pred]);
      row.pb_matched += keep(pb_class[pair.gold]);
    }
    if (row.qa_spans > 0) {
      p_sum += static_cast<double>(row.qa_matched) / row.qa_spans;
      ++result.precision_predicates;
    }
    if (row.pb_args > 0) {
      r_sum += static_cast<double>(row.pb_matched) / row.pb_args;
      ++result.recall_predicates;
    }
    result.per_predicate.push_back(row);
  }
  if (result.per_predicate.empty()) {
    throw std::invalid_argument("QA-SRL and PropBank inputs share no predicate");
  }
  if (result.precision_predicates > 0) result.precision = p_sum / result.precision_predicates;
  if (result.recall_predicates > 0) result.recall = r_sum / result.recall_predicates;
  result.f1 = (result.precision + result.recall) == 0.0
                  ? 0.0
                  : 2.0 * result.precision * result.recall /
                        (result.precision + result.recall);
  return result;
}

}  // namespace qasrl
