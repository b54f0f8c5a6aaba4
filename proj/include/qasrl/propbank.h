#ifndef QASRL_PROPBANK_H_
#define QASRL_PROPBANK_H_

#include <istream>
#include <string>
#include <vector>

#include "qasrl/align.h"
#include "qasrl/types.h"

namespace qasrl {

enum class RoleClass { kCore, kAdjunct };

struct PropBankArg {
  std::string label;  // A0..A5, AA, AM-*, optionally with C-/R- prefix
  Span span;
};

struct PropBankFrame {
  std::string sentence_id;
  int predicate_index = 0;
  std::vector<PropBankArg> args;

  PredicateKey key() const { return {sentence_id, predicate_index}; }
};

// True for labels of the closed PropBank inventory.
bool is_propbank_label(const std::string &label);

// Core iff the base label (C-/R- prefix removed) is A0..A5.
RoleClass classify_propbank(const std::string &label);

// Core iff the WH phrase is "who" or "what".
RoleClass classify_question(const QuestionSlots &question);

// Tab-separated lines: sentence_id, pred_index, label, start, end. A line
// with only the first two columns declares a predicate without arguments.
// Blank lines and lines starting with '#' are skipped. Frames come out in
// first-appearance order.
std::vector<PropBankFrame> load_propbank(const std::string &path);
std::vector<PropBankFrame> load_propbank(std::istream &in, const std::string &name);

enum class ClassFilter { kAll, kCore, kAdjunct };
std::string ClassFilterName(ClassFilter filter);

struct PropBankPredicate {
  PredicateKey key;
  long qa_spans = 0;       // after the precision-side filter
  long qa_matched = 0;
  long pb_args = 0;        // after the recall-side filter
  long pb_matched = 0;
};

struct PropBankAgreement {
  ClassFilter filter = ClassFilter::kAll;
  std::vector<PropBankPredicate> per_predicate;
  double precision = 0.0;  // mean over predicates with qa_spans > 0
  double recall = 0.0;     // mean over predicates with pb_args > 0
  double f1 = 0.0;
  long precision_predicates = 0;
  long recall_predicates = 0;
};

// PropBank is the reference. For each shared predicate all QA answer spans
// are aligned to all PropBank argument spans with the unlabeled criterion;
// precision counts matched QA spans of the filtered class (by WH word),
// recall counts matched PropBank args of the filtered class (by label).
// Throws std::invalid_argument if no predicate is shared, and FormatError if
// a PropBank span falls outside its sentence.
PropBankAgreement compare_propbank(const AnnotationSet &qasrl,
                                   const std::vector<PropBankFrame> &frames,
                                   ClassFilter filter,
                                   const IouThreshold &threshold = IouThreshold());

}  // namespace qasrl

#endif  // QASRL_PROPBANK_H_
