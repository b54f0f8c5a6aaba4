#ifndef QASRL_DATASET_H_
#define QASRL_DATASET_H_

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "qasrl/question.h"
#include "qasrl/types.h"

namespace qasrl {

// The three record flavours share one schema. They differ in the default
// provenance of records without a "source" field and in redundancy:
// gold is consolidated (one annotation per predicate), dense and parser
// files may hold several overlapping annotations per predicate.
enum class DatasetFormat { kGold, kDense, kParser };

DatasetFormat ParseDatasetFormat(const std::string &name);
std::string FormatName(DatasetFormat format);

// Inflection records indexed by every form they contain (lower case).
// File format: one verb per line, five whitespace-separated columns
// stem, present, past, past participle, present participle.
class InflectionLexicon {
 public:
  static InflectionLexicon Load(const std::string &path);
  void Add(const VerbForms &forms);
  const VerbForms *Find(const std::string &word) const;
  bool empty() const { return by_form_.empty(); }

 private:
  std::vector<VerbForms> entries_;
  std::map<std::string, size_t> by_form_;
};

struct LoadOptions {
  const InflectionLexicon *lexicon = nullptr;
  const Vocabulary *vocab = nullptr;  // defaults to Vocabulary::Default()
};

struct LoadResult {
  AnnotationSet set;
  // Non-fatal findings ("file:line: message"): unknown fields, question
  // strings that do not parse, heuristic verb forms, unknown WH words.
  std::vector<std::string> warnings;
};

// Reads line-delimited JSON records. Throws FormatError with file:line for
// malformed records, dangling sentence references, out-of-range spans and
// empty answer lists.
LoadResult load_dataset(const std::string &path, DatasetFormat format,
                        const LoadOptions &options = {});
LoadResult load_dataset(std::istream &in, const std::string &name,
                        DatasetFormat format, const LoadOptions &options = {});

struct Violation {
  std::string code;      // e.g. DUPLICATE_ROLE, OVERLAPPING_ANSWERS
  std::string location;  // sentence_id:verb_index[/qa index]
  std::string message;

  bool operator==(const Violation &) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every structural invariant of the domain types. Sets with
// redundant=false are additionally held to the consolidated-gold rules:
// one annotation per predicate, no two questions with the same STRICT-MATCH
// signature, no overlapping answers within a question.
ValidationReport validate(const AnnotationSet &set,
                          const Vocabulary &vocab = Vocabulary::Default());

// Serializes `set` one record per annotation, in annotation order. Throws
// std::invalid_argument listing the violations if `set` does not validate,
// and FormatError on I/O failure.
void write_dataset(const AnnotationSet &set, const std::string &path);
void write_dataset(const AnnotationSet &set, std::ostream &out);

}  // namespace qasrl

#endif  // QASRL_DATASET_H_
