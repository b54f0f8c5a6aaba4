#ifndef QASRL_CONVERT_H_
#define QASRL_CONVERT_H_

#include <istream>
#include <string>
#include <vector>

#include "qasrl/dataset.h"

namespace qasrl {

// Parses RFC 4180 CSV: quoted fields may contain commas, doubled quotes and
// newlines. Returns rows of fields, header included.
std::vector<std::vector<std::string>> read_csv(std::istream &in);

// Imports a CSV export with one row per question. Columns are located by
// header name:
//   annotations: qasrl_id, verb_idx, question, answer_range
//                (optional: worker_id, verb_form)
//   sentences:   qasrl_id, tokens (space separated)
// answer_range holds half-open "start:end" ranges joined by '~'. Questions
// are parsed with forms from `options.lexicon`, or the suffix heuristic on
// the sentence token. Rows whose question does not parse are reported as
// warnings and skipped.
LoadResult import_csv(std::istream &annotations, std::istream &sentences,
                      const std::string &name, DatasetFormat format,
                      const LoadOptions &options = {});

}  // namespace qasrl

#endif  // QASRL_CONVERT_H_
