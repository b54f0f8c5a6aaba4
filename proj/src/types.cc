#include "qasrl/types.h"

namespace qasrl {

std::string Source::ToString() const {
  switch (kind) {
    case Kind::kConsolidated:
      return "consolidated";
    case Kind::kParser:
      return "parser";
    case Kind::kExternal:
      return "external";
    case Kind::kWorker:
      return worker;
  }
  return worker;
}

Source Source::FromString(const std::string &text) {
  if (text == "consolidated") return Consolidated();
  if (text == "parser") return Parser();
  if (text == "external" || text.empty()) return External();
  return Worker(text);
}

std::map<PredicateKey, std::vector<const VerbAnnotation *>>
AnnotationSet::ByPredicate() const {
  std::map<PredicateKey, std::vector<const VerbAnnotation *>> grouped;
  for (const VerbAnnotation &annotation : annotations) {
    grouped[annotation.key()].push_back(&annotation);
  }
  return grouped;
}

VerbAnnotation MergeAnnotations(
    const std::vector<const VerbAnnotation *> &parts) {
  if (parts.empty()) throw std::invalid_argument("nothing to merge");
  VerbAnnotation merged = *parts.front();
  for (size_t i = 1; i < parts.size(); ++i) {
    if (parts[i]->key() != merged.key()) {
      throw PredicateMismatch("cannot merge annotations of " +
                              merged.key().ToString() + " and " +
                              parts[i]->key().ToString());
    }
    merged.qa_pairs.insert(merged.qa_pairs.end(), parts[i]->qa_pairs.begin(),
                           parts[i]->qa_pairs.end());
  }
  return merged;
}

std::string SpanText(const Sentence &sentence, const Span &span) {
  std::string text;
  for (int i = span.start; i < span.end && i < static_cast<int>(sentence.tokens.size()); ++i) {
    if (i < 0) continue;
    if (!text.empty()) text += ' ';
    text += sentence.tokens[i];
  }
  return text;
}

}  // namespace qasrl
