#ifndef QASRL_TYPES_H_
#define QASRL_TYPES_H_

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace qasrl {

// Raised for unreadable or schema-violating input. The message carries a
// "file:line" location when one is known.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when two annotations passed to a per-predicate operation do not
// refer to the same (sentence, verb).
class PredicateMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Sentence {
  std::string id;
  std::vector<std::string> tokens;

  bool operator==(const Sentence &) const = default;
};

// Half-open token range [start, end).
struct Span {
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
  bool Overlaps(const Span &other) const {
    return start < other.end && other.start < end;
  }
  bool Contains(const Span &other) const {
    return start <= other.start && other.end <= end;
  }

  auto operator<=>(const Span &) const = default;
};

// Inflections of the target verb. Voice detection compares against
// past_participle; question parsing accepts any of the five forms.
struct VerbForms {
  std::string stem;
  std::string present;
  std::string past;
  std::string past_participle;
  std::string present_participle;

  bool operator==(const VerbForms &) const = default;
};

// The seven template slots. Optional slots are empty strings.
struct QuestionSlots {
  std::string wh;
  std::string aux;
  std::string subj;
  std::string verb;
  std::string obj;
  std::string prep;
  std::string misc;

  bool operator==(const QuestionSlots &) const = default;
};

struct QAPair {
  QuestionSlots question;
  std::vector<Span> answers;

  bool operator==(const QAPair &) const = default;
};

// Where an annotation came from. Worker annotations carry the worker id.
struct Source {
  enum class Kind { kWorker, kConsolidated, kParser, kExternal };

  Kind kind = Kind::kExternal;
  std::string worker;

  static Source Worker(std::string id) { return {Kind::kWorker, std::move(id)}; }
  static Source Consolidated() { return {Kind::kConsolidated, {}}; }
  static Source Parser() { return {Kind::kParser, {}}; }
  static Source External() { return {Kind::kExternal, {}}; }

  // "consolidated", "parser", "external", or the bare worker id.
  std::string ToString() const;
  static Source FromString(const std::string &text);

  bool operator==(const Source &) const = default;
};

// (sentence id, verb index); the identity of a predicate.
struct PredicateKey {
  std::string sentence_id;
  int verb_index = 0;

  std::string ToString() const {
    return sentence_id + ":" + std::to_string(verb_index);
  }
  auto operator<=>(const PredicateKey &) const = default;
};

struct VerbAnnotation {
  std::string sentence_id;
  int verb_index = 0;
  VerbForms verb_forms;
  // Set when verb_forms came from the suffix heuristic rather than the file
  // or an inflection lexicon.
  bool forms_low_confidence = false;
  Source source;
  std::vector<QAPair> qa_pairs;

  PredicateKey key() const { return {sentence_id, verb_index}; }
  bool operator==(const VerbAnnotation &) const = default;
};

struct AnnotationSet {
  std::map<std::string, Sentence> sentences;
  std::vector<VerbAnnotation> annotations;
  // True for raw multi-worker data or parser output; false for consolidated
  // gold, which holds at most one annotation per predicate.
  bool redundant = false;

  const Sentence *FindSentence(const std::string &id) const {
    auto it = sentences.find(id);
    return it == sentences.end() ? nullptr : &it->second;
  }

  // Annotations grouped by predicate, in key order. Annotation order within a
  // predicate follows file order.
  std::map<PredicateKey, std::vector<const VerbAnnotation *>> ByPredicate()
      const;

  bool operator==(const AnnotationSet &) const = default;
};

// Concatenates the QA pairs of several annotations of the same predicate.
// Verb forms and provenance are taken from the first one.
VerbAnnotation MergeAnnotations(const std::vector<const VerbAnnotation *> &parts);

// Surface text of a span.
std::string SpanText(const Sentence &sentence, const Span &span);

}  // namespace qasrl

#endif  // QASRL_TYPES_H_
