#ifndef QASRL_CONSOLIDATION_H_
#define QASRL_CONSOLIDATION_H_

#include <string>
#include <vector>

#include "qasrl/question.h"
#include "qasrl/types.h"

namespace qasrl {

enum class ConflictKind { kAnswerOverlap, kQuestionVariant, kSingleton };
std::string ConflictName(ConflictKind kind);

struct SourceQa {
  int source = 0;  // 0 for the first annotation, 1 for the second
  int index = 0;   // position in that annotation's qa_pairs
  QAPair qa;
};

struct ProposalGroup {
  std::string signature_key;  // STRICT-MATCH signature of the first member
  std::string relaxed_key;
  std::vector<SourceQa> members;
  std::vector<Span> answers;  // union of member answers, first-seen order
  std::vector<ConflictKind> flags;

  bool Has(ConflictKind kind) const;
};

struct Conflict {
  ConflictKind kind;
  int group = 0;
  std::string details;
  // ANSWER_OVERLAP only: the two overlapping answers and a suggested
  // non-overlapping decomposition of them.
  std::vector<Span> overlapping;
  std::vector<Span> suggested_split;
};

// Machine-side half of consolidation. The proposal merges what two workers
// agree on and flags everything a human consolidator must decide; it never
// picks between question variants or rewrites answers by itself.
struct ConsolidationProposal {
  PredicateKey key;
  std::vector<ProposalGroup> groups;
  std::vector<Conflict> conflicts;

  // One QA per group: the first member's question with the union of
  // answers. Equals the input when both sources are identical.
  std::vector<QAPair> MergedQas() const;
};

// Groups the QAs of two worker annotations by STRICT-MATCH signature.
// Signature groups that only one worker produced are joined with groups of
// the other worker sharing WH/SUBJ/OBJ/voice and flagged QUESTION_VARIANT.
// Overlapping, non-identical answers given by different workers within a
// group are flagged ANSWER_OVERLAP with a split suggestion; groups backed by
// a single worker are flagged SINGLETON and kept.
ConsolidationProposal propose(const VerbAnnotation &first,
                              const VerbAnnotation &second,
                              const Sentence &sentence,
                              const Vocabulary &vocab = Vocabulary::Default());

// Splits two overlapping answers into non-overlapping pieces: the shorter
// answer stays whole, the remainder of the longer one is cut at punctuation
// and bracket tokens, which are dropped.
std::vector<Span> suggest_split(const Span &a, const Span &b,
                                const Sentence &sentence);

struct ConsolidationFinding {
  std::string code;  // NOVEL_ROLE, DUPLICATE_ROLE, OVERLAPPING_ANSWERS
  int qa_index = 0;
  std::string message;
  bool is_violation = false;  // NOVEL_ROLE is informational
};

struct ConsolidationReport {
  PredicateKey key;
  std::vector<ConsolidationFinding> findings;

  int violations() const;
  int novel_roles() const;
};

ConsolidationReport validate_consolidation(
    const VerbAnnotation &consolidated, const VerbAnnotation &first,
    const VerbAnnotation &second,
    const Vocabulary &vocab = Vocabulary::Default());

}  // namespace qasrl

#endif  // QASRL_CONSOLIDATION_H_
