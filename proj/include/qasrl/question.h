#ifndef QASRL_QUESTION_H_
#define QASRL_QUESTION_H_

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qasrl/types.h"

namespace qasrl {

// Closed word lists used by the question template. All entries are lower
// case; matching is case-insensitive.
struct Vocabulary {
  std::set<std::string> wh;            // may contain two-word entries
  std::set<std::string> placeholders;  // SUBJ / OBJ fillers
  std::set<std::string> auxiliaries;   // AUX slot, including negated forms
  std::set<std::string> modals;        // factuality-changing auxiliaries
  std::set<std::string> prepositions;  // PREP slot (single words)
  std::set<std::string> misc_words;    // words allowed in the MISC slot

  static const Vocabulary &Default();

  // Returns a copy of `base` whose modal list is replaced by the entries of
  // a one-word-per-line file. Blank lines and '#' comments are skipped.
  static Vocabulary WithModalLexicon(const Vocabulary &base,
                                     const std::string &path);
};

class UnparseableQuestion : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Assigns the tokens of `text` to the seven slots. The verb slot must hold
// one of the forms in `forms`, optionally preceded by be/been/being, have,
// or have been. When several assignments fit, the one with the longest verb
// slot wins. Throws UnparseableQuestion when nothing fits.
QuestionSlots parse_question(std::string_view text, const VerbForms &forms,
                             const Vocabulary &vocab = Vocabulary::Default());

// Space-joins the non-empty slots in template order and appends "?".
std::string render_question(const QuestionSlots &slots);

// Structural checks on a slot tuple: WH and verb present, no slot carrying
// leading/trailing whitespace.
bool slots_well_formed(const QuestionSlots &slots);

enum class Voice { kActive, kPassive };

// The role-equivalence key: two questions denote the same role under
// STRICT-MATCH iff their signatures are equal.
struct StrictSignature {
  std::string wh;    // lower-cased WH phrase
  std::string subj;  // canonical placeholder or "EMPTY"
  std::string obj;   // canonical placeholder or "EMPTY"
  bool negated = false;
  Voice voice = Voice::kActive;
  bool modal = false;

  std::string ToString() const;
  auto operator<=>(const StrictSignature &) const = default;
};

// Coarser key used to spot paraphrased questions: WH, SUBJ, OBJ and voice.
struct RelaxedKey {
  std::string wh;
  std::string subj;
  std::string obj;
  Voice voice = Voice::kActive;

  std::string ToString() const;
  auto operator<=>(const RelaxedKey &) const = default;
};

StrictSignature signature(const QuestionSlots &slots, const VerbForms &forms,
                          const Vocabulary &vocab = Vocabulary::Default());

RelaxedKey relaxed_key(const QuestionSlots &slots, const VerbForms &forms,
                       const Vocabulary &vocab = Vocabulary::Default());

bool strict_match(const QuestionSlots &a, const QuestionSlots &b,
                  const VerbForms &forms,
                  const Vocabulary &vocab = Vocabulary::Default());

// Variant for questions attached to different annotations of the same
// predicate, each with its own inflection record.
bool strict_match(const QuestionSlots &a, const VerbForms &a_forms,
                  const QuestionSlots &b, const VerbForms &b_forms,
                  const Vocabulary &vocab = Vocabulary::Default());

// Guesses inflections from a single surface form using -ed/-en/-ing/-s
// suffix rules. Results are unreliable for irregular verbs.
VerbForms heuristic_verb_forms(std::string_view word);

std::string to_lower(std::string_view text);

}  // namespace qasrl

#endif  // QASRL_QUESTION_H_
