#include "qasrl/consolidation.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>

namespace qasrl {

namespace {

bool IsPunctuation(const std::string &token) {
  static const std::set<std::string> kBrackets = {"-LRB-", "-RRB-", "-LSB-",
                                                  "-RSB-", "-LCB-", "-RCB-"};
  if (kBrackets.count(token)) return true;
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(), [](char c) {
    return std::ispunct(static_cast<unsigned char>(c)) != 0;
  });
}

// Maximal runs of non-punctuation tokens inside [begin, end).
void AppendRuns(int begin, int end, const Sentence &sentence,
                std::vector<Span> *out) {
  int run_start = -1;
  for (int i = begin; i <= end; ++i) {
    bool word = i < end && i < static_cast<int>(sentence.tokens.size()) &&
                !IsPunctuation(sentence.tokens[i]);
    if (word && run_start < 0) run_start = i;
    if (!word && run_start >= 0) {
      out->push_back({run_start, i});
      run_start = -1;
    }
  }
}

void CheckSame(const VerbAnnotation &a, const VerbAnnotation &b) {
  if (a.key() != b.key()) {
    throw PredicateMismatch("annotations of different predicates: " +
                            a.key().ToString() + " vs " + b.key().ToString());
  }
}

int Find(std::vector<int> &parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

std::string ConflictName(ConflictKind kind) {
  switch (kind) {
    case ConflictKind::kAnswerOverlap:
      return "ANSWER_OVERLAP";
    case ConflictKind::kQuestionVariant:
      return "QUESTION_VARIANT";
    case ConflictKind::kSingleton:
      return "SINGLETON";
  }
  return "UNKNOWN";
}

bool ProposalGroup::Has(ConflictKind kind) const {
  return std::find(flags.begin(), flags.end(), kind) != flags.end();
}

std::vector<QAPair> ConsolidationProposal::MergedQas() const {
  std::vector<QAPair> merged;
  for (const ProposalGroup &group : groups) {
    merged.push_back({group.members.front().qa.question, group.answers});
  }
  return merged;
}

std::vector<Span> suggest_split(const Span &a, const Span &b,
                                const Sentence &sentence) {
  if (!a.Overlaps(b)) {
    std::vector<Span> pieces = {std::min(a, b), std::max(a, b)};
    return pieces;
  }
  const bool a_shorter =
      a.length() < b.length() || (a.length() == b.length() && a.start <= b.start);
  const Span &shorter = a_shorter ? a : b;
  const Span &longer = a_shorter ? b : a;
  std::vector<Span> pieces = {shorter};
  if (longer.start < shorter.start) {
    AppendRuns(longer.start, shorter.start, sentence, &pieces);
  }
  if (shorter.end < longer.end) AppendRuns(shorter.end, longer.end, sentence, &pieces);
  std::sort(pieces.begin(), pieces.end());
  return pieces;
}

ConsolidationProposal propose(const VerbAnnotation &first,
                              const VerbAnnotation &second,
                              const Sentence &sentence,
                              const Vocabulary &vocab) {
  CheckSame(first, second);
  if (sentence.id != first.sentence_id) {
    throw PredicateMismatch("sentence '" + sentence.id +
                            "' does not belong to " + first.key().ToString());
  }

  // Signature groups in order of first appearance.
  struct SigGroup {
    StrictSignature sig;
    RelaxedKey relaxed;
    std::vector<SourceQa> members;
    bool from[2] = {false, false};
  };
  std::vector<SigGroup> sig_groups;
  std::map<StrictSignature, int> by_sig;
  const VerbAnnotation *sources[2] = {&first, &second};
  for (int s = 0; s < 2; ++s) {
    const VerbAnnotation &annotation = *sources[s];
    for (size_t q = 0; q < annotation.qa_pairs.size(); ++q) {
      const QAPair &qa = annotation.qa_pairs[q];
      StrictSignature sig = signature(qa.question, annotation.verb_forms, vocab);
      auto [it, inserted] = by_sig.emplace(sig, static_cast<int>(sig_groups.size()));
      if (inserted) {
        sig_groups.push_back({sig, relaxed_key(qa.question, annotation.verb_forms, vocab), {}});
      }
      SigGroup &group = sig_groups[it->second];
      group.members.push_back({s, static_cast<int>(q), qa});
      group.from[s] = true;
    }
  }

  // Join one-worker signature groups of opposite workers that share the
  // relaxed key.
  const int n = static_cast<int>(sig_groups.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      const SigGroup &gx = sig_groups[x];
      const SigGroup &gy = sig_groups[y];
      bool opposite = (gx.from[0] != gx.from[1]) && (gy.from[0] != gy.from[1]) &&
                      gx.from[0] != gy.from[0];
      if (opposite && gx.relaxed == gy.relaxed) parent[Find(parent, y)] = Find(parent, x);
    }
  }

  ConsolidationProposal proposal;
  proposal.key = first.key();
  std::map<int, int> root_to_group;
  std::vector<int> merged_count;
  for (int x = 0; x < n; ++x) {
    int root = Find(parent, x);
    auto [it, inserted] = root_to_group.emplace(root, static_cast<int>(proposal.groups.size()));
    if (inserted) {
      ProposalGroup group;
      group.signature_key = sig_groups[x].sig.ToString();
      group.relaxed_key = sig_groups[x].relaxed.ToString();
      proposal.groups.push_back(std::move(group));
      merged_count.push_back(0);
    }
    ProposalGroup &group = proposal.groups[it->second];
    ++merged_count[it->second];
    for (const SourceQa &member : sig_groups[x].members) group.members.push_back(member);
  }

  for (size_t g = 0; g < proposal.groups.size(); ++g) {
    ProposalGroup &group = proposal.groups[g];
    std::stable_sort(group.members.begin(), group.members.end(),
                     [](const SourceQa &a, const SourceQa &b) {
                       return std::tie(a.source, a.index) < std::tie(b.source, b.index);
                     });
    std::vector<Span> by_source[2];
    for (const SourceQa &member : group.members) {
      for (const Span &span : member.qa.answers) {
        if (std::find(group.answers.begin(), group.answers.end(), span) ==
            group.answers.end()) {
          group.answers.push_back(span);
        }
        by_source[member.source].push_back(span);
      }
    }
    const int gi = static_cast<int>(g);
    if (merged_count[g] > 1) {
      group.flags.push_back(ConflictKind::kQuestionVariant);
      std::string details = "questions differ beyond WH/SUBJ/OBJ/voice:";
      for (const SourceQa &member : group.members) {
        details += " [" + std::to_string(member.source + 1) + "] " +
                   render_question(member.qa.question);
      }
      proposal.conflicts.push_back({ConflictKind::kQuestionVariant, gi, details, {}, {}});
    }
    if (by_source[0].empty() || by_source[1].empty()) {
      group.flags.push_back(ConflictKind::kSingleton);
      proposal.conflicts.push_back(
          {ConflictKind::kSingleton, gi,
           "only annotator " + std::to_string(by_source[0].empty() ? 2 : 1) +
               " asked " + render_question(group.members.front().qa.question),
           {}, {}});
    }
    auto only_in = [](const std::vector<Span> &mine, const std::vector<Span> &theirs) {
      std::vector<Span> out;
      for (const Span &span : mine) {
        if (std::find(theirs.begin(), theirs.end(), span) == theirs.end() &&
            std::find(out.begin(), out.end(), span) == out.end()) {
          out.push_back(span);
        }
      }
      std::sort(out.begin(), out.end());
      return out;
    };
    const std::vector<Span> own0 = only_in(by_source[0], by_source[1]);
    const std::vector<Span> own1 = only_in(by_source[1], by_source[0]);
    bool flagged = false;
    for (const Span &a : own0) {
      for (const Span &b : own1) {
        if (!a.Overlaps(b)) continue;
        if (!flagged) group.flags.push_back(ConflictKind::kAnswerOverlap);
        flagged = true;
        Conflict conflict{ConflictKind::kAnswerOverlap, gi,
                          "\"" + SpanText(sentence, a) + "\" overlaps \"" +
                              SpanText(sentence, b) + "\"",
                          {std::min(a, b), std::max(a, b)},
                          suggest_split(a, b, sentence)};
        proposal.conflicts.push_back(std::move(conflict));
      }
    }
  }
  return proposal;
}

int ConsolidationReport::violations() const {
  return static_cast<int>(std::count_if(findings.begin(), findings.end(),
                                        [](const auto &f) { return f.is_violation; }));
}

int ConsolidationReport::novel_roles() const {
  return static_cast<int>(std::count_if(findings.begin(), findings.end(), [](const auto &f) {
    return f.code == "NOVEL_ROLE";
  }));
}

ConsolidationReport validate_consolidation(const VerbAnnotation &consolidated,
                                           const VerbAnnotation &first,
                                           const VerbAnnotation &second,
                                           const Vocabulary &vocab) {
  CheckSame(consolidated, first);
  CheckSame(consolidated, second);
  std::set<RelaxedKey> source_keys;
  for (const VerbAnnotation *source : {&first, &second}) {
    for (const QAPair &qa : source->qa_pairs) {
      source_keys.insert(relaxed_key(qa.question, source->verb_forms, vocab));
    }
  }

  ConsolidationReport report;
  report.key = consolidated.key();
  std::map<StrictSignature, int> seen;
  for (size_t q = 0; q < consolidated.qa_pairs.size(); ++q) {
    const QAPair &qa = consolidated.qa_pairs[q];
    const int qi = static_cast<int>(q);
    const std::string text = render_question(qa.question);
    StrictSignature sig = signature(qa.question, consolidated.verb_forms, vocab);
    auto [it, inserted] = seen.emplace(sig, qi);
    if (!inserted) {
      report.findings.push_back({"DUPLICATE_ROLE", qi,
                                 text + " repeats the role of question " +
                                     std::to_string(it->second),
                                 true});
    }
    for (size_t a = 0; a < qa.answers.size(); ++a) {
      for (size_t b = a + 1; b < qa.answers.size(); ++b) {
        if (qa.answers[a].Overlaps(qa.answers[b])) {
          report.findings.push_back({"OVERLAPPING_ANSWERS", qi,
                                     text + ": answers " + std::to_string(a) +
                                         " and " + std::to_string(b) + " overlap",
                                     true});
        }
      }
    }
    if (!source_keys.count(relaxed_key(qa.question, consolidated.verb_forms, vocab))) {
      report.findings.push_back(
          {"NOVEL_ROLE", qi, text + " matches no question of either annotator", false});
    }
  }
  return report;
}

}  // namespace qasrl
