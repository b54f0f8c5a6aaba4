#include "qasrl/question.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace qasrl {

namespace {

const std::set<std::string> kBeForms = {"be", "been", "being", "is",
                                        "are", "was", "were", "am"};

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::string Join(const std::vector<std::string> &words, size_t begin,
                 size_t end) {
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (!out.empty()) out += ' ';
    out += words[i];
  }
  return out;
}

bool Contains(const std::set<std::string> &set, std::string_view word) {
  return set.count(to_lower(word)) > 0;
}

// "can't" -> "can", "won't" -> "will", "didn't" -> "did".
std::string StripNegation(std::string word) {
  word = to_lower(word);
  if (word == "cannot" || word == "can't") return "can";
  if (word == "won't") return "will";
  if (word == "shan't") return "shall";
  if (word.size() > 3 && word.compare(word.size() - 3, 3, "n't") == 0) {
    return word.substr(0, word.size() - 3);
  }
  return word;
}

// Token counts of the verb-slot expansions that end in an inflection of the
// target verb, for a verb slot starting at `pos`.
std::vector<size_t> VerbSlotMatches(const std::vector<std::string> &words,
                                    size_t pos, const VerbForms &forms) {
  static const std::vector<std::vector<std::string>> kPrefixes = {
      {"have", "been"}, {"be"}, {"been"}, {"being"}, {"have"}, {}};
  std::set<std::string> inflections;
  for (const std::string *form :
       {&forms.stem, &forms.present, &forms.past, &forms.past_participle,
        &forms.present_participle}) {
    if (!form->empty()) inflections.insert(to_lower(*form));
  }
  std::vector<size_t> lengths;
  for (const auto &prefix : kPrefixes) {
    size_t end = pos + prefix.size();
    if (end >= words.size()) continue;
    bool ok = true;
    for (size_t i = 0; i < prefix.size() && ok; ++i) {
      ok = to_lower(words[pos + i]) == prefix[i];
    }
    if (ok && inflections.count(to_lower(words[end]))) {
      lengths.push_back(prefix.size() + 1);
    }
  }
  std::sort(lengths.rbegin(), lengths.rend());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
  return lengths;
}

std::string CanonicalPlaceholder(const std::string &slot) {
  std::string lower = to_lower(slot);
  if (lower.empty()) return "EMPTY";
  if (lower == "somebody") return "someone";
  return lower;
}

std::string VoiceName(Voice voice) {
  return voice == Voice::kPassive ? "passive" : "active";
}

}  // namespace

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const Vocabulary &Vocabulary::Default() {
  static const Vocabulary vocab = [] {
    Vocabulary v;
    v.wh = {"who", "what", "when", "where", "why", "how", "how much",
            "how long"};
    v.placeholders = {"someone", "something", "somewhere"};
    v.auxiliaries = {
        "is",      "are",      "was",       "were",     "am",
        "does",    "do",       "did",       "has",      "have",
        "had",     "can",      "could",     "may",      "might",
        "must",    "shall",    "should",    "will",     "would",
        "isn't",   "aren't",   "wasn't",    "weren't",  "doesn't",
        "don't",   "didn't",   "hasn't",    "haven't",  "hadn't",
        "can't",   "cannot",   "couldn't",  "mightn't", "mustn't",
        "shan't",  "shouldn't", "won't",    "wouldn't"};
    v.modals = {"might", "may", "should", "could", "can", "must", "would"};
    v.prepositions = {
        "about",   "above",  "across",     "after",  "against", "along",
        "among",   "around", "as",         "at",     "away",    "back",
        "before",  "behind", "below",      "beneath", "beside", "between",
        "beyond",  "by",     "despite",    "down",   "during",  "except",
        "for",     "from",   "in",         "inside", "into",    "like",
        "near",    "of",     "off",        "on",     "onto",    "out",
        "outside", "over",   "past",       "since",  "than",    "through",
        "throughout", "to",  "toward",     "towards", "under",  "until",
        "up",      "upon",   "with",       "within", "without"};
    v.misc_words = {"someone", "something", "somewhere", "do", "doing"};
    return v;
  }();
  return vocab;
}

Vocabulary Vocabulary::WithModalLexicon(const Vocabulary &base,
                                        const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open modal lexicon");
  Vocabulary vocab = base;
  vocab.modals.clear();
  std::string line;
  while (std::getline(in, line)) {
    auto words = SplitWords(line);
    if (words.empty() || words.front().front() == '#') continue;
    vocab.modals.insert(to_lower(words.front()));
  }
  return vocab;
}

QuestionSlots parse_question(std::string_view text, const VerbForms &forms,
                             const Vocabulary &vocab) {
  std::string trimmed(text);
  while (!trimmed.empty() &&
         std::isspace(static_cast<unsigned char>(trimmed.back()))) {
    trimmed.pop_back();
  }
  if (trimmed.empty() || trimmed.back() != '?') {
    throw UnparseableQuestion("question must end with '?': \"" +
                              std::string(text) + "\"");
  }
  trimmed.pop_back();
  const std::vector<std::string> words = SplitWords(trimmed);
  auto fail = [&](const std::string &why) {
    return UnparseableQuestion(why + ": \"" + std::string(text) + "\"");
  };
  if (words.empty()) throw fail("empty question");

  QuestionSlots slots;
  size_t pos = 0;
  if (words.size() >= 2 && Contains(vocab.wh, words[0] + " " + words[1])) {
    slots.wh = words[0] + " " + words[1];
    pos = 2;
  } else if (Contains(vocab.wh, words[0])) {
    slots.wh = words[0];
    pos = 1;
  } else {
    throw fail("unknown WH word '" + words[0] + "'");
  }

  std::vector<size_t> aux_options;
  if (pos < words.size() && Contains(vocab.auxiliaries, words[pos])) {
    if (pos + 1 < words.size() && to_lower(words[pos + 1]) == "not") {
      aux_options.push_back(2);
    }
    aux_options.push_back(1);
  }
  aux_options.push_back(0);

  // Enumerate complete assignments; keep the first one found with the
  // longest verb slot. Optional slots are tried filled before empty.
  std::optional<QuestionSlots> best;
  size_t best_verb_len = 0;
  auto optional_slot = [&](size_t at, const std::set<std::string> &words_ok) {
    std::vector<size_t> options;
    if (at < words.size() && Contains(words_ok, words[at])) options.push_back(1);
    options.push_back(0);
    return options;
  };
  for (size_t aux_len : aux_options) {
    const size_t subj_pos = pos + aux_len;
    for (size_t subj_len : optional_slot(subj_pos, vocab.placeholders)) {
      const size_t verb_pos = subj_pos + subj_len;
      for (size_t verb_len : VerbSlotMatches(words, verb_pos, forms)) {
        if (best && verb_len <= best_verb_len) continue;
        const size_t obj_pos = verb_pos + verb_len;
        bool placed = false;
        for (size_t obj_len : optional_slot(obj_pos, vocab.placeholders)) {
          const size_t prep_pos = obj_pos + obj_len;
          for (size_t prep_len : optional_slot(prep_pos, vocab.prepositions)) {
            const size_t misc_pos = prep_pos + prep_len;
            bool misc_ok = true;
            for (size_t i = misc_pos; i < words.size() && misc_ok; ++i) {
              misc_ok = Contains(vocab.misc_words, words[i]);
            }
            if (!misc_ok) continue;
            QuestionSlots candidate = slots;
            candidate.aux = Join(words, pos, subj_pos);
            candidate.subj = Join(words, subj_pos, verb_pos);
            candidate.verb = Join(words, verb_pos, obj_pos);
            candidate.obj = Join(words, obj_pos, prep_pos);
            candidate.prep = Join(words, prep_pos, misc_pos);
            candidate.misc = Join(words, misc_pos, words.size());
            best = std::move(candidate);
            best_verb_len = verb_len;
            placed = true;
            break;
          }
          if (placed) break;
        }
      }
    }
  }
  if (!best) throw fail("no slot assignment fits the template");
  return *best;
}

std::string render_question(const QuestionSlots &slots) {
  std::string out;
  for (const std::string *slot : {&slots.wh, &slots.aux, &slots.subj,
                                  &slots.verb, &slots.obj, &slots.prep,
                                  &slots.misc}) {
    if (slot->empty()) continue;
    if (!out.empty()) out += ' ';
    out += *slot;
  }
  return out + "?";
}

bool slots_well_formed(const QuestionSlots &slots) {
  if (slots.wh.empty() || slots.verb.empty()) return false;
  for (const std::string *slot : {&slots.wh, &slots.aux, &slots.subj,
                                  &slots.verb, &slots.obj, &slots.prep,
                                  &slots.misc}) {
    if (slot->empty()) continue;
    if (std::isspace(static_cast<unsigned char>(slot->front())) ||
        std::isspace(static_cast<unsigned char>(slot->back())) ||
        slot->find('?') != std::string::npos) {
      return false;
    }
  }
  return true;
}

StrictSignature signature(const QuestionSlots &slots, const VerbForms &forms,
                          const Vocabulary &vocab) {
  StrictSignature sig;
  sig.wh = to_lower(slots.wh);
  sig.subj = CanonicalPlaceholder(slots.subj);
  sig.obj = CanonicalPlaceholder(slots.obj);

  const std::vector<std::string> aux = SplitWords(slots.aux);
  for (const std::string &word : aux) {
    std::string lower = to_lower(word);
    if (lower == "not" || lower == "cannot" ||
        lower.find("n't") != std::string::npos) {
      sig.negated = true;
    }
  }
  const std::string first_aux = aux.empty() ? "" : StripNegation(aux.front());
  sig.modal = !first_aux.empty() && vocab.modals.count(first_aux) > 0;

  const std::vector<std::string> verb = SplitWords(slots.verb);
  if (!verb.empty() && !forms.past_participle.empty() &&
      to_lower(verb.back()) == to_lower(forms.past_participle)) {
    bool be_before = false;
    if (verb.size() >= 2) {
      be_before = kBeForms.count(to_lower(verb[verb.size() - 2])) > 0;
    } else {
      for (const std::string &word : aux) {
        if (kBeForms.count(StripNegation(word))) be_before = true;
      }
    }
    if (be_before) sig.voice = Voice::kPassive;
  }
  return sig;
}

RelaxedKey relaxed_key(const QuestionSlots &slots, const VerbForms &forms,
                       const Vocabulary &vocab) {
  StrictSignature sig = signature(slots, forms, vocab);
  return {sig.wh, sig.subj, sig.obj, sig.voice};
}

bool strict_match(const QuestionSlots &a, const QuestionSlots &b,
                  const VerbForms &forms, const Vocabulary &vocab) {
  return signature(a, forms, vocab) == signature(b, forms, vocab);
}

bool strict_match(const QuestionSlots &a, const VerbForms &a_forms,
                  const QuestionSlots &b, const VerbForms &b_forms,
                  const Vocabulary &vocab) {
  return signature(a, a_forms, vocab) == signature(b, b_forms, vocab);
}

std::string StrictSignature::ToString() const {
  std::ostringstream out;
  out << wh << '|' << subj << '|' << obj << '|'
      << (negated ? "neg" : "pos") << '|' << VoiceName(voice) << '|'
      << (modal ? "modal" : "factual");
  return out.str();
}

std::string RelaxedKey::ToString() const {
  return wh + '|' + subj + '|' + obj + '|' + VoiceName(voice);
}

VerbForms heuristic_verb_forms(std::string_view word) {
  const std::string w = to_lower(word);
  auto ends_with = [&](std::string_view suffix) {
    return w.size() > suffix.size() + 1 &&
           w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  // "cutting" -> "cut", "stopped" -> "stop".
  auto undouble = [](std::string stem) {
    size_t n = stem.size();
    if (n >= 3 && stem[n - 1] == stem[n - 2] &&
        std::string("aeiouls").find(stem[n - 1]) == std::string::npos) {
      stem.pop_back();
    }
    return stem;
  };
  VerbForms forms;
  if (ends_with("ing")) {
    forms.stem = undouble(w.substr(0, w.size() - 3));
    forms.present_participle = w;
    forms.past = forms.past_participle = forms.stem + "ed";
  } else if (ends_with("ed")) {
    forms.stem = undouble(w.substr(0, w.size() - 2));
    forms.past = forms.past_participle = w;
    forms.present_participle = forms.stem + "ing";
  } else if (ends_with("en")) {
    forms.stem = w.substr(0, w.size() - 2);
    forms.past = forms.past_participle = w;
    forms.present_participle = forms.stem + "ing";
  } else if (ends_with("s") && !ends_with("ss")) {
    forms.stem = w.substr(0, w.size() - 1);
    forms.present = w;
    forms.past = forms.past_participle = forms.stem + "ed";
    forms.present_participle = forms.stem + "ing";
    return forms;
  } else {
    forms.stem = w;
    forms.past = forms.past_participle = w + "ed";
    forms.present_participle = w + "ing";
  }
  forms.present = forms.stem + "s";
  return forms;
}

}  // namespace qasrl
