#include "qasrl/convert.h"

#include <map>
#include <sstream>

namespace qasrl {

namespace {

std::map<std::string, size_t> HeaderIndex(const std::vector<std::string> &header) {
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < header.size(); ++i) index.emplace(header[i], i);
  return index;
}

size_t Require(const std::map<std::string, size_t> &index, const std::string &column,
               const std::string &file) {
  auto it = index.find(column);
  if (it == index.end()) throw FormatError(file + ": missing column '" + column + "'");
  return it->second;
}

std::vector<std::string> SplitOn(const std::string &text, char separator) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, separator)) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

}  // namespace

std::vector<std::vector<std::string>> read_csv(std::istream &in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && in.peek() == '\n') in.get();
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw FormatError("unterminated quoted CSV field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

LoadResult import_csv(std::istream &annotations, std::istream &sentences,
                      const std::string &name, DatasetFormat format,
                      const LoadOptions &options) {
  const Vocabulary &vocab = options.vocab ? *options.vocab : Vocabulary::Default();
  LoadResult result;
  result.set.redundant = format != DatasetFormat::kGold;

  const auto sentence_rows = read_csv(sentences);
  if (sentence_rows.empty()) throw FormatError(name + " (sentences): empty file");
  const auto sentence_index = HeaderIndex(sentence_rows.front());
  const size_t sid_col = Require(sentence_index, "qasrl_id", name + " (sentences)");
  const size_t tok_col = Require(sentence_index, "tokens", name + " (sentences)");
  for (size_t r = 1; r < sentence_rows.size(); ++r) {
    const auto &row = sentence_rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() <= std::max(sid_col, tok_col)) {
      throw FormatError(name + " (sentences):" + std::to_string(r + 1) + ": short row");
    }
    std::istringstream words(row[tok_col]);
    Sentence sentence{row[sid_col], {}};
    std::string word;
    while (words >> word) sentence.tokens.push_back(word);
    if (sentence.tokens.empty()) {
      throw FormatError(name + " (sentences):" + std::to_string(r + 1) + ": no tokens");
    }
    result.set.sentences[sentence.id] = std::move(sentence);
  }

  const auto rows = read_csv(annotations);
  if (rows.empty()) throw FormatError(name + ": empty file");
  const auto index = HeaderIndex(rows.front());
  const size_t id_col = Require(index, "qasrl_id", name);
  const size_t verb_col = Require(index, "verb_idx", name);
  const size_t question_col = Require(index, "question", name);
  const size_t range_col = Require(index, "answer_range", name);
  const auto worker_it = index.find("worker_id");

  const Source default_source = format == DatasetFormat::kGold     ? Source::Consolidated()
                                : format == DatasetFormat::kParser ? Source::Parser()
                                                                   : Source::External();
  std::map<std::pair<PredicateKey, std::string>, size_t> annotation_at;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    const std::string where = name + ":" + std::to_string(r + 1);
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() < rows.front().size()) throw FormatError(where + ": short row");

    const Sentence *sentence = result.set.FindSentence(row[id_col]);
    if (!sentence) throw FormatError(where + ": dangling sentence reference '" + row[id_col] + "'");
    PredicateKey key{row[id_col], 0};
    try {
      key.verb_index = std::stoi(row[verb_col]);
    } catch (const std::exception &) {
      throw FormatError(where + ": bad verb_idx '" + row[verb_col] + "'");
    }
    const int length = static_cast<int>(sentence->tokens.size());
    if (key.verb_index < 0 || key.verb_index >= length) {
      throw FormatError(where + ": verb_idx out of bounds");
    }
    Source source = default_source;
    if (worker_it != index.end() && !row[worker_it->second].empty()) {
      source = Source::Worker(row[worker_it->second]);
    }

    auto [slot, inserted] =
        annotation_at.emplace(std::make_pair(key, source.ToString()), result.set.annotations.size());
    if (inserted) {
      VerbAnnotation annotation;
      annotation.sentence_id = key.sentence_id;
      annotation.verb_index = key.verb_index;
      annotation.source = source;
      const std::string &word = sentence->tokens[key.verb_index];
      const VerbForms *forms = options.lexicon ? options.lexicon->Find(word) : nullptr;
      if (forms) {
        annotation.verb_forms = *forms;
      } else {
        annotation.verb_forms = heuristic_verb_forms(word);
        annotation.forms_low_confidence = true;
        result.warnings.push_back(where + ": LOW_CONFIDENCE: verb forms for '" + word +
                                  "' guessed from suffix rules");
      }
      result.set.annotations.push_back(std::move(annotation));
    }
    VerbAnnotation &annotation = result.set.annotations[slot->second];

    QAPair qa;
    try {
      qa.question = parse_question(row[question_col], annotation.verb_forms, vocab);
    } catch (const UnparseableQuestion &e) {
      result.warnings.push_back(where + ": UNPARSEABLE question skipped: " + e.what());
      continue;
    }
    for (const std::string &range : SplitOn(row[range_col], '~')) {
      auto bounds = SplitOn(range, ':');
      Span span{-1, -1};
      if (bounds.size() == 2) {
        try {
          span = {std::stoi(bounds[0]), std::stoi(bounds[1])};
        } catch (const std::exception &) {
        }
      }
      if (span.start < 0 || span.start >= span.end || span.end > length) {
        throw FormatError(where + ": answer range '" + range + "' out of bounds");
      }
      qa.answers.push_back(span);
    }
    if (qa.answers.empty()) throw FormatError(where + ": question without answers");
    annotation.qa_pairs.push_back(std::move(qa));
  }
  return result;
}

}  // namespace qasrl
