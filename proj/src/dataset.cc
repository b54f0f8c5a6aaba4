#include "qasrl/dataset.h"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qasrl {

namespace {

using Json = nlohmann::ordered_json;

const std::set<std::string> kRecordFields = {
    "sentence_id", "tokens", "verb_index", "verb_forms",
    "verb_forms_heuristic", "source", "qas"};
const std::set<std::string> kQaFields = {"question_string", "slots", "answers",
                                         "source"};
const std::set<std::string> kSlotFields = {"wh", "aux", "subj", "verb",
                                           "obj", "prep", "misc"};
const std::set<std::string> kFormFields = {
    "stem", "present", "past", "past_participle", "present_participle"};

class RecordReader {
 public:
  RecordReader(const std::string &name, DatasetFormat format,
               const LoadOptions &options, LoadResult *result)
      : name_(name), format_(format), options_(options), result_(result) {
    vocab_ = options.vocab ? options.vocab : &Vocabulary::Default();
  }

  void Read(std::istream &in) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      Json record;
      try {
        record = Json::parse(line);
      } catch (const Json::parse_error &e) {
        throw Error(std::string("malformed JSON: ") + e.what());
      }
      try {
        ReadRecord(record);
      } catch (const Json::exception &e) {
        throw Error(std::string("malformed record: ") + e.what());
      }
    }
  }

 private:
  std::string Where() const { return name_ + ":" + std::to_string(line_no_); }
  FormatError Error(const std::string &message) const {
    return FormatError(Where() + ": " + message);
  }
  void Warn(const std::string &message) {
    result_->warnings.push_back(Where() + ": " + message);
  }

  void CheckFields(const Json &object, const std::set<std::string> &known,
                   const std::string &what) {
    if (!object.is_object()) throw Error(what + " must be a JSON object");
    for (const auto &item : object.items()) {
      if (!known.count(item.key())) {
        Warn("ignoring unknown " + what + " field '" + item.key() + "'");
      }
    }
  }

  static std::string OptionalString(const Json &object, const char *key) {
    auto it = object.find(key);
    if (it == object.end() || it->is_null()) return {};
    return it->get<std::string>();
  }

  const Sentence &ResolveSentence(const Json &record, const std::string &id) {
    auto &sentences = result_->set.sentences;
    auto it = sentences.find(id);
    if (record.contains("tokens")) {
      Sentence sentence{id, record.at("tokens").get<std::vector<std::string>>()};
      if (sentence.tokens.empty()) throw Error("sentence '" + id + "' has no tokens");
      if (it == sentences.end()) {
        it = sentences.emplace(id, std::move(sentence)).first;
      } else if (it->second.tokens != sentence.tokens) {
        throw Error("sentence '" + id + "' redefined with different tokens");
      }
    } else if (it == sentences.end()) {
      throw Error("dangling sentence reference '" + id + "'");
    }
    return it->second;
  }

  void ResolveForms(const Json &record, const Sentence &sentence,
                    VerbAnnotation *annotation) {
    if (record.contains("verb_forms") && !record.at("verb_forms").is_null()) {
      const Json &forms = record.at("verb_forms");
      CheckFields(forms, kFormFields, "verb_forms");
      annotation->verb_forms = {
          OptionalString(forms, "stem"), OptionalString(forms, "present"),
          OptionalString(forms, "past"), OptionalString(forms, "past_participle"),
          OptionalString(forms, "present_participle")};
      annotation->forms_low_confidence =
          record.value("verb_forms_heuristic", false);
      return;
    }
    const std::string &word = sentence.tokens[annotation->verb_index];
    if (options_.lexicon) {
      if (const VerbForms *forms = options_.lexicon->Find(to_lower(word))) {
        annotation->verb_forms = *forms;
        return;
      }
    }
    annotation->verb_forms = heuristic_verb_forms(word);
    annotation->forms_low_confidence = true;
    Warn("LOW_CONFIDENCE: verb forms for '" + word +
         "' guessed from suffix rules");
  }

  std::optional<QAPair> ReadQa(const Json &qa, const VerbAnnotation &annotation,
                               const Sentence &sentence, size_t qa_index) {
    CheckFields(qa, kQaFields, "qa");
    const std::string location = "qa " + std::to_string(qa_index) + " of " +
                                 annotation.key().ToString();
    QAPair pair;
    if (qa.contains("slots") && !qa.at("slots").is_null()) {
      const Json &slots = qa.at("slots");
      CheckFields(slots, kSlotFields, "slots");
      pair.question = {OptionalString(slots, "wh"),   OptionalString(slots, "aux"),
                       OptionalString(slots, "subj"), OptionalString(slots, "verb"),
                       OptionalString(slots, "obj"),  OptionalString(slots, "prep"),
                       OptionalString(slots, "misc")};
      if (!slots_well_formed(pair.question)) {
        throw Error(location + ": slots need non-empty, trimmed wh and verb");
      }
      if (!vocab_->wh.count(to_lower(pair.question.wh))) {
        Warn(location + ": unknown WH word '" + pair.question.wh + "'");
      }
    } else {
      const std::string text = OptionalString(qa, "question_string");
      try {
        pair.question = parse_question(text, annotation.verb_forms, *vocab_);
      } catch (const UnparseableQuestion &e) {
        Warn(location + ": UNPARSEABLE question skipped: " + e.what());
        return std::nullopt;
      }
    }

    const Json &answers = qa.at("answers");
    if (!answers.is_array() || answers.empty()) {
      throw Error(location + ": answers must be a non-empty list");
    }
    const int length = static_cast<int>(sentence.tokens.size());
    for (const Json &answer : answers) {
      Span span{answer.at("start").get<int>(), answer.at("end").get<int>()};
      if (span.start < 0 || span.start >= span.end || span.end > length) {
        throw Error(location + ": answer span [" + std::to_string(span.start) +
                    "," + std::to_string(span.end) +
                    ") out of bounds for sentence of " + std::to_string(length) +
                    " tokens");
      }
      pair.answers.push_back(span);
    }
    return pair;
  }

  Source DefaultSource() const {
    switch (format_) {
      case DatasetFormat::kGold:
        return Source::Consolidated();
      case DatasetFormat::kParser:
        return Source::Parser();
      case DatasetFormat::kDense:
        return Source::External();
    }
    return Source::External();
  }

  void ReadRecord(const Json &record) {
    CheckFields(record, kRecordFields, "record");
    if (!record.contains("sentence_id")) throw Error("missing sentence_id");
    const std::string id = record.at("sentence_id").get<std::string>();
    const Sentence &sentence = ResolveSentence(record, id);
    if (!record.contains("verb_index") && !record.contains("qas")) return;

    VerbAnnotation base;
    base.sentence_id = id;
    base.verb_index = record.at("verb_index").get<int>();
    if (base.verb_index < 0 ||
        base.verb_index >= static_cast<int>(sentence.tokens.size())) {
      throw Error("verb_index " + std::to_string(base.verb_index) +
                  " out of bounds for sentence '" + id + "'");
    }
    base.source = record.contains("source")
                      ? Source::FromString(record.at("source").get<std::string>())
                      : DefaultSource();
    ResolveForms(record, sentence, &base);

    // A per-QA "source" splits the record into one annotation per worker,
    // in order of first appearance.
    std::vector<VerbAnnotation> split;
    const Json &qas = record.contains("qas") ? record.at("qas") : Json::array();
    if (!qas.is_array()) throw Error("qas must be a list");
    split.push_back(base);
    for (size_t q = 0; q < qas.size(); ++q) {
      std::optional<QAPair> pair = ReadQa(qas[q], base, sentence, q);
      if (!pair) continue;
      Source source = base.source;
      if (qas[q].contains("source")) {
        source = Source::FromString(qas[q].at("source").get<std::string>());
      }
      VerbAnnotation *target = nullptr;
      for (VerbAnnotation &annotation : split) {
        if (annotation.source == source) target = &annotation;
      }
      if (!target) {
        split.push_back(base);
        split.back().source = source;
        split.back().qa_pairs.clear();
        target = &split.back();
      }
      target->qa_pairs.push_back(std::move(*pair));
    }
    // The record-level annotation is dropped if every QA moved to a worker.
    if (split.size() > 1 && split.front().qa_pairs.empty()) {
      split.erase(split.begin());
    }
    for (VerbAnnotation &annotation : split) {
      result_->set.annotations.push_back(std::move(annotation));
    }
  }

  std::string name_;
  DatasetFormat format_;
  LoadOptions options_;
  LoadResult *result_;
  const Vocabulary *vocab_;
  int line_no_ = 0;
};

Json SlotsToJson(const QuestionSlots &slots) {
  return Json{{"wh", slots.wh},     {"aux", slots.aux},   {"subj", slots.subj},
              {"verb", slots.verb}, {"obj", slots.obj},   {"prep", slots.prep},
              {"misc", slots.misc}};
}

std::string Location(const VerbAnnotation &annotation) {
  return annotation.key().ToString();
}

}  // namespace

DatasetFormat ParseDatasetFormat(const std::string &name) {
  if (name == "gold" || name == "gold-jsonl") return DatasetFormat::kGold;
  if (name == "dense" || name == "dense-jsonl") return DatasetFormat::kDense;
  if (name == "parser" || name == "parser-jsonl") return DatasetFormat::kParser;
  throw std::invalid_argument("unknown dataset format '" + name + "'");
}

std::string FormatName(DatasetFormat format) {
  switch (format) {
    case DatasetFormat::kGold:
      return "gold-jsonl";
    case DatasetFormat::kDense:
      return "dense-jsonl";
    case DatasetFormat::kParser:
      return "parser-jsonl";
  }
  return "gold-jsonl";
}

InflectionLexicon InflectionLexicon::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open inflection lexicon");
  InflectionLexicon lexicon;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> columns;
    std::string column;
    while (fields >> column) columns.push_back(column);
    if (columns.empty() || columns.front().front() == '#') continue;
    if (columns.size() != 5) {
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": expected 5 inflection columns, got " +
                        std::to_string(columns.size()));
    }
    lexicon.Add({columns[0], columns[1], columns[2], columns[3], columns[4]});
  }
  return lexicon;
}

void InflectionLexicon::Add(const VerbForms &forms) {
  entries_.push_back(forms);
  for (const std::string *form :
       {&forms.stem, &forms.present, &forms.past, &forms.past_participle,
        &forms.present_participle}) {
    by_form_.emplace(to_lower(*form), entries_.size() - 1);
  }
}

const VerbForms *InflectionLexicon::Find(const std::string &word) const {
  auto it = by_form_.find(to_lower(word));
  return it == by_form_.end() ? nullptr : &entries_[it->second];
}

LoadResult load_dataset(std::istream &in, const std::string &name,
                        DatasetFormat format, const LoadOptions &options) {
  LoadResult result;
  result.set.redundant = format != DatasetFormat::kGold;
  RecordReader reader(name, format, options, &result);
  reader.Read(in);
  return result;
}

LoadResult load_dataset(const std::string &path, DatasetFormat format,
                        const LoadOptions &options) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open file");
  return load_dataset(in, path, format, options);
}

ValidationReport validate(const AnnotationSet &set, const Vocabulary &vocab) {
  ValidationReport report;
  auto add = [&](std::string code, std::string location, std::string message) {
    report.violations.push_back(
        {std::move(code), std::move(location), std::move(message)});
  };

  for (const auto &[id, sentence] : set.sentences) {
    if (sentence.id != id) {
      add("SENTENCE_ID_MISMATCH", id, "sentence stored under id '" + id +
                                          "' carries id '" + sentence.id + "'");
    }
    if (sentence.tokens.empty()) add("EMPTY_SENTENCE", id, "sentence has no tokens");
  }

  for (const VerbAnnotation &annotation : set.annotations) {
    const std::string where = Location(annotation);
    const Sentence *sentence = set.FindSentence(annotation.sentence_id);
    if (!sentence) {
      add("DANGLING_SENTENCE", where,
          "unknown sentence '" + annotation.sentence_id + "'");
      continue;
    }
    const int length = static_cast<int>(sentence->tokens.size());
    if (annotation.verb_index < 0 || annotation.verb_index >= length) {
      add("VERB_INDEX_OUT_OF_BOUNDS", where, "verb index outside sentence");
    }
    for (size_t q = 0; q < annotation.qa_pairs.size(); ++q) {
      const QAPair &qa = annotation.qa_pairs[q];
      const std::string qa_where = where + "/" + std::to_string(q);
      if (!slots_well_formed(qa.question)) {
        add("MALFORMED_QUESTION", qa_where, "wh and verb slots are required");
      }
      if (qa.answers.empty()) add("EMPTY_ANSWERS", qa_where, "question has no answers");
      for (const Span &span : qa.answers) {
        if (span.start < 0 || span.start >= span.end || span.end > length) {
          add("SPAN_OUT_OF_BOUNDS", qa_where,
              "span [" + std::to_string(span.start) + "," +
                  std::to_string(span.end) + ") invalid for " +
                  std::to_string(length) + " tokens");
        }
      }
      if (set.redundant) continue;
      for (size_t a = 0; a < qa.answers.size(); ++a) {
        for (size_t b = a + 1; b < qa.answers.size(); ++b) {
          if (qa.answers[a].Overlaps(qa.answers[b])) {
            add("OVERLAPPING_ANSWERS", qa_where,
                "answers " + std::to_string(a) + " and " + std::to_string(b) +
                    " overlap");
          }
        }
      }
    }
    if (set.redundant) continue;
    std::map<StrictSignature, size_t> seen;
    for (size_t q = 0; q < annotation.qa_pairs.size(); ++q) {
      const QAPair &qa = annotation.qa_pairs[q];
      if (!slots_well_formed(qa.question)) continue;
      StrictSignature sig = signature(qa.question, annotation.verb_forms, vocab);
      auto [it, inserted] = seen.emplace(sig, q);
      if (!inserted) {
        add("DUPLICATE_ROLE", where + "/" + std::to_string(q),
            "same role as question " + std::to_string(it->second) + " (" +
                sig.ToString() + ")");
      }
    }
  }

  if (!set.redundant) {
    for (const auto &[key, group] : set.ByPredicate()) {
      if (group.size() > 1) {
        add("DUPLICATE_PREDICATE", key.ToString(),
            std::to_string(group.size()) +
                " annotations for one predicate in a consolidated set");
      }
    }
  }
  return report;
}

void write_dataset(const AnnotationSet &set, std::ostream &out) {
  ValidationReport report = validate(set);
  if (!report.ok()) {
    std::string message = "refusing to write an invalid annotation set:";
    for (const Violation &v : report.violations) {
      message += "\n  " + v.code + " at " + v.location + ": " + v.message;
    }
    throw std::invalid_argument(message);
  }

  std::set<std::string> annotated;
  for (const VerbAnnotation &annotation : set.annotations) {
    annotated.insert(annotation.sentence_id);
  }
  for (const auto &[id, sentence] : set.sentences) {
    if (annotated.count(id)) continue;
    out << Json{{"sentence_id", id}, {"tokens", sentence.tokens}}.dump() << '\n';
  }

  for (const VerbAnnotation &annotation : set.annotations) {
    const Sentence &sentence = set.sentences.at(annotation.sentence_id);
    const VerbForms &forms = annotation.verb_forms;
    Json record{{"sentence_id", annotation.sentence_id},
                {"tokens", sentence.tokens},
                {"verb_index", annotation.verb_index},
                {"verb_forms",
                 {{"stem", forms.stem},
                  {"present", forms.present},
                  {"past", forms.past},
                  {"past_participle", forms.past_participle},
                  {"present_participle", forms.present_participle}}}};
    if (annotation.forms_low_confidence) record["verb_forms_heuristic"] = true;
    record["source"] = annotation.source.ToString();
    Json qas = Json::array();
    for (const QAPair &qa : annotation.qa_pairs) {
      Json answers = Json::array();
      for (const Span &span : qa.answers) {
        answers.push_back({{"start", span.start}, {"end", span.end}});
      }
      qas.push_back({{"question_string", render_question(qa.question)},
                     {"slots", SlotsToJson(qa.question)},
                     {"answers", std::move(answers)}});
    }
    record["qas"] = std::move(qas);
    out << record.dump() << '\n';
  }
  if (!out) throw FormatError("write failed");
}

void write_dataset(const AnnotationSet &set, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw FormatError(path + ": cannot open for writing");
  write_dataset(set, out);
  out.flush();
  if (!out) throw FormatError(path + ": write failed");
}

}  // namespace qasrl
