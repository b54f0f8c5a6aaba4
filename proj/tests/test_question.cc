#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "qasrl/question.h"
#include "test_support.h"

using namespace qasrl;
using namespace qasrl::testing;

namespace {

QuestionSlots Slots(std::string wh, std::string aux, std::string subj,
                    std::string verb, std::string obj, std::string prep,
                    std::string misc) {
  return {wh, aux, subj, verb, obj, prep, misc};
}

}  // namespace

TEST_CASE("template examples parse to their slot tuples") {
  CHECK(parse_question("Why was something cut by someone?", CutForms()) ==
        Slots("Why", "was", "something", "cut", "", "by", "someone"));
  CHECK(parse_question("Why did someone cut something?", CutForms()) ==
        Slots("Why", "did", "someone", "cut", "something", "", ""));
  CHECK(parse_question("Who might be arrested?", ArrestForms()) ==
        Slots("Who", "might", "", "be arrested", "", "", ""));
}

TEST_CASE("render joins non-empty slots") {
  CHECK(render_question(Slots("Why", "did", "someone", "cut", "something", "", "")) ==
        "Why did someone cut something?");
  CHECK(render_question(Slots("Who", "", "", "cut", "something", "", "")) ==
        "Who cut something?");
}

TEST_CASE("template examples round-trip") {
  const std::vector<std::pair<std::string, VerbForms>> rows = {
      {"Why was something cut by someone?", CutForms()},
      {"Why did someone cut something?", CutForms()},
      {"Who might be arrested?", ArrestForms()},
  };
  for (const auto &[text, forms] : rows) {
    QuestionSlots slots = parse_question(text, forms);
    CHECK(render_question(slots) == text);
    CHECK(parse_question(render_question(slots), forms) == slots);
  }
}

TEST_CASE("unparseable questions") {
  CHECK_THROWS_AS(parse_question("Banana quickly someone?", CutForms()), UnparseableQuestion);
  CHECK_THROWS_AS(parse_question("Who cut something", CutForms()), UnparseableQuestion);
  CHECK_THROWS_AS(parse_question("Who ate something?", CutForms()), UnparseableQuestion);
  CHECK_THROWS_AS(parse_question("?", CutForms()), UnparseableQuestion);
}

TEST_CASE("multi-word verb slots and two-word WH") {
  CHECK(parse_question("What has been given by someone?", GiveForms()) ==
        Slots("What", "has", "", "been given", "", "by", "someone"));
  CHECK(parse_question("How much did someone give?", GiveForms()) ==
        Slots("How much", "did", "someone", "give", "", "", ""));
  CHECK(parse_question("Who is being arrested?", ArrestForms()) ==
        Slots("Who", "is", "", "being arrested", "", "", ""));
  CHECK(parse_question("Who might have been arrested?", ArrestForms()) ==
        Slots("Who", "might", "", "have been arrested", "", "", ""));
  CHECK(parse_question("Who didn't cut something?", CutForms()) ==
        Slots("Who", "didn't", "", "cut", "something", "", ""));
  CHECK(parse_question("Who would not cut something?", CutForms()) ==
        Slots("Who", "would not", "", "cut", "something", "", ""));
}

TEST_CASE("signatures of the template examples") {
  StrictSignature row1 =
      signature(parse_question("Why was something cut by someone?", CutForms()), CutForms());
  CHECK(row1.wh == "why");
  CHECK(row1.subj == "something");
  CHECK(row1.obj == "EMPTY");
  CHECK_FALSE(row1.negated);
  CHECK(row1.voice == Voice::kPassive);
  CHECK_FALSE(row1.modal);

  StrictSignature row3 =
      signature(parse_question("Who might be arrested?", ArrestForms()), ArrestForms());
  CHECK(row3.wh == "who");
  CHECK(row3.subj == "EMPTY");
  CHECK(row3.obj == "EMPTY");
  CHECK_FALSE(row3.negated);
  CHECK(row3.voice == Voice::kPassive);
  CHECK(row3.modal);

  StrictSignature row2 =
      signature(parse_question("Why did someone cut something?", CutForms()), CutForms());
  CHECK(row2.voice == Voice::kActive);
  CHECK(row2.subj == "someone");
  CHECK_FALSE(row2.modal);
}

TEST_CASE("negation, do-support and will") {
  auto sig = [](const std::string &text) {
    return signature(parse_question(text, CutForms()), CutForms());
  };
  CHECK(sig("Who didn't cut something?").negated);
  CHECK(sig("Who would not cut something?").negated);
  CHECK(sig("Who would not cut something?").modal);
  CHECK_FALSE(sig("Who did cut something?").modal);
  CHECK_FALSE(sig("Who will cut something?").modal);
  CHECK_FALSE(sig("Who cut something?").negated);
  // Participle without a be-form stays active.
  CHECK(sig("What has someone cut?").voice == Voice::kActive);
}

TEST_CASE("strict match examples") {
  QuestionSlots given = parse_question("What was given to someone?", GiveForms());
  QuestionSlots given_by = parse_question("What has been given by someone?", GiveForms());
  CHECK(strict_match(given, given_by, GiveForms()));

  QuestionSlots row1 = parse_question("Why was something cut by someone?", CutForms());
  QuestionSlots row2 = parse_question("Why did someone cut something?", CutForms());
  CHECK_FALSE(strict_match(row1, row2, CutForms()));
  CHECK(strict_match(row1, row1, CutForms()));

  QuestionSlots might = parse_question("What might cut something?", CutForms());
  QuestionSlots plain = parse_question("What cut something?", CutForms());
  CHECK_FALSE(strict_match(might, plain, CutForms()));
  QuestionSlots somebody{"Who", "did", "somebody", "cut", "", "", ""};
  QuestionSlots someone{"Who", "did", "someone", "cut", "", "", ""};
  CHECK(strict_match(somebody, someone, CutForms()));
}

TEST_CASE("property: strict_match is an equivalence relation") {
  std::vector<QuestionSlots> questions;
  for (const std::string &text : CutQuestions()) questions.push_back(parse_question(text, CutForms()));
  for (const auto &a : questions) {
    CHECK(strict_match(a, a, CutForms()));
    for (const auto &b : questions) {
      CHECK(strict_match(a, b, CutForms()) == strict_match(b, a, CutForms()));
      for (const auto &c : questions) {
        if (strict_match(a, b, CutForms()) && strict_match(b, c, CutForms())) {
          CHECK(strict_match(a, c, CutForms()));
        }
      }
    }
  }
}

TEST_CASE("property: parse and render round-trip over random slot tuples") {
  const std::vector<std::string> wh = {"Who", "What", "When", "Where", "Why", "How", "How much", "How long"};
  const std::vector<std::string> aux = {"", "did", "does", "might", "can't", "was", "is", "has", "would not", "should"};
  const std::vector<std::string> placeholder = {"", "someone", "something"};
  const std::vector<std::string> verb = {"cut", "cuts", "cutting", "be cut", "been cut", "being cut", "have cut", "have been cut"};
  const std::vector<std::string> prep = {"", "by", "to", "for", "with"};
  const std::vector<std::string> misc = {"", "someone", "something", "somewhere"};
  std::mt19937 rng(7);
  auto pick = [&](const std::vector<std::string> &options) {
    return options[std::uniform_int_distribution<size_t>(0, options.size() - 1)(rng)];
  };
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    QuestionSlots slots{pick(wh), pick(aux), pick(placeholder), pick(verb),
                        pick(placeholder), pick(prep), pick(misc)};
    std::string text = render_question(slots);
    QuestionSlots parsed;
    try {
      parsed = parse_question(text, CutForms());
    } catch (const UnparseableQuestion &) {
      FAIL("rendered question did not parse: " << text);
    }
    // Text round-trips always; the slot tuple may legitimately differ when
    // the longest-verb rule absorbs a "have" from the aux side.
    CHECK(render_question(parsed) == text);
    CHECK(parse_question(render_question(parsed), CutForms()) == parsed);
    CHECK(signature(parsed, CutForms()) == signature(parse_question(render_question(parsed), CutForms()), CutForms()));
    ++checked;
  }
  CHECK(checked == 2000);
}

TEST_CASE("slots_well_formed") {
  CHECK(slots_well_formed(Slots("Who", "", "", "cut", "something", "", "")));
  CHECK_FALSE(slots_well_formed(Slots("", "", "", "cut", "", "", "")));
  CHECK_FALSE(slots_well_formed(Slots("Who", "", "", "", "", "", "")));
  CHECK_FALSE(slots_well_formed(Slots("Who", " did", "", "cut", "", "", "")));
}

TEST_CASE("heuristic verb forms") {
  VerbForms arrested = heuristic_verb_forms("arrested");
  CHECK(arrested.stem == "arrest");
  CHECK(arrested.past_participle == "arrested");
  CHECK(arrested.present_participle == "arresting");
  VerbForms calling = heuristic_verb_forms("calling");
  CHECK(calling.stem == "call");
  CHECK(calling.past == "called");
}

TEST_CASE("modal lexicon file replaces the default list") {
  const std::string path = "modal_lexicon_test.txt";
  {
    std::ofstream out(path);
    out << "# custom\nwill\n\n";
  }
  Vocabulary vocab = Vocabulary::WithModalLexicon(Vocabulary::Default(), path);
  std::remove(path.c_str());
  CHECK(vocab.modals.count("will") == 1);
  CHECK(vocab.modals.count("might") == 0);
  QuestionSlots slots = parse_question("Who will cut something?", CutForms(), vocab);
  CHECK(signature(slots, CutForms(), vocab).modal);
  CHECK_FALSE(signature(slots, CutForms()).modal);
}
