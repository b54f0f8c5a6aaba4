#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "qasrl/cli.h"
#include "qasrl/dataset.h"
#include "test_support.h"

using namespace qasrl;
using namespace qasrl::testing;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome Run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string TempPath(const std::string &name) {
  return (std::filesystem::temp_directory_path() / ("qasrl_cli_" + name)).string();
}

std::string WriteTemp(const std::string &name, const std::string &content) {
  std::string path = TempPath(name);
  std::ofstream(path) << content;
  return path;
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("eval of a gold file against itself") {
  for (const char *file : {"gold/single_verb.jsonl", "gold/arrest_cut.jsonl", "gold/identify_contain.jsonl",
                           "gold/suggest_carry.jsonl"}) {
    Outcome o = Run({"eval", "--gold", Fixture(file), "--pred", Fixture(file), "--mode", "both",
                     "--report", "machine"});
    REQUIRE(o.code == 0);
    std::istringstream lines(o.out);
    std::string line;
    int reports = 0;
    while (std::getline(lines, line)) {
      auto json = nlohmann::json::parse(line);
      CHECK(json["totals"]["P"]["value"] == 1.0);
      CHECK(json["totals"]["R"]["value"] == 1.0);
      CHECK(json["totals"]["F1"]["value"] == 1.0);
      ++reports;
    }
    CHECK(reports == 2);
  }
}

TEST_CASE("redundant eval on the suggest and carry fixture") {
  Outcome o = Run({"eval", "--gold", Fixture("gold/suggest_carry.jsonl"), "--pred",
                   Fixture("parser/suggest_carry.jsonl"), "--redundant", "--mode", "both", "--report",
                   "machine"});
  REQUIRE(o.code == 0);
  std::istringstream lines(o.out);
  std::string ua_line, la_line;
  std::getline(lines, ua_line);
  std::getline(lines, la_line);
  auto ua = nlohmann::json::parse(ua_line);
  auto la = nlohmann::json::parse(la_line);
  CHECK(ua["totals"]["tp"] == 2);
  CHECK(ua["totals"]["fp"] == 1);
  CHECK(ua["totals"]["fn"] == 0);
  CHECK(la["totals"]["tp"] == 2);
  CHECK(la["totals"]["fp"] == 2);
  CHECK(la["totals"]["P"]["num"] == 2);
  CHECK(la["totals"]["P"]["den"] == 4);
}

TEST_CASE("machine reports are byte-stable and agree with the table") {
  std::vector<std::string> args = {"eval", "--gold", Fixture("gold/suggest_carry.jsonl"), "--pred",
                                   Fixture("parser/suggest_carry.jsonl"), "--redundant", "--mode", "both"};
  auto machine = args;
  machine.insert(machine.end(), {"--report", "machine"});
  Outcome first = Run(machine);
  Outcome second = Run(machine);
  auto threaded = machine;
  threaded.insert(threaded.end(), {"--jobs", "3"});
  CHECK(first.out == second.out);
  CHECK(first.out == Run(threaded).out);

  Outcome table = Run(args);
  REQUIRE(table.code == 0);
  std::istringstream lines(first.out);
  std::string line;
  while (std::getline(lines, line)) {
    auto json = nlohmann::json::parse(line);
    std::string row = json["config"]["mode"].get<std::string>() + "\\s+" +
                      json["totals"]["P"]["display"].get<std::string>() + "\\s+" +
                      json["totals"]["R"]["display"].get<std::string>() + "\\s+" +
                      json["totals"]["F1"]["display"].get<std::string>();
    CHECK_MESSAGE(std::regex_search(table.out, std::regex(row)), row);
  }
}

TEST_CASE("iaa on worker fixtures is symmetric") {
  for (const char *mode : {"ua", "la"}) {
    Outcome ab = Run({"iaa", "--a", Fixture("workers/w1.jsonl"), "--b", Fixture("workers/w2.jsonl"),
                      "--mode", mode, "--report", "machine"});
    Outcome ba = Run({"iaa", "--a", Fixture("workers/w2.jsonl"), "--b", Fixture("workers/w1.jsonl"),
                      "--mode", mode, "--report", "machine"});
    REQUIRE(ab.code == 0);
    CHECK(ab.out == ba.out);
  }
}

TEST_CASE("exit codes") {
  CHECK(Run({"validate", "--input", Fixture("gold/arrest_cut.jsonl")}).code == 0);
  CHECK(Run({}).code == 2);
  CHECK(Run({"frobnicate"}).code == 2);
  CHECK(Run({"eval", "--gold", Fixture("gold/arrest_cut.jsonl")}).code == 2);
  CHECK(Run({"eval", "--gold", "/nonexistent.jsonl", "--pred", "/nonexistent.jsonl"}).code == 2);
  CHECK(Run({"--help"}).code == 0);

  std::string broken = WriteTemp("broken.jsonl", ReadFile(Fixture("gold/arrest_cut.jsonl")) + "{oops\n");
  Outcome format = Run({"validate", "--input", broken});
  CHECK(format.code == 2);
  CHECK(format.err.find(":3") != std::string::npos);

  AnnotationSet gold = load_dataset(Fixture("gold/identify_contain.jsonl"), DatasetFormat::kGold).set;
  gold.annotations[0].qa_pairs.push_back(gold.annotations[0].qa_pairs[0]);
  gold.annotations[0].qa_pairs.back().answers = {{8, 9}};
  gold.redundant = true;  // lets write_dataset emit it
  std::ostringstream buffer;
  write_dataset(gold, buffer);
  std::string dup = WriteTemp("dup.jsonl", buffer.str());
  Outcome violations = Run({"validate", "--input", dup});
  CHECK(violations.code == 1);
  CHECK(violations.out.find("DUPLICATE_ROLE") != std::string::npos);
  CHECK(Run({"eval", "--gold", dup, "--pred", dup}).code == 1);
  std::remove(broken.c_str());
  std::remove(dup.c_str());
}

TEST_CASE("stats, cost and propbank subcommands") {
  Outcome stats = Run({"stats", "--input", Fixture("gold/arrest_cut.jsonl"), "--report", "machine"});
  REQUIRE(stats.code == 0);
  CHECK(nlohmann::json::parse(stats.out)["questions_per_verb"] == 1.5);

  Outcome cost = Run({"cost", "--input", Fixture("dense/identify_contain_workers.jsonl"), "--input",
                      Fixture("gold/identify_contain.jsonl"), "--report", "machine"});
  REQUIRE(cost.code == 0);
  auto cost_json = nlohmann::json::parse(cost.out);
  CHECK(cost_json["average_cents"] == 19.5);

  Outcome missing = Run({"cost", "--input", Fixture("dense/identify_contain_workers.jsonl")});
  CHECK(missing.code == 2);

  Outcome pb = Run({"propbank", "--qasrl", Fixture("gold/arrest_cut.jsonl"), "--propbank",
                    Fixture("propbank/arrest_cut.tsv"), "--class", "core", "--report", "machine"});
  REQUIRE(pb.code == 0);
  CHECK(nlohmann::json::parse(pb.out)["P"]["value"] == 0.75);
}

TEST_CASE("consolidate writes proposals and checks consolidations") {
  std::string output = TempPath("proposals.jsonl");
  Outcome o = Run({"consolidate", "--input", Fixture("dense/identify_contain_workers.jsonl"), "--consolidated",
                   Fixture("gold/identify_contain.jsonl"), "--output", output});
  REQUIRE(o.code == 0);
  CHECK(o.out.find("The U.S. Geological Survey | USGS") != std::string::npos);
  std::ifstream in(output);
  std::string line;
  int proposals = 0;
  while (std::getline(in, line)) {
    if (!nlohmann::json::parse(line).contains("groups")) continue;
    ++proposals;
  }
  CHECK(proposals == 2);
  std::remove(output.c_str());
}

TEST_CASE("convert imports csv exports") {
  std::string output = TempPath("converted.jsonl");
  Outcome o = Run({"convert", "--annotations", Fixture("csv/annotations.csv"), "--sentences",
                   Fixture("csv/sentences.csv"), "--lexicon", Fixture("csv/lexicon.txt"), "--output",
                   output});
  REQUIRE(o.code == 0);
  CHECK(o.err.find("Banana") != std::string::npos);
  AnnotationSet converted = load_dataset(output, DatasetFormat::kGold).set;
  AnnotationSet expected = load_dataset(Fixture("gold/arrest_cut.jsonl"), DatasetFormat::kGold).set;
  CHECK(converted == expected);
  std::remove(output.c_str());
}
