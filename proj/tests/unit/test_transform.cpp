#include <algorithm>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"

#include "anbx/semantics/validate.hpp"
#include "anbx/syntax/printer.hpp"
#include "anbx/transform/lowering.hpp"

using namespace anbx::syntax;
using namespace anbx::transform;
using anbx::semantics::validate;
using anbx::test::corpus;
using anbx::test::load_model;

namespace {

ProtocolModel parse_ok(const std::string& text) {
  auto r = parse(SourceFile::from_text(text, Dialect::AnBx));
  REQUIRE(r.model);
  return *r.model;
}

std::string certified_protocol(const std::string& actions, const std::string& extra_types = "") {
  return "Protocol: T\nTypes: Agent A,B,C; Number Msg" + extra_types +
         "; Certified A,B,C\nKnowledge: A: A,B,C; B: A,B,C; C: A,B,C\nActions:\n" + actions +
         "\nGoals: Msg secret between A,B\n";
}

std::vector<std::string> printed_actions(const ProtocolModel& m) {
  std::vector<std::string> out;
  for (const auto& a : m.actions) out.push_back(print_action(a));
  return out;
}

}  // namespace

TEST_CASE("fresh key transport becomes a challenge-response pair") {
  auto r = compile_channels(load_model("Fresh_From_A.AnBx"));
  REQUIRE(r.ok());
  const auto& m = *r.model;
  CHECK(printed_actions(m) == std::vector<std::string>{
                                  "B -> A : {B,Nonce1}pk(A)",
                                  "A -> B : {{Nonce1,K}inv(sk(A))}pk(B)",
                                  "B -> A : {|Msg|}K",
                                  "A -> B : hash(Msg),log(A,Msg)",
                              });
  CHECK(r.generated_nonces == std::vector<std::string>{"Nonce1"});
  CHECK(m.dialect == Dialect::AnB);
  CHECK(m.certified.empty());
  CHECK(m.goals == load_model("Fresh_From_A.AnBx").goals);
  CHECK(validate(m).empty());

  // The printed AnB text must itself parse and validate as AnB.
  auto reparsed = parse(SourceFile::from_text(pretty_print(m), Dialect::AnB));
  REQUIRE(reparsed.ok());
  CHECK(validate(*reparsed.model).empty());
  CHECK(pretty_print(m).find("Symmetric_key K") != std::string::npos);
}

TEST_CASE("certified agents learn their key material") {
  auto r = compile_channels(load_model("Fresh_From_A.AnBx"));
  REQUIRE(r.ok());
  for (const auto& k : r.model->knowledge) {
    std::set<std::string> terms;
    for (const auto& t : k.terms) terms.insert(print_term(t));
    CAPTURE(k.agent.name);
    CHECK(terms.count("pk"));
    CHECK(terms.count("sk"));
    CHECK(terms.count("inv(pk(" + k.agent.name + "))"));
    CHECK(terms.count("inv(sk(" + k.agent.name + "))"));
  }
}

TEST_CASE("non-fresh and partial modes") {
  auto r = compile_channels(parse_ok(certified_protocol(
      "A -> B,(A|B|B) : Msg\n B -> C,(B|C|-) : Msg\n C -> A,(-|-|A) : Msg\n A -> C,(-|-|-) : Msg\n"
      " B -> A : hash(Msg),Msg")));
  REQUIRE(r.ok());
  CHECK(printed_actions(*r.model) == std::vector<std::string>{
                                         "A -> B : {{B,Msg}inv(sk(A))}pk(B)",
                                         "B -> C : {C,Msg}inv(sk(B))",
                                         "C -> A : {Msg}pk(A)",
                                         "A -> C : Msg",
                                         "B -> A : hash(Msg),Msg",
                                     });
  CHECK(r.generated_nonces.empty());
  CHECK(validate(*r.model).empty());
}

TEST_CASE("generated nonces avoid source identifiers") {
  auto src = parse_ok(certified_protocol("A -> B,@(A|B|B) : Msg,Nonce1\n B -> A,@(B|A|A) : Nonce3", ",Nonce1,Nonce3"));
  auto r = compile_channels(src);
  REQUIRE(r.ok());
  CHECK(r.generated_nonces == std::vector<std::string>{"Nonce2", "Nonce4"});
  std::set<std::string> declared;
  for (const auto& d : src.types)
    for (const auto& e : d.entries) declared.insert(e.name.name);
  for (const auto& n : r.generated_nonces) CHECK_FALSE(declared.count(n));
  CHECK(validate(*r.model).empty());
}

TEST_CASE("lowering preconditions") {
  auto uncert = parse_ok("Protocol: T\nTypes: Agent A,B; Number Msg; Certified A\nKnowledge: A: A,B; B: A,B\n"
                         "Actions: A -> B,(A|B|B) : Msg\nGoals: Msg secret between A,B\n");
  auto r = compile_channels(uncert);
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics.size() == 2);
  for (const auto& d : r.diagnostics) CHECK(d.code == "E-LOWER-UNCERTIFIED");

  r = compile_channels(parse_ok(certified_protocol("A -> B,(A|B,C|B) : Msg")));
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics.at(0).code == "E-LOWER-MULTIVERS");

  r = compile_channels(parse_ok(certified_protocol("A -> B,@(A|B|-) : Msg")));
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics.at(0).code == "E-LOWER-FRESH-NODEST");

  r = compile_channels(load_model("QuickFix.AnBx"));
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics.size() == 2);
}

TEST_CASE("lowering expands macros and strips signatures") {
  auto r = compile_channels(load_model("Macros.AnBx"));
  REQUIRE(r.ok());
  CHECK(r.model->definitions.empty());
  CHECK(r.model->equations.size() == 1);
  for (const auto& d : r.model->types)
    for (const auto& e : d.entries) CHECK_FALSE(e.signature);
  CHECK(printed_actions(*r.model).at(1) == "B -> A : {A,hash(Msg)}inv(sk(B))");
  CHECK(validate(*r.model).empty());
}

TEST_CASE("lowering preserves goals across the corpus") {
  for (const auto& path : corpus()) {
    auto m = load_model(path.filename().string());
    auto r = compile_channels(m);
    if (!r.ok()) continue;
    CAPTURE(path.string());
    // Goals are kept; only macro uses inside goal terms are expanded.
    CHECK(r.model->goals == anbx::semantics::expand_macros(m).goals);
    CHECK(r.model->goals.size() == m.goals.size());
    CHECK(validate(*r.model).empty());
  }
}

TEST_CASE("split goals") {
  auto m = load_model("Yahalom.AnB");
  auto r = split_goals(m);
  REQUIRE(r.ok());
  REQUIRE(r.models.size() == 6);
  std::vector<Goal> concatenated;
  for (std::size_t i = 0; i < r.models.size(); ++i) {
    const auto& part = r.models[i];
    CHECK(part.name.name == "Yahalom_goal" + std::to_string(i + 1));
    REQUIRE(part.goals.size() == 1);
    concatenated.push_back(part.goals[0]);
    ProtocolModel same = part;
    same.name = m.name;
    same.goals = m.goals;
    CHECK(same == m);
  }
  CHECK(concatenated == m.goals);

  auto single = load_model("Minimal.AnB");
  CHECK(split_goals(single).diagnostics.at(0).code == "E-NO-GOALS");
}

TEST_CASE("split output files") {
  auto dir = std::filesystem::temp_directory_path() / "anbx_split_test";
  std::filesystem::remove_all(dir);
  auto r = split_goals(load_model("ThreeGoals.AnB"));
  auto paths = write_models(r.models, dir);
  REQUIRE(paths.size() == 3);
  CHECK(paths[0].filename() == "ThreeGoals_goal1.AnB");
  for (const auto& p : paths) {
    auto back = parse(SourceFile::load(p));
    REQUIRE(back.ok());
    CHECK(back.model->goals.size() == 1);
  }
  std::filesystem::remove_all(dir);
}
