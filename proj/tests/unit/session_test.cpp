// Copyright 2026 The kinpgm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kinpgm/session.hpp"

#include <gtest/gtest.h>
#include <json.hpp>
#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include "kinpgm/log_io.hpp"
#include "support/fixtures.hpp"

namespace kinpgm {
namespace {

using R = Relation;

SessionConfig config(std::shared_ptr<ParaphraseStore> store = nullptr) {
  static const auto names = std::make_shared<const NameLexicon>(
      NameLexicon::load(testing::data_dir() / "names.csv"));
  if (!store) store = std::make_shared<ParaphraseStore>();
  return SessionConfig{testing::shipped_table(), nullptr, names, store};
}

std::optional<EntityId> named(const Session& s, const std::string& name,
                              int nth = 0) {
  for (const auto& [id, e] : s.world().entities()) {
    if (e.names.count(name) && nth-- == 0) return id;
  }
  return std::nullopt;
}

int count_named(const Session& s, const std::string& name) {
  int n = 0;
  for (const auto& [id, e] : s.world().entities()) {
    n += static_cast<int>(e.names.count(name));
  }
  return n;
}

bool mentions(const SayResult& r, const std::string& needle) {
  for (const auto& x : r.replies) {
    if (x.find(needle) != std::string::npos) return true;
  }
  return false;
}

TEST(Session, StartsWithNarratorOnly) {
  Session s("t", config());
  EXPECT_EQ(s.world().entities().size(), 1u);
  EXPECT_FALSE(s.pending_question());
  EXPECT_EQ(s.relations(s.narrator(), s.narrator()), RelationSet{R::Self});
  EXPECT_THROW((void)s.relations(s.narrator(), 99), std::invalid_argument);
}

TEST(Session, TwoSamsConfirmedAsDifferent) {
  Session s("t", config());
  auto r = s.say("Sam is my father and I have a brother named Sam");
  ASSERT_TRUE(r.question);
  EXPECT_EQ(r.question->kind, QuestionKind::ConfirmSplit);
  r = s.say("yes");
  EXPECT_FALSE(r.question);
  ASSERT_EQ(count_named(s, "Sam"), 2);
  const EntityId dad = *named(s, "Sam", 0);
  const EntityId bro = *named(s, "Sam", 1);
  EXPECT_EQ(s.relations(dad, s.narrator()), RelationSet{R::Parent});
  EXPECT_EQ(s.relations(bro, s.narrator()), RelationSet{R::Sibling});
  EXPECT_EQ(s.relations(dad, bro), RelationSet{R::Parent});
}

TEST(Session, TwoBillsBySeparateBindings) {
  Session s("t", config());
  auto r = s.say("My brother is named Bill and my father is named Bill");
  ASSERT_TRUE(r.question);
  EXPECT_EQ(r.question->kind, QuestionKind::ConfirmSplit);
  s.say("yes");
  EXPECT_EQ(count_named(s, "Bill"), 2);
  EXPECT_TRUE(s.world().is_stable());
}

TEST(Session, SplitRejectedRefusesFact) {
  Session s("t", config());
  s.say("Sam is my father and I have a brother named Sam");
  const auto r = s.say("no");
  EXPECT_TRUE(mentions(r, "I can't accept"));
  EXPECT_EQ(count_named(s, "Sam"), 1);
  EXPECT_TRUE(s.world().is_stable());
}

TEST(Session, MergeByComposedDescription) {
  Session s("t", config());
  s.say("My father is named Bill");
  const auto r = s.say("My mother's husband is named Bill");
  EXPECT_TRUE(mentions(r, "the same person"));
  EXPECT_EQ(count_named(s, "Bill"), 1);
  EXPECT_EQ(s.relations(*named(s, "Bill"), s.narrator()), RelationSet{R::Parent});
}

TEST(Session, AskNameThenConfirmSameness) {
  Session s("t", config());
  auto r = s.say("I have a daughter. My daughter's name is Susan.");
  // The indefinite stays apart from the described daughter.
  ASSERT_TRUE(r.question);
  EXPECT_EQ(r.question->kind, QuestionKind::AskName);
  EXPECT_EQ(r.question->text, "What is your daughter's name?");
  r = s.say("Susan");
  ASSERT_TRUE(r.question);
  EXPECT_EQ(r.question->text, "Is Susan the same person as your daughter?");
  r = s.say("Yes");
  EXPECT_FALSE(r.question);
  EXPECT_EQ(s.world().entities().size(), 2u);
  EXPECT_EQ(count_named(s, "Susan"), 1);

  Session t("u", config());
  t.say("I have a daughter.");
  r = t.say("Susan is my daughter");
  ASSERT_TRUE(r.question);
  EXPECT_EQ(r.question->kind, QuestionKind::AskName);
  r = t.say("Susan");
  ASSERT_TRUE(r.question);
  EXPECT_EQ(r.question->kind, QuestionKind::YesNoSelf);
  r = t.say("Yes");
  EXPECT_EQ(t.world().entities().size(), 2u);
  EXPECT_EQ(t.relations(*named(t, "Susan"), t.narrator()), RelationSet{R::Child});
}

TEST(Session, UnknownAnswerLearnedAndReusedAcrossSessions) {
  auto store = std::make_shared<ParaphraseStore>();
  Session a("a", config(store));
  auto r = a.say("My granddaughter's mother is named Susan");
  ASSERT_TRUE(r.question);
  EXPECT_EQ(r.question->text, "Is Susan your daughter?");
  const WorldModel before = a.world();
  r = a.say("Indeed!");
  EXPECT_TRUE(mentions(r, "don't understand"));
  EXPECT_TRUE(a.world().same_state(before));
  EXPECT_EQ(a.world().log(), before.log());
  r = a.say("Yes");
  EXPECT_TRUE(mentions(r, "remember"));
  EXPECT_EQ(a.relations(*named(a, "Susan"), a.narrator()), RelationSet{R::Child});

  Session b("b", config(store));
  r = b.say("My grandson's father is named Tom");
  ASSERT_TRUE(r.question);
  EXPECT_EQ(r.question->text, "Is Tom your son?");
  r = b.say("Indeed!");
  EXPECT_FALSE(mentions(r, "don't understand"));
  EXPECT_EQ(b.relations(*named(b, "Tom"), b.narrator()), RelationSet{R::Child});
}

TEST(Session, SlotPatternLearnedAndReused) {
  auto store = std::make_shared<ParaphraseStore>();
  Session a("a", config(store));
  a.say("My granddaughter's mother is named Susan");
  a.say("Susan is indeed my daughter");
  a.say("Yes");
  ASSERT_EQ(store->size(), 1u);
  EXPECT_EQ(store->entries().front().pattern, "{X} is indeed my daughter");

  Session b("b", config(store));
  auto r = b.say("My granddaughter's mother is named Mary");
  ASSERT_TRUE(r.question);
  r = b.say("Mary is indeed my daughter");
  EXPECT_FALSE(mentions(r, "don't understand"));
  EXPECT_EQ(b.relations(*named(b, "Mary"), b.narrator()), RelationSet{R::Child});
}

TEST(Session, SingleMentionContradictionRolledBack) {
  Session s("t", config());
  const auto start = s.world().log();
  const auto r = s.say("My father is my brother");
  EXPECT_TRUE(mentions(r, "I can't accept"));
  EXPECT_EQ(s.world().entities().size(), 1u);
  EXPECT_EQ(s.world().log(), start);
}

TEST(Session, RefusedClauseKeepsTheRest) {
  Session s("t", config());
  s.say("My father is named Bill");
  const auto r = s.say("Bill is a woman and I have a sister named Kate");
  EXPECT_TRUE(mentions(r, "clashes with a gender"));
  EXPECT_TRUE(mentions(r, "My father is named Bill"));
  EXPECT_EQ(s.world().entity(*named(s, "Bill")).gender, Gender::Male);
  ASSERT_TRUE(named(s, "Kate"));
  EXPECT_EQ(s.relations(*named(s, "Kate"), s.narrator()), RelationSet{R::Sibling});
}

TEST(Session, ClarifyAmbiguousName) {
  Session s("t", config());
  s.say("Sam is my father and I have a brother named Sam");
  s.say("yes");
  auto r = s.say("Sam's wife is named Mary");
  ASSERT_TRUE(r.question);
  EXPECT_EQ(r.question->kind, QuestionKind::ClarifyMention);
  EXPECT_EQ(r.question->options.size(), 3u);
  r = s.say("1");
  const EntityId dad = *named(s, "Sam", 0);
  ASSERT_TRUE(named(s, "Mary"));
  EXPECT_EQ(s.relations(*named(s, "Mary"), dad), RelationSet{R::Spouse});
}

TEST(Session, DeclinedQuestionIsNotRepeated) {
  Session s("t", config());
  auto r = s.say("My granddaughter's mother is named Susan");
  ASSERT_TRUE(r.question);
  r = s.say("I don't know");
  EXPECT_FALSE(r.question);
  EXPECT_EQ(s.relations(*named(s, "Susan"), s.narrator())->size(), 2u);
}

TEST(Session, GraphVersionTracksChanges) {
  Session s("t", config());
  const auto v0 = s.say("hello there").graph_version;
  const auto v1 = s.say("I have a sister named Kate").graph_version;
  EXPECT_GT(v1, v0);
  EXPECT_EQ(s.say("what?").graph_version, v1);
}

TEST(Session, SaveLoadRoundTrip) {
  Session s("t", config());
  s.say("My granddaughter's mother is named Susan");
  s.say("Indeed!");
  s.say("Sam is my father and I have a brother named Sam");

  const auto dir = std::filesystem::temp_directory_path() /
                   ("kinpgm_session_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  s.save(dir / "t.json");
  Session back = Session::load(dir / "t.json", config());
  std::filesystem::remove_all(dir);

  EXPECT_EQ(back.snapshot(), s.snapshot());
  EXPECT_EQ(back.transcript(), s.transcript());
  EXPECT_EQ(back.pending_question(), s.pending_question());
  EXPECT_EQ(back.to_json(), s.to_json());
  // Both continue identically.
  const auto r1 = s.say("yes");
  const auto r2 = back.say("yes");
  EXPECT_EQ(r1.replies, r2.replies);
  EXPECT_EQ(back.snapshot(), s.snapshot());
}

TEST(Session, MalformedSaveRejected) {
  EXPECT_THROW((void)Session::from_json("{", config()), SessionError);
  EXPECT_THROW((void)Session::from_json(R"({"format":"other"})", config()),
               SessionError);
}

TEST(LogIo, JsonlRoundTrip) {
  Session s("t", config());
  s.say("Sam is my father and I have a brother named Sam");
  s.say("yes");
  s.say("My father's wife is named Mary");
  const auto log = read_log_jsonl(write_log_jsonl(s.world().log()));
  EXPECT_EQ(log, s.world().log());
  const auto rebuilt = WorldModel::replay(testing::shipped_table(), log);
  ASSERT_TRUE(rebuilt.ok());
  EXPECT_TRUE(rebuilt.value().same_state(s.world()));
}

TEST(LogIo, BadLineNamed) {
  try {
    (void)read_log_jsonl("{}\nnot json\n");
    FAIL();
  } catch (const LogFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
  }
}

TEST(Snapshot, JsonShape) {
  Session s("t", config());
  s.say("My granddaughter's mother is named Susan");
  const auto j = nlohmann::json::parse(to_json(s.snapshot()));
  EXPECT_EQ(j["entities"].size(), 3u);
  bool ambiguous = false;
  for (const auto& e : j["edges"]) ambiguous |= e["ambiguous"].get<bool>();
  EXPECT_TRUE(ambiguous);
}

}  // namespace
}  // namespace kinpgm
