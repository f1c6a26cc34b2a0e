#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "mair/conllu.hpp"
#include "test_util.hpp"

using namespace mair;
using mair::testing::data_path;

namespace {

ConlluReadResult read_string(const std::string& s) {
  std::istringstream in(s);
  return read_conllu_stream(in);
}

std::string row(int id, const std::string& form, const std::string& upos, int head, const std::string& rel) {
  return std::to_string(id) + "\t" + form + "\t" + form + "\t" + upos + "\t_\t_\t" + std::to_string(head) +
         "\t" + rel + "\t_\t_\n";
}

} // namespace

TEST(Conllu, ReadsTwoSentenceFile) {
  auto r = read_conllu(data_path("fig2.conllu"));
  ASSERT_EQ(r.trees.size(), 2u);
  EXPECT_TRUE(r.issues.empty());
  EXPECT_EQ(r.trees[0].sent_id(), "fig2-1");
  EXPECT_EQ(r.trees[1].sent_id(), "fig2-2");
  EXPECT_EQ(r.trees[0].doc_id(), "fig2");
  EXPECT_EQ(r.trees[1].doc_id(), "fig2");
}

TEST(Conllu, FigureSentenceArcs) {
  auto tree = read_conllu(data_path("fig2.conllu")).trees.at(0);
  EXPECT_EQ(tree.root().surface, "submit");
  const std::vector<std::pair<std::string, std::string>> arcs{
      {"Designers", "nsubj"}, {"builders", "conj"}, {"manufacturers", "conj"}, {"should", "aux"},
      {"details", "dobj"},    {"documentation", "conj"}};
  for (const auto& [word, rel] : arcs) {
    auto it = std::find_if(tree.tokens().begin(), tree.tokens().end(),
                           [&](const Token& t) { return t.surface == word; });
    ASSERT_NE(it, tree.tokens().end()) << word;
    EXPECT_EQ(it->deprel, rel) << word;
  }
  EXPECT_EQ(tree.token(3).head, 1);  // builders <- Designers
  EXPECT_EQ(tree.token(5).head, 3);  // manufacturers <- builders
}

TEST(Conllu, ChildrenFiltersByRelation) {
  auto tree = read_conllu(data_path("fig2.conllu")).trees.at(0);
  auto subj = children(tree, tree.root(), "nsubj");
  ASSERT_EQ(subj.size(), 1u);
  EXPECT_EQ(subj[0].surface, "Designers");
  EXPECT_TRUE(children(tree, tree.token(2)).empty());  // "," is a leaf
  for (const auto& t : tree.tokens())
    for (const auto& c : children(tree, t)) EXPECT_EQ(c.head, t.index);
  auto all = children(tree, tree.root());
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end(),
                             [](const Token& a, const Token& b) { return a.index < b.index; }));
}

TEST(Conllu, CycleIsReportedWithSentId) {
  std::string s = "# sent_id = loop\n" + row(1, "a", "NOUN", 0, "root") + row(2, "b", "NOUN", 3, "dep") +
                  row(3, "c", "NOUN", 2, "dep") + "\n# sent_id = fine\n" + row(1, "ok", "VERB", 0, "root") + "\n";
  auto r = read_string(s);
  ASSERT_EQ(r.issues.size(), 1u);
  EXPECT_EQ(r.issues[0].sent_id, "loop");
  EXPECT_EQ(r.issues[0].line, 1u);
  ASSERT_EQ(r.trees.size(), 1u);
  EXPECT_EQ(r.trees[0].sent_id(), "fine");
}

TEST(Conllu, MultipleRootsAndBadTagsAreRejected) {
  auto r = read_string("# sent_id = two\n" + row(1, "a", "NOUN", 0, "root") + row(2, "b", "NOUN", 0, "root") +
                       "\n# sent_id = tag\n" + row(1, "a", "NN", 0, "root") + "\n");
  ASSERT_EQ(r.issues.size(), 2u);
  EXPECT_NE(r.issues[0].message.find("multiple roots"), std::string::npos);
  EXPECT_EQ(r.issues[1].sent_id, "tag");
  EXPECT_TRUE(r.trees.empty());
}

TEST(Conllu, SelfHeadAndOutOfRangeHead) {
  EXPECT_THROW(SentenceTree({Token{1, "a", "a", "NOUN", "", "", 1, "root", "", {}}}, "s", "d"), ValidationError);
  EXPECT_THROW(SentenceTree({Token{1, "a", "a", "NOUN", "", "", 0, "root", "", {}},
                             Token{2, "b", "b", "NOUN", "", "", 7, "dep", "", {}}},
                            "s", "d"),
               ValidationError);
}

TEST(Conllu, MalformedColumnCountCarriesLineNumber) {
  std::string s = "# sent_id = x\n" + row(1, "a", "NOUN", 0, "root") + "2\tb\tb\tNOUN\n";
  try {
    read_string(s);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Conllu, NormalizesUdV2LabelsAndSkipsRangesAndEmptyNodes) {
  auto r = read_conllu(data_path("udv2.conllu"));
  ASSERT_TRUE(r.issues.empty());
  ASSERT_EQ(r.trees.size(), 2u);
  EXPECT_EQ(r.trees[0].size(), 8u);
  EXPECT_EQ(r.trees[0].token(2).deprel, "nsubjpass");
  EXPECT_EQ(r.trees[0].token(4).deprel, "auxpass");
  EXPECT_EQ(r.trees[1].size(), 4u);
  EXPECT_EQ(r.trees[1].token(4).deprel, "dobj");
}

TEST(Conllu, DeprelMapIsConfigurable) {
  ConlluOptions opts;
  opts.deprel_map = {{"dobj", "obj"}};
  std::istringstream in("# sent_id = a\n" + row(1, "x", "VERB", 0, "root") + row(2, "y", "NOUN", 1, "dobj") + "\n");
  auto r = read_conllu_stream(in, opts);
  EXPECT_EQ(r.trees.at(0).token(2).deprel, "obj");
}

TEST(Conllu, MissingSentIdGetsOrdinal) {
  auto r = read_string(row(1, "a", "VERB", 0, "root") + "\n" + row(1, "b", "VERB", 0, "root"));
  ASSERT_EQ(r.trees.size(), 2u);
  EXPECT_EQ(r.trees[0].sent_id(), "1");
  EXPECT_EQ(r.trees[1].sent_id(), "2");
}

TEST(ConlluProperty, ChildCountsSumToTokensMinusOne) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 30);
    auto tree = mair::testing::random_tree(rng, n, "s" + std::to_string(trial));
    std::size_t total = 0;
    for (const auto& t : tree.tokens()) total += children(tree, t).size();
    EXPECT_EQ(total, tree.size() - 1);
  }
}

TEST(ConlluProperty, WriteThenReadIsIdentity) {
  std::mt19937_64 rng(11);
  std::vector<SentenceTree> trees;
  for (int i = 0; i < 50; ++i)
    trees.push_back(mair::testing::random_tree(rng, 1 + static_cast<int>(rng() % 20), "s" + std::to_string(i),
                                                i < 25 ? "docA" : "docB"));
  auto r = read_string(write_conllu(trees));
  EXPECT_TRUE(r.issues.empty());
  EXPECT_EQ(r.trees, trees);

  auto fixture = read_conllu(data_path("fig2.conllu")).trees;
  EXPECT_EQ(read_string(write_conllu(fixture)).trees, fixture);
}
