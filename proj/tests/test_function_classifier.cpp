#include <gtest/gtest.h>

#include "mair/function_classifier.hpp"
#include "test_util.hpp"

using namespace mair;
using mair::testing::data_path;

namespace {

class ConstantClassifier : public Classifier {
public:
  explicit ConstantClassifier(DocumentFunction f) : f_(f) {}
  DocumentFunction classify(const std::string&) const override { return f_; }

private:
  DocumentFunction f_;
};

std::vector<LabeledTitle> balanced(std::size_t per_class) {
  std::vector<LabeledTitle> out;
  for (auto f : kAllFunctions)
    for (std::size_t i = 0; i < per_class; ++i) out.push_back({std::string(to_string(f)) + " doc " + std::to_string(i), f});
  return out;
}

} // namespace

TEST(KeywordClassifier, Examples) {
  KeywordClassifier k;
  EXPECT_EQ(k.classify("National AI Strategy 2025"), DocumentFunction::strategies);
  EXPECT_EQ(k.classify("Ethics Guidelines for Trustworthy AI"), DocumentFunction::principles);
  EXPECT_EQ(k.classify("Act on the Regulation of Automated Decision Systems"), DocumentFunction::regulations);
  EXPECT_EQ(k.classify("Report on AI Readiness"), DocumentFunction::diagnosis);
}

TEST(KeywordClassifier, RuleOrderAndWholeWords) {
  KeywordClassifier k;
  EXPECT_EQ(k.classify("Draft Regulation on AI"), DocumentFunction::regulations);
  EXPECT_EQ(k.classify("Strategic Planning for Actuaries"), DocumentFunction::diagnosis);
  EXPECT_EQ(k.classify("Digital Strategies of Member States"), DocumentFunction::strategies);
  EXPECT_EQ(k.classify("ADVISORY BODIES ON AI"), DocumentFunction::body);
  EXPECT_EQ(k.classify("Bills, drafts, and proposals"), DocumentFunction::pre_regulations);
}

TEST(KeywordClassifier, Deterministic) {
  KeywordClassifier k;
  for (const auto& t : read_labeled_titles(data_path("function_titles.tsv")))
    EXPECT_EQ(k.classify(t.title), k.classify(t.title));
}

TEST(LabeledTitles, ParseAndErrors) {
  auto rows = read_labeled_titles(data_path("function_titles.tsv"));
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[3].label, DocumentFunction::pre_regulations);
  EXPECT_EQ(parse_labeled_titles("A\tpre-regulations\n")[0].label, DocumentFunction::pre_regulations);
  try {
    parse_labeled_titles("ok\tbody\nno tab here\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_labeled_titles("x\tpolicy\n"), ParseError);
  EXPECT_THROW(parse_labeled_titles("\tbody\n"), ParseError);
}

TEST(Evaluate, PerfectPredictorIsDiagonal) {
  auto set = balanced(4);
  PredictionFileClassifier perfect(set);
  auto m = evaluate(set, perfect);
  EXPECT_EQ(m.total(), set.size());
  EXPECT_EQ(m.accuracy(), 1.0);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(m.counts[i][j], i == j ? 4u : 0u);
}

TEST(Evaluate, ConstantPredictorOnBalancedSet) {
  auto set = balanced(7);
  for (auto f : kAllFunctions) {
    auto m = evaluate(set, ConstantClassifier(f));
    EXPECT_EQ(m.trace() * 6, m.total());
    EXPECT_EQ(m.accuracy(), 1.0 / 6.0);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(m.counts[i][function_slot(f)], 7u);
  }
}

TEST(Evaluate, BaselineOnFixture) {
  auto set = read_labeled_titles(data_path("function_titles.tsv"));
  auto m = evaluate(set, KeywordClassifier());
  EXPECT_EQ(m.total(), 12u);
  // "Proposal for a Regulation ..." fires the regulations rule first.
  EXPECT_EQ(m.trace(), 11u);
  EXPECT_EQ(m.counts[function_slot(DocumentFunction::pre_regulations)][function_slot(DocumentFunction::regulations)], 1u);
  EXPECT_THROW(evaluate({}, KeywordClassifier()), Error);
}

TEST(PredictionFile, LookupNormalizesTitles) {
  PredictionFileClassifier p({{"Ethics Guidelines for Trustworthy AI", DocumentFunction::principles}});
  EXPECT_EQ(p.classify("ethics guidelines  for trustworthy AI."), DocumentFunction::principles);
  EXPECT_THROW(p.classify("unknown"), NotFoundError);
  EXPECT_THROW(PredictionFileClassifier({{"a", DocumentFunction::body}, {"A", DocumentFunction::diagnosis}}), Error);
}

TEST(ConfusionCsv, Layout) {
  auto set = balanced(1);
  auto csv = confusion_csv(evaluate(set, ConstantClassifier(DocumentFunction::body)));
  auto lines = text::split(csv, '\n');
  EXPECT_EQ(lines[0], "true\\pred,diagnosis,principles,strategies,pre_regulations,regulations,body");
  EXPECT_EQ(lines[1], "diagnosis,0,0,0,0,0,1");
  EXPECT_EQ(lines[6], "body,0,0,0,0,0,1");
  EXPECT_EQ(lines[7].substr(0, 9), "accuracy,");
  EXPECT_DOUBLE_EQ(std::stod(lines[7].substr(9)), 1.0 / 6.0);
}
