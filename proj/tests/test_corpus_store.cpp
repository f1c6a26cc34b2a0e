#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "mair/corpus.hpp"
#include "mair/store.hpp"
#include "test_util.hpp"

using namespace mair;
using mair::testing::data_path;
using mair::testing::scratch_dir;

namespace {

IngestResult ingest_string(const std::string& s, std::optional<Source> src = {}) {
  std::istringstream in(s);
  return ingest_stream(in, src);
}

Document random_document(std::mt19937_64& rng, int i) {
  static const std::vector<std::string> words{"AI", "ethics", "strategy", "über", "model", "\"quoted\"",
                                              "line\nbreak", "tab\tchar", "policy", "Łódź"};
  auto phrase = [&](int n) {
    std::string s;
    for (int k = 0; k < n; ++k) s += (k ? " " : "") + words[rng() % words.size()];
    return s;
  };
  Document d;
  d.id = "doc-" + std::to_string(i);
  d.kind = rng() % 2 ? DocKind::paper : DocKind::policy;
  d.source = d.kind == DocKind::paper ? Source::arxiv : (rng() % 2 ? Source::oecd : Source::nesta);
  d.title = phrase(1 + static_cast<int>(rng() % 6));
  for (int a = 0, n = static_cast<int>(rng() % 3); a < n; ++a) d.authors.push_back(phrase(2));
  if (rng() % 2) d.year = 1990 + static_cast<int>(rng() % 35);
  if (rng() % 2) d.body_text = phrase(20);
  if (rng() % 3 == 0) d.abstract = phrase(8);
  if (rng() % 4 == 0) d.journal_ref = phrase(3);
  if (rng() % 4 == 0) d.latex_source = "\\affil{" + phrase(3) + "}";
  if (rng() % 2) d.categories = {"cs.AI", "stat.ML"};
  if (rng() % 2) d.function = kAllFunctions[rng() % 6];
  if (rng() % 3 == 0) d.url = "https://example.org/" + std::to_string(i);
  if (rng() % 3 == 0) d.affiliations.push_back({d.id, "MI2 Lab", "Warsaw University of Technology",
                                                 Sector::academia, AffiliationEvidence::alias_table});
  return d;
}

} // namespace

TEST(Ingest, DuplicateTitleIsDropped) {
  auto r = ingest_string(
      R"({"id":"a","source":"oecd","kind":"policy","title":"AI  Strategy"})"
      "\n"
      R"({"id":"b","source":"oecd","kind":"policy","title":"ai strategy"})"
      "\n"
      R"({"id":"c","source":"nesta","kind":"policy","title":"AI Strategy"})"
      "\n");
  ASSERT_EQ(r.documents.size(), 2u);
  EXPECT_EQ(r.documents[0].id, "a");
  EXPECT_EQ(r.documents[1].id, "c");
  EXPECT_EQ(r.duplicates, 1u);
}

TEST(Ingest, EmptyFileIsAnError) {
  auto dir = scratch_dir("ingest_empty");
  std::ofstream(dir / "empty.jsonl") << "";
  EXPECT_THROW(ingest(dir / "empty.jsonl"), EmptyIngestError);
  EXPECT_THROW(ingest_string("not json\n"), EmptyIngestError);
}

TEST(Ingest, UnreadableFileIsIoError) {
  EXPECT_THROW(ingest("/nonexistent/dump.jsonl"), IoError);
}

TEST(Ingest, MalformedRecordsAreSkippedAndCounted) {
  auto r = ingest_string(
      "{broken\n"
      R"({"id":"p","source":"oecd","kind":"paper","title":"bad kind"})"
      "\n"
      R"({"id":"y","source":"oecd","title":"bad year","year":1200})"
      "\n"
      R"({"id":"ok","source":"arxiv","kind":"paper","title":"Fine"})"
      "\n\n");
  EXPECT_EQ(r.documents.size(), 1u);
  EXPECT_EQ(r.malformed, 3u);
}

TEST(Ingest, MixedPolicyFixture) {
  auto r = ingest(data_path("policies10.jsonl"));
  ASSERT_EQ(r.documents.size(), 10u);
  const std::vector<std::pair<std::string, Source>> expected{
      {"oecd-001", Source::oecd},  {"oecd-002", Source::oecd},   {"nesta-001", Source::nesta},
      {"oecd-003", Source::oecd},  {"nesta-002", Source::nesta}, {"nesta-003", Source::nesta},
      {"oecd-004", Source::oecd},  {"nesta-004", Source::nesta}, {"oecd-005", Source::oecd},
      {"nesta-005", Source::nesta}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(r.documents[i].id, expected[i].first);
    EXPECT_EQ(r.documents[i].source, expected[i].second);
    EXPECT_EQ(r.documents[i].kind, DocKind::policy);
  }
  EXPECT_EQ(r.documents[0].title, "National Artificial Intelligence Strategy");
  EXPECT_EQ(r.documents[0].year, 2019);
  EXPECT_EQ(r.documents[2].authors, (std::vector<std::string>{"Jane Smith", "Tom Brown"}));
  EXPECT_FALSE(r.documents[1].year.has_value());
  EXPECT_EQ(r.documents[4].url, "https://example.org/nesta-002");
}

TEST(Ingest, DefaultSourceFillsMissingField) {
  auto r = ingest_string(R"({"id":"x","title":"Untagged"})"
                         "\n",
                         Source::nesta);
  EXPECT_EQ(r.documents.at(0).source, Source::nesta);
  EXPECT_EQ(r.documents.at(0).kind, DocKind::policy);
}

TEST(Ingest, ReingestingOutputAddsNothing) {
  auto first = ingest(data_path("policies10.jsonl")).documents;
  std::string dump;
  for (const auto& d : first) dump += nlohmann::json(d).dump() + "\n";
  auto second = ingest_string(dump).documents;
  EXPECT_EQ(second, first);
  EXPECT_TRUE(new_documents(first, second).empty());
}

TEST(Filter, KeywordOnTitle) {
  Document d;
  d.title = "Interpretable Machine Learning survey";
  EXPECT_EQ(filter_corpus({d}, arxiv_xai_filter()).size(), 1u);
}

TEST(Filter, CategoryMatch) {
  Document d;
  d.title = "Segmentation";
  d.categories = {"cs.CV"};
  CorpusFilter f;
  f.categories = {"cs.CV"};
  EXPECT_EQ(filter_corpus({d}, f).size(), 1u);
  EXPECT_EQ(filter_corpus({d}, arxiv_ai_filter()).size(), 1u);
}

TEST(Filter, NoMatchIsDropped) {
  Document d;
  d.title = "Protein folding";
  d.categories = {"q-bio.BM"};
  EXPECT_TRUE(filter_corpus({d}, arxiv_ai_filter()).empty());
  EXPECT_TRUE(filter_corpus({d}, arxiv_xai_filter()).empty());
}

TEST(Filter, MatchFieldsAreRespected) {
  Document d;
  d.title = "A study";
  d.abstract = "We discuss transparency of models.";
  auto f = arxiv_xai_filter();
  EXPECT_EQ(filter_corpus({d}, f).size(), 1u);
  f.match_fields = {MatchField::title};
  EXPECT_TRUE(filter_corpus({d}, f).empty());
  d.journal_ref = "Proc. Fairness Workshop";
  f.match_fields = {MatchField::journal_ref};
  EXPECT_EQ(filter_corpus({d}, f).size(), 1u);
}

TEST(FilterProperty, AddingKeywordIsMonotoneAndOrderStable) {
  std::mt19937_64 rng(5);
  std::vector<Document> docs;
  for (int i = 0; i < 300; ++i) docs.push_back(random_document(rng, i));
  const std::vector<std::string> pool{"ethics", "model", "AI", "policy", "Łódź", "strategy"};
  for (int trial = 0; trial < 50; ++trial) {
    CorpusFilter f;
    f.keywords.insert(pool[rng() % pool.size()]);
    auto before = filter_corpus(docs, f);
    f.keywords.insert(pool[rng() % pool.size()]);
    auto after = filter_corpus(docs, f);
    for (const auto& d : before)
      EXPECT_NE(std::find(after.begin(), after.end(), d), after.end());
    // Stable order: ids appear in input order.
    for (std::size_t i = 1; i < after.size(); ++i)
      EXPECT_LT(std::stoi(after[i - 1].id.substr(4)), std::stoi(after[i].id.substr(4)));
  }
}

TEST(Store, PutGetScan) {
  auto dir = scratch_dir("store_basic");
  RecordStore<Document> store(store_path(dir, StoreKind::documents));
  std::mt19937_64 rng(1);
  auto a = random_document(rng, 1), b = random_document(rng, 2), c = random_document(rng, 3);
  store.put(a);
  store.put(b);
  store.put(c);
  EXPECT_EQ(store.get("doc-2"), b);
  EXPECT_THROW(store.get("missing"), NotFoundError);
  auto all = store.scan();
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0], a);
  EXPECT_EQ(all[2], c);

  RecordStore<Document> reopened(store_path(dir, StoreKind::documents));
  EXPECT_EQ(reopened.scan(), all);
}

TEST(Store, LaterPutSupersedesInPlace) {
  auto dir = scratch_dir("store_update");
  RecordStore<Document> store(dir / "documents.jsonl");
  std::mt19937_64 rng(2);
  auto a = random_document(rng, 1), b = random_document(rng, 2);
  store.put(a);
  store.put(b);
  a.title = "Updated";
  store.put(a);
  RecordStore<Document> reopened(dir / "documents.jsonl");
  ASSERT_EQ(reopened.size(), 2u);
  EXPECT_EQ(reopened.scan()[0].title, "Updated");
  reopened.replace_all(reopened.scan());
  EXPECT_EQ(text::split(text::read_file(dir / "documents.jsonl"), '\n').size(), 3u);
}

TEST(Store, CorruptLineIsParseErrorWithLine) {
  auto dir = scratch_dir("store_corrupt");
  std::ofstream(dir / "documents.jsonl") << R"({"id":"a","source":"arxiv","title":"x"})" << "\n{oops\n";
  try {
    RecordStore<Document> store(dir / "documents.jsonl");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(StoreProperty, RoundTripIsBitIdentical) {
  auto dir = scratch_dir("store_roundtrip");
  std::mt19937_64 rng(99);
  std::vector<Document> docs;
  {
    RecordStore<Document> store(dir / "documents.jsonl");
    for (int i = 0; i < 500; ++i) {
      docs.push_back(random_document(rng, i));
      store.put(docs.back());
    }
  }
  RecordStore<Document> reopened(dir / "documents.jsonl");
  auto back = reopened.scan();
  ASSERT_EQ(back.size(), docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    EXPECT_EQ(back[i], docs[i]);
    EXPECT_EQ(RecordStore<Document>::serialize(back[i]), RecordStore<Document>::serialize(docs[i]));
  }
}
