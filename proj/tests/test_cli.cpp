#include <gtest/gtest.h>

#include <sstream>

#include "mair/cli.hpp"
#include "test_util.hpp"

using namespace mair;
using mair::testing::data_path;
using mair::testing::scratch_dir;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path demo_copy(const std::string& name) {
  auto dir = scratch_dir(name);
  fs::copy(fs::path(MAIR_DEMO_DIR) / "data", dir / "data", fs::copy_options::recursive);
  fs::copy_file(fs::path(MAIR_DEMO_DIR) / "mair.pipeline", dir / "mair.pipeline");
  return dir;
}

// Every file under `dir` except run state, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto rel = fs::relative(e.path(), dir).generic_string();
    if (rel.rfind(".mair/", 0) == 0) continue;
    files[rel] = text::read_file(e.path());
  }
  return files;
}

std::vector<std::string> executed(const std::string& report) {
  std::vector<std::string> out;
  std::istringstream in(report);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("executed ", 0) == 0) out.push_back(line.substr(9));
  return out;
}

} // namespace

TEST(Cli, UsageErrors) {
  EXPECT_NE(cli({}).code, 0);
  EXPECT_NE(cli({"frobnicate"}).code, 0);
  EXPECT_NE(cli({"ingest"}).code, 0);
  EXPECT_NE(cli({"graph"}).code, 0);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, IngestAndFilter) {
  auto dir = scratch_dir("cli_ingest");
  auto store = (dir / "store").string();
  auto r = cli({"--store-dir", store, "ingest", "--in", data_path("linker_papers.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("ingested 20 documents"), std::string::npos) << r.out;
  r = cli({"--store-dir", store, "ingest", "--in", data_path("linker_papers.jsonl").string()});
  EXPECT_NE(r.out.find("ingested 0 documents"), std::string::npos) << r.out;
  EXPECT_EQ(RecordStore<Document>(store_path(store, StoreKind::documents)).size(), 20u);
  auto out = (dir / "xai.jsonl").string();
  r = cli({"filter", "--store-dir", store, "--keyword", "explanation", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& line : text::split(text::read_file(out), '\n')) {
    if (!line.empty()) {
      EXPECT_TRUE(text::contains_ci(line, "explanation")) << line;
    }
  }
  text::write_file(dir / "junk.jsonl", "not json\n{}\n");
  r = cli({"--store-dir", store, "ingest", "--in", (dir / "junk.jsonl").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("empty ingest"), std::string::npos) << r.err;
}

TEST(Cli, ClassifyFunction) {
  auto dir = scratch_dir("cli_classify");
  auto csv = (dir / "confusion.csv").string();
  auto r = cli({"classify-function", "--labeled", data_path("function_titles.tsv").string(), "--confusion", csv,
                "--title", "National AI Strategy 2025"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("strategies\tNational AI Strategy 2025"), std::string::npos);
  EXPECT_NE(r.out.find("accuracy 11/12"), std::string::npos) << r.out;
  EXPECT_EQ(text::read_file(csv).rfind("true\\pred,diagnosis", 0), 0u);
}

TEST(Cli, GraphSubcommandsOnFixtures) {
  auto dir = scratch_dir("cli_graph");
  auto store = (dir / "store").string();
  ASSERT_EQ(cli({"--store-dir", store, "ingest", "--in", (fs::path(MAIR_DEMO_DIR) / "data/papers.jsonl").string()}).code, 0);
  auto cites = (fs::path(MAIR_DEMO_DIR) / "data/citations.tsv").string();
  auto graph = (dir / "c.graph").string();
  auto r = cli({"--store-dir", store, "graph", "build", "--citations", cites, "--out", graph});
  ASSERT_EQ(r.code, 0) << r.err;
  r = cli({"graph", "pagerank", "--graph", graph, "--out", (dir / "pr.csv").string(), "--damping", "0.85"});
  ASSERT_EQ(r.code, 0) << r.err;
  double sum = 0;
  auto rows = text::split(text::read_file(dir / "pr.csv"), '\n');
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!rows[i].empty()) sum += std::stod(text::split(rows[i], ',').back());
  EXPECT_NEAR(sum, 1.0, 1e-9);
  r = cli({"graph", "sweep", "--graph", graph, "--out", (dir / "s.csv").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("weighted"), std::string::npos) << r.err;
  r = cli({"--store-dir", store, "graph", "significance", "--graph", graph, "--out", (dir / "sig.json").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("no policy-cited papers"), std::string::npos) << r.err;
}

TEST(DemoPipeline, CleanRunsAreByteIdentical) {
  auto a = demo_copy("demo_a");
  auto b = demo_copy("demo_b");
  auto ra = cli({"run", "--pipeline", (a / "mair.pipeline").string()});
  auto rb = cli({"run", "--pipeline", (b / "mair.pipeline").string()});
  ASSERT_EQ(ra.code, 0) << ra.err;
  ASSERT_EQ(rb.code, 0) << rb.err;
  EXPECT_EQ(executed(ra.out), (std::vector<std::string>{"ingest", "tag-ig", "link", "graph", "analyze"}));
  EXPECT_EQ(ra.out, rb.out);
  auto sa = snapshot(a), sb = snapshot(b);
  EXPECT_EQ(sa, sb);
  EXPECT_TRUE(sa.count("store/documents.jsonl") && sa.count("store/statements.jsonl") &&
              sa.count("store/networks.jsonl") && sa.count("out/sweep.csv"));
}

TEST(DemoPipeline, EditsRerunOnlyDownstream) {
  auto dir = demo_copy("demo_edit");
  auto pipeline = (dir / "mair.pipeline").string();
  ASSERT_EQ(cli({"run", "--pipeline", pipeline}).code, 0);
  auto again = cli({"run", "--pipeline", pipeline});
  EXPECT_TRUE(executed(again.out).empty()) << again.out;

  auto cites = text::read_file(dir / "data/citations.tsv");
  text::write_file(dir / "data/citations.tsv", cites + "1909.09009\t1602.04938\n");
  EXPECT_EQ(executed(cli({"run", "--pipeline", pipeline}).out), (std::vector<std::string>{"graph"}));

  text::write_file(dir / "data/sentences.conllu", text::read_file(dir / "data/sentences.conllu") + "\n");
  EXPECT_EQ(executed(cli({"run", "--pipeline", pipeline}).out), (std::vector<std::string>{"tag-ig", "analyze"}));

  auto cached = snapshot(dir);
  auto forced = cli({"run", "--force", "--pipeline", pipeline});
  EXPECT_EQ(executed(forced.out).size(), 5u);
  EXPECT_EQ(snapshot(dir), cached);
}

TEST(DemoPipeline, StatusAndTargets) {
  auto dir = demo_copy("demo_target");
  auto pipeline = (dir / "mair.pipeline").string();
  auto r = cli({"run", "--pipeline", pipeline, "--target", "link"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(executed(r.out), (std::vector<std::string>{"ingest", "link"}));
  auto st = cli({"status", "--pipeline", pipeline});
  EXPECT_NE(st.out.find("link\tup-to-date"), std::string::npos) << st.out;
  EXPECT_NE(st.out.find("graph\tnever-run"), std::string::npos) << st.out;
  EXPECT_NE(cli({"run", "--pipeline", pipeline, "--target", "nope"}).code, 0);
}
