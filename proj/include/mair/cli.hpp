#pragma once

// Command-line front end. `run_cli` is callable in-process; pipeline stages
// re-enter it with the arguments of their `cmd` line.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mair/affiliation.hpp"
#include "mair/conllu.hpp"
#include "mair/corpus.hpp"
#include "mair/deontic_analytics.hpp"
#include "mair/function_classifier.hpp"
#include "mair/graph.hpp"
#include "mair/ig_tagger.hpp"
#include "mair/linker.hpp"
#include "mair/pipeline.hpp"
#include "mair/store.hpp"

namespace mair {

struct GlobalOptions {
  std::string store_dir = "store";
  std::uint64_t seed = 0;
  bool offline = false;
  unsigned threads = 1;
};

namespace cli_detail {

namespace fs = std::filesystem;

inline RecordStore<Document> documents(const GlobalOptions& g) {
  return RecordStore<Document>(store_path(g.store_dir, StoreKind::documents));
}
inline RecordStore<IgStatement> statements(const GlobalOptions& g) {
  return RecordStore<IgStatement>(store_path(g.store_dir, StoreKind::statements));
}
inline RecordStore<LinkEvidence> networks(const GlobalOptions& g) {
  return RecordStore<LinkEvidence>(store_path(g.store_dir, StoreKind::networks));
}

inline std::vector<Document> of_kind(const std::vector<Document>& docs, DocKind kind) {
  std::vector<Document> out;
  for (const auto& d : docs)
    if (d.kind == kind) out.push_back(d);
  return out;
}

inline std::map<std::string, int> policy_counts(const GlobalOptions& g) {
  auto path = store_path(g.store_dir, StoreKind::networks);
  if (!fs::exists(path)) return {};
  return policy_citation_counts(networks(g).scan());
}

inline std::vector<SentenceTree> read_trees(const std::vector<std::string>& files, std::ostream& err) {
  std::vector<SentenceTree> trees;
  for (const auto& f : files) {
    auto result = read_conllu(f);
    for (const auto& issue : result.issues)
      err << "warning: " << f << ":" << issue.line << ": " << issue.sent_id << ": " << issue.message << '\n';
    for (auto& t : result.trees) trees.push_back(std::move(t));
  }
  return trees;
}

inline std::vector<double> parse_thetas(const std::string& spec) {
  auto parts = text::split(spec, ':');
  if (parts.size() == 3) return theta_grid(std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]));
  std::vector<double> out;
  for (const auto& p : text::split(spec, ','))
    if (!text::trim(p).empty()) out.push_back(std::stod(std::string(text::trim(p))));
  return out;
}

inline std::vector<std::string> comma_list(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& p : text::split(s, ','))
    if (!text::trim(p).empty()) out.emplace_back(text::trim(p));
  return out;
}

struct IngestArgs {
  std::vector<std::string> inputs;
  std::string source;
  bool replace = false;
};

inline void cmd_ingest(const GlobalOptions& g, const IngestArgs& a, std::ostream& out) {
  std::optional<Source> source;
  if (!a.source.empty()) {
    source = parse_source(a.source);
    if (!source) throw Error("unknown source '" + a.source + "'");
  }
  std::vector<Document> incoming;
  std::size_t malformed = 0, duplicates = 0;
  for (const auto& path : a.inputs) {
    auto r = ingest(path, source);
    malformed += r.malformed;
    duplicates += r.duplicates;
    for (auto& d : r.documents) incoming.push_back(std::move(d));
  }
  auto store = documents(g);
  auto fresh = new_documents(a.replace ? std::vector<Document>{} : store.scan(), incoming);
  duplicates += incoming.size() - fresh.size();
  if (a.replace) store.replace_all(fresh);
  else store.put_all(fresh);
  out << "ingested " << fresh.size() << " documents (" << malformed << " malformed, " << duplicates
      << " duplicates); store holds " << store.size() << '\n';
}

struct FilterArgs {
  std::string preset;
  std::vector<std::string> categories;
  std::vector<std::string> keywords;
  std::string out;
};

inline void cmd_filter(const GlobalOptions& g, const FilterArgs& a, std::ostream& out) {
  CorpusFilter f;
  if (a.preset == "ai") f = arxiv_ai_filter();
  else if (a.preset == "xai") f = arxiv_xai_filter();
  else if (!a.preset.empty()) throw Error("unknown preset '" + a.preset + "'");
  f.categories.insert(a.categories.begin(), a.categories.end());
  f.keywords.insert(a.keywords.begin(), a.keywords.end());
  if (!f.valid()) throw Error("filter needs a preset, a category or a keyword");
  auto kept = filter_corpus(documents(g).scan(), f);
  std::string data;
  for (const auto& d : kept) data += RecordStore<Document>::serialize(d) + "\n";
  text::write_file(a.out, data);
  out << "kept " << kept.size() << " documents\n";
}

struct TagArgs {
  std::vector<std::string> conllu;
  std::string lexicon;
  bool no_conj = false;
};

inline void cmd_tag(const GlobalOptions& g, const TagArgs& a, std::ostream& out, std::ostream& err) {
  auto lex = a.lexicon.empty() ? DeonticLexicon::defaults() : DeonticLexicon::load(a.lexicon);
  auto trees = read_trees(a.conllu, err);
  TaggerOptions opts;
  opts.conj_descend = !a.no_conj;
  auto report = tag_corpus(documents(g).scan(), trees, lex, opts, g.threads);
  for (const auto& f : report.failures) err << "warning: " << f << '\n';
  statements(g).replace_all(report.statements);
  out << "tagged " << report.statements.size() << " statements from " << report.deontic_hits
      << " deontic tokens (" << report.without_aim << " without aim, " << report.orphan_sentences
      << " orphan sentences)\n";
}

struct AffiliationArgs {
  std::string aliases;
  std::string kb_endpoint;
  std::string kb_cache;
};

inline void cmd_affiliations(const GlobalOptions& g, const AffiliationArgs& a, std::ostream& out,
                             std::ostream& err) {
  AliasTable table = a.aliases.empty() ? AliasTable{} : AliasTable::load(a.aliases);
  std::unique_ptr<KbClient> kb;
  if (!a.kb_endpoint.empty() || !a.kb_cache.empty()) {
    fs::path cache = a.kb_cache.empty() ? fs::path(g.store_dir) / "kb_cache" : fs::path(a.kb_cache);
    kb = std::make_unique<HttpKbClient>(a.kb_endpoint, cache, g.offline || a.kb_endpoint.empty());
  }
  auto store = documents(g);
  auto docs = store.scan();
  auto warnings = annotate_affiliations(docs, table, kb.get(), g.threads);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  store.replace_all(docs);
  std::size_t papers = 0, records = 0;
  for (const auto& d : docs)
    if (d.latex_source) {
      ++papers;
      records += d.affiliations.size();
    }
  out << "extracted " << records << " affiliation records from " << papers << " documents\n";
}

struct LinkArgs {
  std::size_t min_title_len = 20;
  std::size_t author_window = 300;
  bool all_text = false;
  std::string csv;
};

inline void cmd_link(const GlobalOptions& g, const LinkArgs& a, std::ostream& out) {
  auto docs = documents(g).scan();
  LinkOptions opts;
  opts.min_title_len = a.min_title_len;
  opts.author_window = a.author_window;
  opts.bibliography_only = !a.all_text;
  opts.threads = g.threads;
  auto graph = extract_links(of_kind(docs, DocKind::policy), PaperIndex(of_kind(docs, DocKind::paper)), opts);
  networks(g).replace_all(graph.links());
  if (!a.csv.empty()) text::write_file(a.csv, links_csv(graph.links()));
  auto s = graph_stats(graph);
  out << "linked " << s.n_links << " citations: " << s.n_citing_policies << " policies cite " << s.n_cited_papers
      << " papers\n";
}

struct GraphBuildArgs {
  std::string citations;
  std::string out;
  std::string matrix;
  std::string dot;
};

inline void cmd_graph_build(const GlobalOptions& g, const GraphBuildArgs& a, std::ostream& out) {
  auto papers = of_kind(documents(g).scan(), DocKind::paper);
  auto build = build_citation_graph(papers, read_citations(a.citations), policy_counts(g));
  text::write_file(a.out, write_graph(build.graph));
  if (!a.matrix.empty()) text::write_file(a.matrix, affiliation_matrix_csv(degree_breakdown(build.graph)));
  if (!a.dot.empty()) text::write_file(a.dot, to_dot(build.graph));
  out << "citation graph: " << build.graph.node_count() << " nodes, " << build.graph.edge_count() << " edges ("
      << build.dropped_dangling << " dangling, " << build.dropped_self << " self, " << build.duplicate_edges
      << " duplicate records dropped)\n";
}

struct PageRankArgs {
  std::string graph;
  std::string out;
  double damping = 0.85;
  double tol = 1e-10;
  int max_iter = 200;

  PageRankOptions options() const { return {damping, tol, max_iter}; }
};

inline void cmd_graph_pagerank(const PageRankArgs& a, std::ostream& out) {
  auto g = read_graph(text::read_file(a.graph));
  auto scores = pagerank(g, a.options());
  std::string csv = "id,affiliation,year,policy_citations,pagerank\n";
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto& n = g.node(i);
    csv += text::csv_field(n.id) + "," + to_string(n.affiliation) + "," + (n.year ? std::to_string(*n.year) : "") +
           "," + std::to_string(n.policy_citations) + "," + text::format_double(scores[i]) + "\n";
  }
  text::write_file(a.out, csv);
  out << "pagerank over " << g.node_count() << " nodes\n";
}

struct SignificanceArgs {
  PageRankArgs pr;
  std::size_t samples = 10000;
  bool with_replacement = false;
  std::string samples_csv;
};

inline void cmd_graph_significance(const GlobalOptions& g, const SignificanceArgs& a, std::ostream& out,
                                   std::ostream& err) {
  auto graph = read_graph(text::read_file(a.pr.graph));
  auto docs = documents(g);
  std::vector<CitedNode> cited;
  std::size_t no_year = 0, outside = 0;
  for (const auto& link : networks(g).scan()) {
    auto node = graph.find(link.paper_id);
    if (!node) {
      ++outside;
      continue;
    }
    auto policy = docs.get(link.policy_id);
    if (!policy.year) {
      ++no_year;
      continue;
    }
    cited.push_back({*node, *policy.year});
  }
  if (no_year) err << "warning: " << no_year << " citations skipped: citing policy has no year\n";
  if (cited.empty()) throw Error("no policy-cited papers in the graph");
  SignificanceOptions opts;
  opts.samples = a.samples;
  opts.seed = g.seed;
  opts.without_replacement = !a.with_replacement;
  opts.threads = g.threads;
  auto result = pagerank_significance(graph, cited, opts, a.pr.options());
  nlohmann::json j{{"cited", cited.size()},
                   {"cited_outside_graph", outside},
                   {"observed_sum", result.observed_sum},
                   {"p_value", result.p_value},
                   {"samples", a.samples},
                   {"seed", g.seed},
                   {"without_replacement", opts.without_replacement}};
  text::write_file(a.pr.out, j.dump(2) + "\n");
  if (!a.samples_csv.empty()) {
    std::string csv = "sample,sum\n";
    for (std::size_t i = 0; i < result.sample_sums.size(); ++i)
      csv += std::to_string(i) + "," + text::format_double(result.sample_sums[i]) + "\n";
    text::write_file(a.samples_csv, csv);
  }
  out << "observed " << text::format_double(result.observed_sum) << " over " << cited.size() << " cited papers, p = "
      << text::format_double(result.p_value) << '\n';
}

struct CoupleArgs {
  std::string citations;
  std::string out;
  std::string dot;
};

inline void cmd_graph_couple(const GlobalOptions& g, const CoupleArgs& a, std::ostream& out) {
  auto papers = of_kind(documents(g).scan(), DocKind::paper);
  auto graph = bibliographic_coupling(reference_lists(papers, read_citations(a.citations), policy_counts(g)));
  text::write_file(a.out, write_graph(graph));
  if (!a.dot.empty()) text::write_file(a.dot, to_dot(graph));
  out << "coupling graph: " << graph.node_count() << " nodes, " << graph.edge_count() << " edges\n";
}

struct SweepArgs {
  std::string graph;
  std::string thetas = "0:1:0.05";
  std::string out;
};

inline void cmd_graph_sweep(const SweepArgs& a, std::ostream& out) {
  auto graph = read_graph(text::read_file(a.graph));
  auto sweep = threshold_sweep(graph, parse_thetas(a.thetas));
  text::write_file(a.out, sweep_csv(sweep));
  out << "swept " << sweep.size() << " thresholds";
  if (auto theta = breakdown_threshold(sweep)) out << "; breakdown at theta = " << text::format_double(*theta);
  out << '\n';
}

struct AnalyzeArgs {
  std::string objects;
  std::size_t min_count = kDefaultMinCount;
  std::string pivot;
  std::vector<std::string> conllu;
  std::size_t depth = 3;
  std::string direction = "forward";
  std::string out_dir;
};

inline void cmd_analyze(const GlobalOptions& g, const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  auto kept = without_negated(statements(g).scan());
  auto objects = a.objects.empty() ? default_focal_objects() : comma_list(a.objects);
  fs::path dir(a.out_dir);
  auto freq = object_frequencies(kept, a.min_count);
  auto profiles = deontic_profiles(kept, objects);
  text::write_file(dir / "object_frequencies.csv", object_frequencies_csv(freq));
  text::write_file(dir / "deontic_profiles.csv", deontic_profiles_csv(profiles));
  out << "analyzed " << kept.size() << " statements: " << freq.size() << " frequent objects, " << profiles.size()
      << " profiles\n";
  if (a.pivot.empty()) return;
  if (a.conllu.empty()) throw Error("--pivot needs --conllu sentences");
  WordTreeDirection dir_kind;
  if (a.direction == "forward") dir_kind = WordTreeDirection::forward;
  else if (a.direction == "backward") dir_kind = WordTreeDirection::backward;
  else throw Error("direction must be forward or backward");
  std::vector<std::vector<std::string>> sentences;
  for (const auto& t : read_trees(a.conllu, err)) {
    std::vector<std::string> forms;
    for (const auto& tok : t.tokens()) forms.push_back(tok.surface);
    sentences.push_back(std::move(forms));
  }
  auto tree = word_tree(sentences, a.pivot, dir_kind, a.depth);
  text::write_file(dir / "word_tree.json", to_json(tree).dump(2) + "\n");
  out << "word tree for '" << tree.pivot << "': " << tree.root.count << " occurrences\n";
}

struct ClassifyArgs {
  std::string labeled;
  std::string predictions;
  std::string confusion;
  std::vector<std::string> titles;
  bool annotate = false;
};

inline void cmd_classify(const GlobalOptions& g, const ClassifyArgs& a, std::ostream& out) {
  std::unique_ptr<Classifier> model;
  if (a.predictions.empty()) model = std::make_unique<KeywordClassifier>();
  else model = std::make_unique<PredictionFileClassifier>(PredictionFileClassifier::load(a.predictions));
  for (const auto& t : a.titles) out << to_string(model->classify(t)) << '\t' << t << '\n';
  if (!a.labeled.empty()) {
    auto m = evaluate(read_labeled_titles(a.labeled), *model);
    if (!a.confusion.empty()) text::write_file(a.confusion, confusion_csv(m));
    out << "accuracy " << m.trace() << "/" << m.total() << " = " << text::format_double(m.accuracy()) << '\n';
  }
  if (a.annotate) {
    auto store = documents(g);
    auto docs = store.scan();
    std::size_t n = 0;
    for (auto& d : docs)
      if (d.kind == DocKind::policy) {
        d.function = model->classify(d.title);
        ++n;
      }
    store.replace_all(docs);
    out << "labeled " << n << " policy documents\n";
  }
}

struct RunArgs {
  std::string pipeline = "mair.pipeline";
  std::vector<std::string> targets;
  bool force = false;
};

} // namespace cli_detail

int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr);

namespace cli_detail {

// Runs each stage's cmd through run_cli with the pipeline directory as the
// working directory.
inline StageRunner in_process_runner(std::ostream& out, std::ostream& err) {
  return [&out, &err](const Stage& stage, const fs::path& root) {
    for (const auto& cmd : stage.cmds) {
      auto args = split_command(cmd);
      if (!args.empty() && args.front() == "mair") args.erase(args.begin());
      auto previous = fs::current_path();
      fs::current_path(root);
      int code;
      try {
        code = run_cli(args, out, err);
      } catch (...) {
        fs::current_path(previous);
        throw;
      }
      fs::current_path(previous);
      if (code != 0) throw Error("stage '" + stage.name + "' failed with exit code " + std::to_string(code) + ": " + cmd);
    }
  };
}

inline void cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  auto p = Pipeline::load(a.pipeline);
  auto report = run(p, in_process_runner(out, err), {a.targets, a.force});
  for (const auto& s : report.stages) {
    out << (s.executed ? "executed " : "skipped  ") << s.name << '\n';
    for (const auto& [path, digest] : s.outs) out << "  " << digest << "  " << path << '\n';
  }
  out << report.executed().size() << " executed, " << report.skipped().size() << " skipped\n";
}

inline void cmd_status(const RunArgs& a, std::ostream& out) {
  for (const auto& s : status(Pipeline::load(a.pipeline))) out << s.name << '\t' << to_string(s.state) << '\n';
}

} // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  CLI::App app{"Corpus-mining toolkit for policy and research documents", "mair"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--store-dir", g.store_dir, "Directory of the documents/statements/networks stores");
  app.add_option("--seed", g.seed, "Seed for randomized procedures");
  app.add_flag("--offline", g.offline, "Forbid network access");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);

  std::function<void()> action;

  IngestArgs ingest_a;
  auto* ingest_c = app.add_subcommand("ingest", "Load a JSONL dump into the documents store");
  ingest_c->add_option("--in", ingest_a.inputs, "Dump file (repeatable)")->required()->check(CLI::ExistingFile);
  ingest_c->add_option("--source", ingest_a.source, "Source for records without one (oecd|nesta|arxiv)");
  ingest_c->add_flag("--replace", ingest_a.replace, "Replace the store contents instead of appending");
  ingest_c->callback([&] { action = [&] { cmd_ingest(g, ingest_a, out); }; });

  FilterArgs filter_a;
  auto* filter_c = app.add_subcommand("filter", "Select documents by category or keyword");
  filter_c->add_option("--preset", filter_a.preset, "ai or xai");
  filter_c->add_option("--category", filter_a.categories, "Category (repeatable)");
  filter_c->add_option("--keyword", filter_a.keywords, "Keyword (repeatable)");
  filter_c->add_option("--out", filter_a.out, "Output JSONL")->required();
  filter_c->callback([&] { action = [&] { cmd_filter(g, filter_a, out); }; });

  TagArgs tag_a;
  auto* tag_c = app.add_subcommand("tag-ig", "Extract IG statements from parsed sentences");
  tag_c->add_option("--conllu", tag_a.conllu, "CoNLL-U file (repeatable)")->required()->check(CLI::ExistingFile);
  tag_c->add_option("--deontic-lexicon", tag_a.lexicon, "surface<TAB>class lexicon")->check(CLI::ExistingFile);
  tag_c->add_flag("--no-conj", tag_a.no_conj, "Do not descend into conjoined verbs");
  tag_c->callback([&] { action = [&] { cmd_tag(g, tag_a, out, err); }; });

  AffiliationArgs aff_a;
  auto* aff_c = app.add_subcommand("extract-affiliations", "Attach affiliation records to documents");
  aff_c->add_option("--aliases", aff_a.aliases, "Alias table file")->check(CLI::ExistingFile);
  aff_c->add_option("--kb-endpoint", aff_a.kb_endpoint, "Knowledge-base lookup URL");
  aff_c->add_option("--kb-cache", aff_a.kb_cache, "Knowledge-base response cache directory");
  aff_c->callback([&] { action = [&] { cmd_affiliations(g, aff_a, out, err); }; });

  LinkArgs link_a;
  auto* link_c = app.add_subcommand("link", "Find policy-to-paper citations");
  link_c->add_option("--min-title-len", link_a.min_title_len, "Shortest title matched by text");
  link_c->add_option("--author-window", link_a.author_window, "Characters searched for an author name");
  link_c->add_flag("--all-text", link_a.all_text, "Match titles in the whole body, not only the bibliography");
  link_c->add_option("--csv", link_a.csv, "Also write the edge list as CSV");
  link_c->callback([&] { action = [&] { cmd_link(g, link_a, out); }; });

  auto* graph_c = app.add_subcommand("graph", "Citation and coupling network analysis");
  graph_c->require_subcommand(1);

  GraphBuildArgs build_a;
  auto* build_c = graph_c->add_subcommand("build", "Build the paper citation graph");
  build_c->add_option("--citations", build_a.citations, "citing<TAB>cited file")->required()->check(CLI::ExistingFile);
  build_c->add_option("--out", build_a.out, "Graph file")->required();
  build_c->add_option("--matrix", build_a.matrix, "Affiliation degree matrix CSV");
  build_c->add_option("--dot", build_a.dot, "DOT export");
  build_c->callback([&] { action = [&] { cmd_graph_build(g, build_a, out); }; });

  auto add_pagerank_options = [](CLI::App* c, PageRankArgs& a) {
    c->add_option("--graph", a.graph, "Graph file")->required()->check(CLI::ExistingFile);
    c->add_option("--out", a.out, "Output file")->required();
    c->add_option("--damping", a.damping, "Damping factor")->check(CLI::Range(0.0, 1.0));
    c->add_option("--tol", a.tol, "L1 convergence tolerance");
    c->add_option("--max-iter", a.max_iter, "Iteration cap");
  };

  PageRankArgs pr_a;
  auto* pr_c = graph_c->add_subcommand("pagerank", "PageRank scores as CSV");
  add_pagerank_options(pr_c, pr_a);
  pr_c->callback([&] { action = [&] { cmd_graph_pagerank(pr_a, out); }; });

  SignificanceArgs sig_a;
  auto* sig_c = graph_c->add_subcommand("significance", "PageRank of policy-cited papers against random draws");
  add_pagerank_options(sig_c, sig_a.pr);
  sig_c->add_option("--samples", sig_a.samples, "Number of random samples")->check(CLI::PositiveNumber);
  sig_c->add_flag("--with-replacement", sig_a.with_replacement, "Allow repeated nodes within a sample");
  sig_c->add_option("--samples-csv", sig_a.samples_csv, "Write every sample sum");
  sig_c->callback([&] { action = [&] { cmd_graph_significance(g, sig_a, out, err); }; });

  CoupleArgs couple_a;
  auto* couple_c = graph_c->add_subcommand("couple", "Bibliographic coupling graph");
  couple_c->add_option("--citations", couple_a.citations, "citing<TAB>cited file")->required()->check(CLI::ExistingFile);
  couple_c->add_option("--out", couple_a.out, "Graph file")->required();
  couple_c->add_option("--dot", couple_a.dot, "DOT export");
  couple_c->callback([&] { action = [&] { cmd_graph_couple(g, couple_a, out); }; });

  SweepArgs sweep_a;
  auto* sweep_c = graph_c->add_subcommand("sweep", "Giant component against weight threshold");
  sweep_c->add_option("--graph", sweep_a.graph, "Weighted graph file")->required()->check(CLI::ExistingFile);
  sweep_c->add_option("--thetas", sweep_a.thetas, "from:to:step or comma list");
  sweep_c->add_option("--out", sweep_a.out, "Sweep CSV")->required();
  sweep_c->callback([&] { action = [&] { cmd_graph_sweep(sweep_a, out); }; });

  AnalyzeArgs analyze_a;
  auto* analyze_c = app.add_subcommand("analyze-deontics", "Object frequencies, deontic profiles, word trees");
  analyze_c->add_option("--objects", analyze_a.objects, "Comma-separated focal object lemmas");
  analyze_c->add_option("--min-count", analyze_a.min_count, "Frequency cut-off");
  analyze_c->add_option("--pivot", analyze_a.pivot, "Word-tree pivot phrase");
  analyze_c->add_option("--conllu", analyze_a.conllu, "Sentences for the word tree")->check(CLI::ExistingFile);
  analyze_c->add_option("--depth", analyze_a.depth, "Word-tree depth")->check(CLI::PositiveNumber);
  analyze_c->add_option("--direction", analyze_a.direction, "forward or backward");
  analyze_c->add_option("--out-dir", analyze_a.out_dir, "Output directory")->required();
  analyze_c->callback([&] { action = [&] { cmd_analyze(g, analyze_a, out, err); }; });

  ClassifyArgs classify_a;
  auto* classify_c = app.add_subcommand("classify-function", "Document-function labels and evaluation");
  classify_c->add_option("--labeled", classify_a.labeled, "title<TAB>label evaluation set")->check(CLI::ExistingFile);
  classify_c->add_option("--predictions", classify_a.predictions, "External title<TAB>label predictions")
      ->check(CLI::ExistingFile);
  classify_c->add_option("--confusion", classify_a.confusion, "Confusion matrix CSV");
  classify_c->add_option("--title", classify_a.titles, "Title to classify (repeatable)");
  classify_c->add_flag("--annotate", classify_a.annotate, "Label policy documents in the store");
  classify_c->callback([&] { action = [&] { cmd_classify(g, classify_a, out); }; });

  RunArgs run_a;
  auto* run_c = app.add_subcommand("run", "Run pipeline stages that are out of date");
  run_c->add_option("--pipeline", run_a.pipeline, "Pipeline file");
  run_c->add_option("--target", run_a.targets, "Stage to bring up to date (repeatable)");
  run_c->add_flag("--force", run_a.force, "Run every selected stage");
  run_c->callback([&] { action = [&] { cmd_run(run_a, out, err); }; });

  auto* status_c = app.add_subcommand("status", "Show stage states");
  status_c->add_option("--pipeline", run_a.pipeline, "Pipeline file");
  status_c->callback([&] { action = [&] { cmd_status(run_a, out); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    if (action) action();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

} // namespace mair
