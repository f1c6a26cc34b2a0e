#pragma once

// Citation and bibliographic-coupling graphs over document ids: affiliation
// breakdown, PageRank, a time-constrained randomization test on PageRank
// sums, Jaccard coupling and weight-threshold percolation sweeps.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mair/corpus.hpp"
#include "mair/error.hpp"
#include "mair/text.hpp"

namespace mair {

enum class AffiliationClass { academia, both, industry, none };

inline constexpr std::array<AffiliationClass, 4> kAffiliationClasses{
    AffiliationClass::academia, AffiliationClass::both, AffiliationClass::industry, AffiliationClass::none};

inline const char* to_string(AffiliationClass c) {
  switch (c) {
    case AffiliationClass::academia: return "academia";
    case AffiliationClass::both: return "both";
    case AffiliationClass::industry: return "industry";
    case AffiliationClass::none: return "none";
  }
  return "?";
}

inline std::optional<AffiliationClass> parse_affiliation_class(std::string_view s) {
  for (auto c : kAffiliationClasses)
    if (s == to_string(c)) return c;
  return std::nullopt;
}

// Paper-level class from the sectors of its affiliation records.
inline AffiliationClass affiliation_class(const std::vector<AffiliationRecord>& records) {
  bool academia = false, industry = false;
  for (const auto& r : records) {
    academia = academia || r.sector == Sector::academia;
    industry = industry || r.sector == Sector::industry;
  }
  if (academia && industry) return AffiliationClass::both;
  if (academia) return AffiliationClass::academia;
  if (industry) return AffiliationClass::industry;
  return AffiliationClass::none;
}

struct NodeInfo {
  std::string id;
  AffiliationClass affiliation = AffiliationClass::none;
  std::optional<int> year;
  int policy_citations = 0;

  bool operator==(const NodeInfo&) const = default;
};

struct GraphEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  double weight = 1.0;

  bool operator==(const GraphEdge&) const = default;
};

enum class GraphMode { directed, weighted };

// Directed citation graph or weighted undirected graph, never both. Weighted
// edges are stored once with source < target.
class DocGraph {
public:
  explicit DocGraph(GraphMode mode = GraphMode::directed) : mode_(mode) {}

  GraphMode mode() const { return mode_; }
  const std::vector<NodeInfo>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const NodeInfo& node(std::size_t i) const { return nodes_.at(i); }
  NodeInfo& node(std::size_t i) { return nodes_.at(i); }

  // Returns the index of the node with this id, inserting it if needed.
  std::size_t add_node(NodeInfo info) {
    if (auto it = index_.find(info.id); it != index_.end()) return it->second;
    index_.emplace(info.id, nodes_.size());
    nodes_.push_back(std::move(info));
    return nodes_.size() - 1;
  }

  std::optional<std::size_t> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // False when the edge already exists.
  bool add_edge(std::size_t source, std::size_t target, double weight = 1.0) {
    if (source >= nodes_.size() || target >= nodes_.size()) throw Error("edge endpoint out of range");
    if (source == target) throw Error("self-loop on " + nodes_[source].id);
    if (mode_ == GraphMode::directed && weight != 1.0) throw Error("directed graphs carry no weights");
    if (!(weight >= 0.0 && weight <= 1.0)) throw Error("edge weight outside [0,1]");
    if (mode_ == GraphMode::weighted && source > target) std::swap(source, target);
    if (!edge_keys_.insert({source, target}).second) return false;
    edges_.push_back({source, target, weight});
    return true;
  }

  bool has_edge(std::size_t source, std::size_t target) const {
    if (mode_ == GraphMode::weighted && source > target) std::swap(source, target);
    return edge_keys_.count({source, target}) > 0;
  }

private:
  GraphMode mode_;
  std::vector<NodeInfo> nodes_;
  std::vector<GraphEdge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::set<std::pair<std::size_t, std::size_t>> edge_keys_;
};

struct CitationRecord {
  std::string citing;
  std::string cited;
};

// `citing<TAB>cited` per line; `#` comments and blank lines ignored.
inline std::vector<CitationRecord> read_citations(const std::filesystem::path& path) {
  std::istringstream in(text::read_file(path));
  std::vector<CitationRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto cols = text::split(body, '\t');
    if (cols.size() != 2) throw ParseError("expected citing<TAB>cited in " + path.string(), line_no);
    out.push_back({std::string(text::trim(cols[0])), std::string(text::trim(cols[1]))});
  }
  return out;
}

struct CitationGraphBuild {
  DocGraph graph{GraphMode::directed};
  std::size_t dropped_dangling = 0;   // endpoint outside the paper set
  std::size_t dropped_self = 0;
  std::size_t duplicate_edges = 0;
};

// Keeps only papers that cite or are cited by another paper of the set.
// Nodes appear in `papers` order.
inline CitationGraphBuild build_citation_graph(const std::vector<Document>& papers,
                                               const std::vector<CitationRecord>& citations,
                                               const std::map<std::string, int>& policy_citations = {}) {
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < papers.size(); ++i) pos.emplace(papers[i].id, i);

  CitationGraphBuild out;
  std::vector<std::pair<std::size_t, std::size_t>> kept;
  std::vector<char> touched(papers.size(), 0);
  for (const auto& c : citations) {
    auto a = pos.find(c.citing), b = pos.find(c.cited);
    if (a == pos.end() || b == pos.end()) {
      ++out.dropped_dangling;
      continue;
    }
    if (a->second == b->second) {
      ++out.dropped_self;
      continue;
    }
    kept.emplace_back(a->second, b->second);
    touched[a->second] = touched[b->second] = 1;
  }
  std::vector<std::size_t> node_of(papers.size(), 0);
  for (std::size_t i = 0; i < papers.size(); ++i) {
    if (!touched[i]) continue;
    NodeInfo info;
    info.id = papers[i].id;
    info.affiliation = affiliation_class(papers[i].affiliations);
    info.year = papers[i].year;
    if (auto it = policy_citations.find(info.id); it != policy_citations.end()) info.policy_citations = it->second;
    node_of[i] = out.graph.add_node(std::move(info));
  }
  for (auto [a, b] : kept)
    if (!out.graph.add_edge(node_of[a], node_of[b])) ++out.duplicate_edges;
  return out;
}

struct AffiliationMatrix {
  // counts[source class][target class], in kAffiliationClasses order.
  std::array<std::array<std::size_t, 4>, 4> counts{};

  std::size_t row_sum(std::size_t r) const { return std::accumulate(counts[r].begin(), counts[r].end(), std::size_t{0}); }
  std::size_t col_sum(std::size_t c) const {
    std::size_t s = 0;
    for (const auto& row : counts) s += row[c];
    return s;
  }
  std::size_t total() const {
    std::size_t s = 0;
    for (std::size_t r = 0; r < 4; ++r) s += row_sum(r);
    return s;
  }
};

inline std::size_t class_slot(AffiliationClass c) { return static_cast<std::size_t>(c); }

inline AffiliationMatrix degree_breakdown(const DocGraph& g) {
  if (g.mode() != GraphMode::directed) throw Error("degree breakdown needs a directed graph");
  AffiliationMatrix m;
  for (const auto& e : g.edges())
    m.counts[class_slot(g.node(e.source).affiliation)][class_slot(g.node(e.target).affiliation)] += 1;
  return m;
}

// Rows are the citing (out) class, columns the cited (in) class.
inline std::string affiliation_matrix_csv(const AffiliationMatrix& m) {
  std::ostringstream out;
  out << "out\\in";
  for (auto c : kAffiliationClasses) out << ',' << to_string(c);
  out << ",sum\n";
  for (std::size_t r = 0; r < 4; ++r) {
    out << to_string(kAffiliationClasses[r]);
    for (std::size_t c = 0; c < 4; ++c) out << ',' << m.counts[r][c];
    out << ',' << m.row_sum(r) << '\n';
  }
  out << "sum";
  for (std::size_t c = 0; c < 4; ++c) out << ',' << m.col_sum(c);
  out << ',' << m.total() << '\n';
  return out.str();
}

struct PageRankOptions {
  double damping = 0.85;
  double tol = 1e-10;
  int max_iterations = 200;
};

// Power iteration with uniform teleport; the mass of nodes without
// out-edges is spread uniformly. Stops once the L1 change drops below tol.
inline std::vector<double> pagerank(const DocGraph& g, const PageRankOptions& opts = {}) {
  if (g.mode() != GraphMode::directed) throw Error("pagerank needs a directed graph");
  const std::size_t n = g.node_count();
  if (n == 0) throw Error("pagerank of an empty graph");
  std::vector<std::size_t> out_degree(n, 0);
  std::vector<std::vector<std::size_t>> in(n);
  for (const auto& e : g.edges()) {
    ++out_degree[e.source];
    in[e.target].push_back(e.source);
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> rank(n, inv_n), next(n);
  double residual = 0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    double dangling = 0;
    for (std::size_t v = 0; v < n; ++v)
      if (out_degree[v] == 0) dangling += rank[v];
    const double base = (1.0 - opts.damping) * inv_n + opts.damping * dangling * inv_n;
    for (std::size_t v = 0; v < n; ++v) {
      double s = 0;
      for (std::size_t u : in[v]) s += rank[u] / static_cast<double>(out_degree[u]);
      next[v] = base + opts.damping * s;
    }
    residual = 0;
    for (std::size_t v = 0; v < n; ++v) residual += std::abs(next[v] - rank[v]);
    rank.swap(next);
    if (residual < opts.tol) return rank;
  }
  throw ConvergenceError("pagerank did not converge in " + std::to_string(opts.max_iterations) +
                             " iterations (L1 residual " + text::format_double(residual) + ")",
                         residual);
}

struct CitedNode {
  std::size_t node = 0;
  int policy_year = 0;
};

struct SignificanceOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  // Within one sample a node is drawn at most once.
  bool without_replacement = true;
  unsigned threads = 1;
};

struct SignificanceResult {
  double observed_sum = 0;
  std::vector<double> sample_sums;
  double p_value = 1;  // share of samples with sum >= observed
};

// Each slot of a sample draws uniformly among nodes published strictly
// before the citing policy's year. Sample i uses its own generator seeded
// from (seed, i), so results do not depend on `threads`.
inline SignificanceResult pagerank_significance(const std::vector<double>& scores,
                                                const std::vector<std::optional<int>>& years,
                                                const std::vector<CitedNode>& cited,
                                                const SignificanceOptions& opts = {}) {
  if (scores.size() != years.size()) throw Error("scores and years differ in length");
  SignificanceResult result;
  for (const auto& c : cited) {
    if (c.node >= scores.size()) throw Error("cited node out of range");
    result.observed_sum += scores[c.node];
  }

  std::map<int, std::vector<std::size_t>> pools;
  for (const auto& c : cited) {
    auto& pool = pools[c.policy_year];
    if (!pool.empty()) continue;
    for (std::size_t v = 0; v < years.size(); ++v)
      if (years[v] && *years[v] < c.policy_year) pool.push_back(v);
    if (pool.empty())
      throw Error("no node published before " + std::to_string(c.policy_year) + " to sample from");
  }
  // Fail early when a sample cannot be completed without repeats.
  if (opts.without_replacement) {
    std::vector<int> slot_years;
    for (const auto& c : cited) slot_years.push_back(c.policy_year);
    std::sort(slot_years.begin(), slot_years.end());
    for (std::size_t k = 0; k < slot_years.size(); ++k)
      if (pools[slot_years[k]].size() < k + 1)
        throw Error("not enough nodes published before " + std::to_string(slot_years[k]) +
                    " to draw without replacement");
  }

  result.sample_sums.assign(opts.samples, 0.0);
  auto run = [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> used;
    for (std::size_t i = begin; i < end; ++i) {
      std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                        static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(std::uint64_t(i) >> 32)};
      std::mt19937_64 rng(seq);
      used.clear();
      double sum = 0;
      for (const auto& c : cited) {
        const auto& pool = pools.at(c.policy_year);
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        std::size_t v;
        do {
          v = pool[pick(rng)];
        } while (opts.without_replacement && std::find(used.begin(), used.end(), v) != used.end());
        used.push_back(v);
        sum += scores[v];
      }
      result.sample_sums[i] = sum;
    }
  };
  const unsigned threads = std::max(1u, opts.threads);
  if (threads == 1) {
    run(0, opts.samples);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (opts.samples + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      std::size_t b = std::min(opts.samples, t * chunk), e = std::min(opts.samples, b + chunk);
      pool.emplace_back(run, b, e);
    }
    for (auto& th : pool) th.join();
  }
  std::size_t at_least = 0;
  for (double s : result.sample_sums)
    if (s >= result.observed_sum) ++at_least;
  result.p_value = opts.samples ? static_cast<double>(at_least) / static_cast<double>(opts.samples) : 1.0;
  return result;
}

// Graph form: PageRank is computed here and node years come from the graph.
inline SignificanceResult pagerank_significance(const DocGraph& g, const std::vector<CitedNode>& cited,
                                                const SignificanceOptions& opts = {},
                                                const PageRankOptions& pr = {}) {
  std::vector<std::optional<int>> years;
  for (const auto& n : g.nodes()) years.push_back(n.year);
  return pagerank_significance(pagerank(g, pr), years, cited, opts);
}

struct ReferenceList {
  NodeInfo node;
  std::vector<std::string> references;
};

// Jaccard index of reference sets for every pair sharing at least one
// reference. Pairs with zero overlap get no edge.
inline DocGraph bibliographic_coupling(const std::vector<ReferenceList>& lists) {
  DocGraph g(GraphMode::weighted);
  std::vector<std::vector<std::string>> sets;
  std::map<std::string, std::vector<std::size_t>> citing_by_ref;
  for (const auto& l : lists) {
    std::size_t idx = g.add_node(l.node);
    if (idx != sets.size()) throw Error("duplicate node " + l.node.id + " in reference lists");
    auto refs = l.references;
    std::sort(refs.begin(), refs.end());
    refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
    for (const auto& r : refs) citing_by_ref[r].push_back(idx);
    sets.push_back(std::move(refs));
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> shared;
  for (const auto& [_, citing] : citing_by_ref)
    for (std::size_t a = 0; a < citing.size(); ++a)
      for (std::size_t b = a + 1; b < citing.size(); ++b) shared[{citing[a], citing[b]}] += 1;
  for (const auto& [pair, inter] : shared) {
    const std::size_t uni = sets[pair.first].size() + sets[pair.second].size() - inter;
    g.add_edge(pair.first, pair.second, static_cast<double>(inter) / static_cast<double>(uni));
  }
  return g;
}

// Reference lists of `papers` taken from citation records (references may
// point outside the paper set).
inline std::vector<ReferenceList> reference_lists(const std::vector<Document>& papers,
                                                  const std::vector<CitationRecord>& citations,
                                                  const std::map<std::string, int>& policy_citations = {}) {
  std::unordered_map<std::string, std::size_t> pos;
  std::vector<ReferenceList> out;
  for (const auto& p : papers) {
    if (!pos.emplace(p.id, out.size()).second) continue;
    ReferenceList l;
    l.node.id = p.id;
    l.node.affiliation = affiliation_class(p.affiliations);
    l.node.year = p.year;
    if (auto it = policy_citations.find(p.id); it != policy_citations.end()) l.node.policy_citations = it->second;
    out.push_back(std::move(l));
  }
  for (const auto& c : citations)
    if (auto it = pos.find(c.citing); it != pos.end()) out[it->second].references.push_back(c.cited);
  return out;
}

class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::size_t component_size(std::size_t x) { return size_[find(x)]; }

private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

using ClassPair = std::pair<AffiliationClass, AffiliationClass>;

inline ClassPair ordered_pair(AffiliationClass a, AffiliationClass b) {
  return class_slot(a) <= class_slot(b) ? ClassPair{a, b} : ClassPair{b, a};
}

// All ten unordered class pairs, in a fixed order.
inline std::vector<ClassPair> all_class_pairs() {
  std::vector<ClassPair> out;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) out.emplace_back(kAffiliationClasses[i], kAffiliationClasses[j]);
  return out;
}

struct SweepRow {
  double theta = 0;
  std::size_t nodes = 0;         // non-isolated nodes N_b(theta)
  std::size_t edges = 0;
  std::size_t giant = 0;         // largest component N^S_b(theta)
  double giant_fraction = 0;     // giant / nodes, 0 for an empty row
  std::map<ClassPair, double> pair_share;  // edge share per class pair

  bool operator==(const SweepRow&) const = default;
};

using ThresholdSweep = std::vector<SweepRow>;

inline ThresholdSweep threshold_sweep(const DocGraph& g, const std::vector<double>& thetas) {
  if (g.mode() != GraphMode::weighted) throw Error("threshold sweep needs a weighted graph");
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (!(thetas[i] >= 0.0 && thetas[i] <= 1.0)) throw Error("threshold outside [0,1]");
    if (i && thetas[i] < thetas[i - 1]) throw Error("thresholds must be ascending");
  }
  ThresholdSweep sweep;
  for (double theta : thetas) {
    SweepRow row;
    row.theta = theta;
    UnionFind uf(g.node_count());
    std::vector<char> present(g.node_count(), 0);
    std::map<ClassPair, std::size_t> pair_count;
    for (const auto& e : g.edges()) {
      if (e.weight < theta) continue;
      ++row.edges;
      present[e.source] = present[e.target] = 1;
      uf.unite(e.source, e.target);
      pair_count[ordered_pair(g.node(e.source).affiliation, g.node(e.target).affiliation)] += 1;
    }
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      if (!present[v]) continue;
      ++row.nodes;
      row.giant = std::max(row.giant, uf.component_size(v));
    }
    row.giant_fraction = row.nodes ? static_cast<double>(row.giant) / static_cast<double>(row.nodes) : 0.0;
    for (const auto& p : all_class_pairs())
      row.pair_share[p] = row.edges ? static_cast<double>(pair_count[p]) / static_cast<double>(row.edges) : 0.0;
    sweep.push_back(std::move(row));
  }
  return sweep;
}

// Threshold at which the giant-component fraction falls the most between
// consecutive non-empty rows; nullopt when it never falls.
inline std::optional<double> breakdown_threshold(const ThresholdSweep& sweep) {
  std::optional<double> best_theta;
  double best_drop = 0;
  const SweepRow* prev = nullptr;
  for (const auto& row : sweep) {
    if (row.nodes == 0) continue;
    if (prev) {
      double drop = prev->giant_fraction - row.giant_fraction;
      if (drop > best_drop) {
        best_drop = drop;
        best_theta = row.theta;
      }
    }
    prev = &row;
  }
  return best_theta;
}

inline std::vector<double> theta_grid(double from, double to, double step) {
  if (!(step > 0)) throw Error("theta step must be positive");
  std::vector<double> out;
  for (long k = 0;; ++k) {
    // Rounded to 12 decimals so 0.05 steps print as 0.15, not 0.15000000000000002.
    double t = std::round((from + static_cast<double>(k) * step) * 1e12) / 1e12;
    if (t > to + 1e-12) break;
    out.push_back(std::min(t, 1.0));
  }
  return out;
}

inline std::string sweep_csv(const ThresholdSweep& sweep) {
  std::ostringstream out;
  out << "theta,nodes,edges,giant,giant_fraction";
  for (const auto& [a, b] : all_class_pairs()) out << ",share_" << to_string(a) << '_' << to_string(b);
  out << '\n';
  for (const auto& r : sweep) {
    out << text::format_double(r.theta) << ',' << r.nodes << ',' << r.edges << ',' << r.giant << ','
        << text::format_double(r.giant_fraction);
    for (const auto& p : all_class_pairs()) out << ',' << text::format_double(r.pair_share.at(p));
    out << '\n';
  }
  return out.str();
}

// Line format:
//   # mair-graph directed|weighted
//   node<TAB>id<TAB>affiliation<TAB>year or -<TAB>policy_citations
//   edge<TAB>source id<TAB>target id<TAB>weight
inline std::string write_graph(const DocGraph& g) {
  std::ostringstream out;
  out << "# mair-graph " << (g.mode() == GraphMode::directed ? "directed" : "weighted") << '\n';
  for (const auto& n : g.nodes())
    out << "node\t" << n.id << '\t' << to_string(n.affiliation) << '\t' << (n.year ? std::to_string(*n.year) : "-")
        << '\t' << n.policy_citations << '\n';
  for (const auto& e : g.edges())
    out << "edge\t" << g.node(e.source).id << '\t' << g.node(e.target).id << '\t' << text::format_double(e.weight)
        << '\n';
  return out.str();
}

inline DocGraph read_graph(const std::string& data) {
  std::istringstream in(data);
  std::string line;
  std::size_t line_no = 0;
  std::optional<DocGraph> g;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    if (!g) {
      if (line == "# mair-graph directed")
        g.emplace(GraphMode::directed);
      else if (line == "# mair-graph weighted")
        g.emplace(GraphMode::weighted);
      else
        throw ParseError("missing `# mair-graph` header", line_no);
      continue;
    }
    auto cols = text::split(line, '\t');
    if (cols[0] == "node" && cols.size() == 5) {
      NodeInfo n;
      n.id = cols[1];
      auto cls = parse_affiliation_class(cols[2]);
      if (!cls) throw ParseError("unknown affiliation class " + cols[2], line_no);
      n.affiliation = *cls;
      try {
        if (cols[3] != "-") n.year = std::stoi(cols[3]);
        n.policy_citations = std::stoi(cols[4]);
      } catch (const std::exception&) {
        throw ParseError("bad number in node line", line_no);
      }
      g->add_node(std::move(n));
    } else if (cols[0] == "edge" && cols.size() == 4) {
      auto a = g->find(cols[1]), b = g->find(cols[2]);
      if (!a || !b) throw ParseError("edge references unknown node", line_no);
      char* end = nullptr;
      double w = std::strtod(cols[3].c_str(), &end);
      if (end == cols[3].c_str() || *end) throw ParseError("bad edge weight", line_no);
      try {
        g->add_edge(*a, *b, w);
      } catch (const Error& e) {
        throw ParseError(e.what(), line_no);
      }
    } else {
      throw ParseError("unrecognized graph line", line_no);
    }
  }
  if (!g) throw ParseError("empty graph file");
  return std::move(*g);
}

inline std::string to_dot(const DocGraph& g) {
  const bool directed = g.mode() == GraphMode::directed;
  std::ostringstream out;
  out << (directed ? "digraph" : "graph") << " mair {\n";
  for (const auto& n : g.nodes())
    out << "  \"" << n.id << "\" [affiliation=\"" << to_string(n.affiliation) << "\"];\n";
  for (const auto& e : g.edges()) {
    out << "  \"" << g.node(e.source).id << "\" " << (directed ? "->" : "--") << " \"" << g.node(e.target).id << '"';
    if (!directed) out << " [weight=" << text::format_double(e.weight) << ']';
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

} // namespace mair
