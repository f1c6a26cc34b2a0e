#pragma once

// Policy -> paper citation links, found either by arXiv identifier or by a
// paper title appearing next to one of its authors' last names.

#include <algorithm>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "mair/corpus.hpp"
#include "mair/error.hpp"
#include "mair/text.hpp"

namespace mair {

enum class LinkMethod { arxiv_id, title_author };

inline const char* to_string(LinkMethod m) { return m == LinkMethod::arxiv_id ? "arxiv_id" : "title_author"; }

inline std::optional<LinkMethod> parse_link_method(std::string_view s) {
  if (s == "arxiv_id") return LinkMethod::arxiv_id;
  if (s == "title_author") return LinkMethod::title_author;
  return std::nullopt;
}

struct LinkEvidence {
  std::string policy_id;
  std::string paper_id;
  LinkMethod method = LinkMethod::arxiv_id;
  std::string matched_span;

  bool operator==(const LinkEvidence&) const = default;
};

inline void to_json(nlohmann::json& j, const LinkEvidence& e) {
  j = nlohmann::json{{"policy_id", e.policy_id},
                     {"paper_id", e.paper_id},
                     {"method", to_string(e.method)},
                     {"span", e.matched_span}};
}

inline void from_json(const nlohmann::json& j, LinkEvidence& e) {
  e.policy_id = j.at("policy_id").get<std::string>();
  e.paper_id = j.at("paper_id").get<std::string>();
  auto m = parse_link_method(j.at("method").get<std::string>());
  if (!m) throw Error("unknown link method for " + e.policy_id);
  e.method = *m;
  e.matched_span = j.value("span", std::string{});
}

inline std::string record_id(const LinkEvidence& e) { return e.policy_id + "->" + e.paper_id; }

// Version-free arXiv identifier, or nullopt if `s` is not one. Accepts an
// optional "arXiv:" prefix and a trailing version such as "v3".
inline std::optional<std::string> canonical_arxiv_id(std::string_view s) {
  static const std::regex modern(R"((?:arxiv:)?(\d{4})\.(\d{4,5})(?:v\d+)?)", std::regex::icase);
  static const std::regex legacy(R"((?:arxiv:)?([a-z\-]+)(?:\.([A-Z]{2}))?/(\d{7})(?:v\d+)?)", std::regex::icase);
  std::string str(text::trim(s));
  std::smatch m;
  if (std::regex_match(str, m, modern)) {
    int month = std::stoi(m[1].str().substr(2));
    if (month < 1 || month > 12) return std::nullopt;
    return m[1].str() + "." + m[2].str();
  }
  if (std::regex_match(str, m, legacy)) {
    std::string id = text::to_lower(m[1].str());
    if (m[2].matched) {
      std::string cls = m[2].str();
      for (char& c : cls) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      id += "." + cls;
    }
    return id + "/" + m[3].str();
  }
  return std::nullopt;
}

struct IdHit {
  std::string id;    // canonical form
  std::string text;  // as it appears in the body
};

// Every arXiv identifier in `body`, in order of appearance.
inline std::vector<IdHit> find_arxiv_ids(const std::string& body) {
  static const std::regex pattern(
      R"((^|[^0-9A-Za-z.\-])((?:arxiv:\s?)?(?:\d{4}\.\d{4,5}|[a-z\-]+(?:\.[A-Z]{2})?/\d{7})(?:v\d+)?)(?![0-9]))",
      std::regex::icase);
  std::vector<IdHit> out;
  for (std::sregex_iterator it(body.begin(), body.end(), pattern), end; it != end; ++it) {
    std::string raw = (*it)[2].str();
    std::string compact;
    for (char c : raw)
      if (!text::is_space(c)) compact += c;
    if (auto id = canonical_arxiv_id(compact)) out.push_back({*id, raw});
  }
  return out;
}

// "Ada Lovelace" -> "lovelace"; "Lovelace, Ada" -> "lovelace".
inline std::string author_last_name(std::string_view name) {
  auto comma = name.find(',');
  std::string_view last = comma == std::string_view::npos ? name : name.substr(0, comma);
  if (comma == std::string_view::npos) {
    auto words = text::split_ws(last);
    if (words.empty()) return {};
    return text::normalize_title(words.back());
  }
  return text::normalize_title(last);
}

struct LinkOptions {
  std::size_t min_title_len = 20;   // normalized characters
  std::size_t author_window = 300;  // characters around the title hit, normalized text
  // When a references/bibliography header is found, only the text after it
  // is scanned.
  bool bibliography_only = true;
  bool prune = true;
  unsigned threads = 1;
};

struct IndexedPaper {
  std::string id;
  std::optional<std::string> arxiv_id;
  std::string title;  // normalized
  std::vector<std::string> last_names;
};

class PaperIndex {
public:
  explicit PaperIndex(const std::vector<Document>& papers) {
    for (const auto& d : papers) {
      IndexedPaper p;
      p.id = d.id;
      p.arxiv_id = canonical_arxiv_id(d.id);
      if (!p.arxiv_id && d.url) {
        auto pos = d.url->find("arxiv.org/abs/");
        if (pos != std::string::npos) p.arxiv_id = canonical_arxiv_id(d.url->substr(pos + 14));
      }
      p.title = text::normalize_title(d.title);
      for (const auto& a : d.authors)
        if (auto last = author_last_name(a); !last.empty()) p.last_names.push_back(last);
      const std::size_t idx = papers_.size();
      if (p.arxiv_id) by_arxiv_.emplace(*p.arxiv_id, idx);
      auto first_space = p.title.find(' ');
      if (!p.title.empty()) by_first_token_[p.title.substr(0, first_space)].push_back(idx);
      papers_.push_back(std::move(p));
    }
  }

  const std::vector<IndexedPaper>& papers() const { return papers_; }

  const IndexedPaper* by_arxiv(const std::string& id) const {
    auto it = by_arxiv_.find(id);
    return it == by_arxiv_.end() ? nullptr : &papers_[it->second];
  }

  // Papers whose title starts with a word present in `words`, in index order.
  std::vector<std::size_t> candidates(const std::set<std::string>& words) const {
    std::vector<std::size_t> out;
    for (const auto& w : words)
      if (auto it = by_first_token_.find(w); it != by_first_token_.end())
        out.insert(out.end(), it->second.begin(), it->second.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t index_of(const IndexedPaper* p) const { return static_cast<std::size_t>(p - papers_.data()); }

private:
  std::vector<IndexedPaper> papers_;
  std::unordered_map<std::string, std::size_t> by_arxiv_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_first_token_;
};

// Offset of the first line that is a references-style header, or npos.
inline std::size_t bibliography_start(const std::string& body) {
  static const std::regex header(
      R"((^|\n)[ \t]*(?:[0-9]+\.?|[IVX]+\.)?[ \t]*#*[ \t]*(references|bibliography|works cited|literature|sources|reference list)[ \t]*:?[ \t]*(\r?\n|$))",
      std::regex::icase);
  std::smatch m;
  if (!std::regex_search(body, m, header)) return std::string::npos;
  return static_cast<std::size_t>(m.position(0));
}

namespace linker_detail {

inline bool word_at(const std::string& hay, std::size_t pos, std::size_t len) {
  bool left = pos == 0 || hay[pos - 1] == ' ';
  bool right = pos + len == hay.size() || hay[pos + len] == ' ';
  return left && right;
}

// First whole-word occurrence of `needle` in hay[from, to).
inline std::size_t find_word(const std::string& hay, const std::string& needle, std::size_t from, std::size_t to) {
  if (needle.empty()) return std::string::npos;
  for (std::size_t pos = hay.find(needle, from); pos != std::string::npos && pos + needle.size() <= to;
       pos = hay.find(needle, pos + 1))
    if (word_at(hay, pos, needle.size())) return pos;
  return std::string::npos;
}

} // namespace linker_detail

// Links of one policy document, ordered by paper index position.
inline std::vector<LinkEvidence> links_for_policy(const Document& policy, const PaperIndex& index,
                                                  const LinkOptions& opts = {}) {
  using namespace linker_detail;
  std::vector<LinkEvidence> found;
  if (!policy.body_text) return found;
  std::string region = *policy.body_text;
  if (opts.bibliography_only)
    if (auto start = bibliography_start(region); start != std::string::npos) region = region.substr(start);

  std::map<std::size_t, LinkEvidence> by_paper;
  for (const auto& hit : find_arxiv_ids(region))
    if (const auto* p = index.by_arxiv(hit.id))
      by_paper.emplace(index.index_of(p), LinkEvidence{policy.id, p->id, LinkMethod::arxiv_id, hit.text});

  const std::string norm = text::normalize_title(region);
  std::vector<std::size_t> pool;
  if (opts.prune) {
    auto words = text::split_ws(norm);
    pool = index.candidates(std::set<std::string>(words.begin(), words.end()));
  } else {
    pool.resize(index.papers().size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  }
  for (std::size_t idx : pool) {
    if (by_paper.count(idx)) continue;
    const auto& p = index.papers()[idx];
    if (p.title.size() < opts.min_title_len) continue;
    for (std::size_t pos = find_word(norm, p.title, 0, norm.size()); pos != std::string::npos;
         pos = find_word(norm, p.title, pos + 1, norm.size())) {
      const std::size_t lo = pos > opts.author_window ? pos - opts.author_window : 0;
      const std::size_t hi = std::min(norm.size(), pos + p.title.size() + opts.author_window);
      std::optional<std::pair<std::size_t, std::size_t>> author;
      for (const auto& last : p.last_names) {
        auto a = find_word(norm, last, lo, hi);
        if (a != std::string::npos && (!author || a < author->first)) author = {a, a + last.size()};
      }
      if (!author) continue;
      std::size_t from = std::min(pos, author->first), to = std::max(pos + p.title.size(), author->second);
      by_paper.emplace(idx, LinkEvidence{policy.id, p.id, LinkMethod::title_author, norm.substr(from, to - from)});
      break;
    }
  }
  for (auto& [_, e] : by_paper) found.push_back(std::move(e));
  return found;
}

class BipartiteGraph {
public:
  // False for a repeated (policy, paper) pair.
  bool add(LinkEvidence e) {
    if (!keys_.insert({e.policy_id, e.paper_id}).second) return false;
    if (policy_set_.insert(e.policy_id).second) policies_.push_back(e.policy_id);
    if (paper_set_.insert(e.paper_id).second) papers_.push_back(e.paper_id);
    links_.push_back(std::move(e));
    return true;
  }

  const std::vector<LinkEvidence>& links() const { return links_; }
  const std::vector<std::string>& policies() const { return policies_; }
  const std::vector<std::string>& papers() const { return papers_; }

private:
  std::vector<LinkEvidence> links_;
  std::vector<std::string> policies_;
  std::vector<std::string> papers_;
  std::set<std::string> policy_set_, paper_set_;
  std::set<std::pair<std::string, std::string>> keys_;
};

inline BipartiteGraph extract_links(const std::vector<Document>& policies, const PaperIndex& index,
                                    const LinkOptions& opts = {}) {
  std::vector<std::vector<LinkEvidence>> per_policy(policies.size());
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < policies.size(); i += step) per_policy[i] = links_for_policy(policies[i], index, opts);
  };
  const unsigned threads = std::max(1u, opts.threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  BipartiteGraph g;
  for (auto& links : per_policy)
    for (auto& e : links) g.add(std::move(e));
  return g;
}

struct LinkStats {
  std::size_t n_links = 0;
  std::size_t n_citing_policies = 0;
  std::size_t n_cited_papers = 0;

  bool operator==(const LinkStats&) const = default;
};

inline LinkStats graph_stats(const BipartiteGraph& g) {
  return {g.links().size(), g.policies().size(), g.papers().size()};
}

// Number of distinct policies citing each paper.
inline std::map<std::string, int> policy_citation_counts(const std::vector<LinkEvidence>& links) {
  std::set<std::pair<std::string, std::string>> pairs;
  std::map<std::string, int> out;
  for (const auto& e : links)
    if (pairs.insert({e.policy_id, e.paper_id}).second) out[e.paper_id] += 1;
  return out;
}

inline std::string links_csv(const std::vector<LinkEvidence>& links) {
  std::ostringstream out;
  out << "policy_id,paper_id,method,span\n";
  for (const auto& e : links)
    out << text::csv_field(e.policy_id) << ',' << text::csv_field(e.paper_id) << ',' << to_string(e.method) << ','
        << text::csv_field(e.matched_span) << '\n';
  return out.str();
}

} // namespace mair
