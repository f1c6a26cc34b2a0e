#pragma once

// Object frequency contrasts between papers and policy texts, per-object
// deontic profiles normalized by corpus base rates, and word trees.

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mair/error.hpp"
#include "mair/ig_tagger.hpp"
#include "mair/text.hpp"

namespace mair {

inline std::vector<std::string> default_focal_objects() {
  return {"agent", "machine", "human", "ai", "people", "algorithm", "user", "system"};
}

inline constexpr std::size_t kDefaultMinCount = 40;

struct ObjectFrequency {
  std::string object_lemma;
  std::size_t count_papers = 0;
  std::size_t count_policy = 0;

  std::size_t total() const { return count_papers + count_policy; }
  bool operator==(const ObjectFrequency&) const = default;
};

// Distinct object head lemmas of one statement.
inline std::set<std::string> object_keys(const IgStatement& s) {
  std::set<std::string> keys;
  for (const auto& o : s.objects) keys.insert(o.head_lemma);
  return keys;
}

inline std::vector<IgStatement> without_negated(const std::vector<IgStatement>& statements) {
  std::vector<IgStatement> out;
  std::copy_if(statements.begin(), statements.end(), std::back_inserter(out),
               [](const IgStatement& s) { return !s.negated; });
  return out;
}

// Keeps objects seen more than `min_count` times in at least one corpus.
inline std::vector<ObjectFrequency> object_frequencies(const std::vector<IgStatement>& statements,
                                                       std::size_t min_count = kDefaultMinCount) {
  std::map<std::string, ObjectFrequency> table;
  for (const auto& s : statements) {
    for (const auto& key : object_keys(s)) {
      auto& row = table[key];
      row.object_lemma = key;
      (s.corpus == DocKind::paper ? row.count_papers : row.count_policy) += 1;
    }
  }
  std::vector<ObjectFrequency> out;
  for (auto& [_, row] : table)
    if (std::max(row.count_papers, row.count_policy) > min_count) out.push_back(row);
  std::stable_sort(out.begin(), out.end(), [](const ObjectFrequency& a, const ObjectFrequency& b) {
    return a.total() > b.total();
  });
  return out;
}

struct DeonticProfile {
  std::string object_lemma;
  DocKind corpus = DocKind::paper;
  double share_shall = 0;
  double share_must = 0;
  double share_can = 0;
  std::size_t occurrences = 0;

  // Ternary plot coordinates in (can, shall, must) order.
  std::array<double, 3> ternary() const { return {share_can, share_shall, share_must}; }
  bool operator==(const DeonticProfile&) const = default;
};

namespace analytics_detail {

inline std::size_t slot(DeonticClass d) {
  switch (d) {
    case DeonticClass::shall: return 0;
    case DeonticClass::must: return 1;
    case DeonticClass::can: return 2;
  }
  return 0;
}

} // namespace analytics_detail

// Two-stage normalization, done separately per corpus: the count of object o
// with deontic d is divided by the corpus total for d, then the three ratios
// are rescaled to sum to one. Replace this function to change the formula.
inline std::array<double, 3> normalize_deontic_counts(const std::array<std::size_t, 3>& object_counts,
                                                      const std::array<std::size_t, 3>& base_counts) {
  std::array<double, 3> ratio{};
  double sum = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    ratio[i] = base_counts[i] ? static_cast<double>(object_counts[i]) / static_cast<double>(base_counts[i]) : 0.0;
    sum += ratio[i];
  }
  if (sum > 0)
    for (auto& r : ratio) r /= sum;
  return ratio;
}

// Profiles are emitted per object in the order of `objects`, papers before
// policy; an object absent from a corpus has no profile for that corpus.
// Negated statements are expected to be filtered out beforehand.
inline std::vector<DeonticProfile> deontic_profiles(const std::vector<IgStatement>& statements,
                                                    const std::vector<std::string>& objects) {
  using analytics_detail::slot;
  std::map<DocKind, std::array<std::size_t, 3>> base;
  std::map<std::pair<DocKind, std::string>, std::array<std::size_t, 3>> per_object;
  const std::set<std::string> wanted(objects.begin(), objects.end());
  for (const auto& s : statements) {
    base[s.corpus][slot(s.deontic_class)] += 1;
    for (const auto& key : object_keys(s))
      if (wanted.count(key)) per_object[{s.corpus, key}][slot(s.deontic_class)] += 1;
  }
  std::vector<DeonticProfile> out;
  std::set<std::string> emitted;
  for (const auto& object : objects) {
    if (!emitted.insert(object).second) continue;
    for (DocKind corpus : {DocKind::paper, DocKind::policy}) {
      auto it = per_object.find({corpus, object});
      if (it == per_object.end()) continue;
      auto shares = normalize_deontic_counts(it->second, base[corpus]);
      DeonticProfile p;
      p.object_lemma = object;
      p.corpus = corpus;
      p.share_shall = shares[0];
      p.share_must = shares[1];
      p.share_can = shares[2];
      p.occurrences = it->second[0] + it->second[1] + it->second[2];
      out.push_back(p);
    }
  }
  return out;
}

enum class WordTreeDirection { forward, backward };

struct WordTreeNode {
  std::size_t count = 0;     // contexts passing through or ending here
  std::size_t terminal = 0;  // contexts ending here
  std::map<std::string, WordTreeNode> children;

  bool operator==(const WordTreeNode&) const = default;
};

struct WordTree {
  std::string pivot;
  WordTreeDirection direction = WordTreeDirection::forward;
  std::size_t max_depth = 1;
  WordTreeNode root;
};

// Tokens are compared case-insensitively and stored lower-cased.
inline WordTree word_tree(const std::vector<std::vector<std::string>>& sentences, const std::string& pivot,
                          WordTreeDirection direction, std::size_t max_depth) {
  if (max_depth < 1) throw Error("word tree depth must be at least 1");
  std::vector<std::string> pattern;
  for (const auto& w : text::split_ws(pivot)) pattern.push_back(text::to_lower(w));
  WordTree tree;
  tree.pivot = text::join(pattern, " ");
  tree.direction = direction;
  tree.max_depth = max_depth;
  if (pattern.empty()) return tree;

  for (const auto& raw : sentences) {
    std::vector<std::string> sent;
    sent.reserve(raw.size());
    for (const auto& w : raw) sent.push_back(text::to_lower(w));
    if (sent.size() < pattern.size()) continue;
    for (std::size_t start = 0; start + pattern.size() <= sent.size(); ++start) {
      if (!std::equal(pattern.begin(), pattern.end(), sent.begin() + static_cast<std::ptrdiff_t>(start))) continue;
      std::vector<std::string> context;
      if (direction == WordTreeDirection::forward) {
        for (std::size_t i = start + pattern.size(); i < sent.size() && context.size() < max_depth; ++i)
          context.push_back(sent[i]);
      } else {
        for (std::size_t i = start; i > 0 && context.size() < max_depth; --i) context.push_back(sent[i - 1]);
      }
      WordTreeNode* node = &tree.root;
      node->count += 1;
      for (const auto& w : context) {
        node = &node->children[w];
        node->count += 1;
      }
      node->terminal += 1;
    }
  }
  return tree;
}

inline nlohmann::json to_json_node(const std::string& token, const WordTreeNode& node) {
  nlohmann::json j{{"token", token}, {"count", node.count}, {"terminal", node.terminal}};
  j["children"] = nlohmann::json::array();
  for (const auto& [word, child] : node.children) j["children"].push_back(to_json_node(word, child));
  return j;
}

inline nlohmann::json to_json(const WordTree& tree) {
  return nlohmann::json{{"pivot", tree.pivot},
                        {"direction", tree.direction == WordTreeDirection::forward ? "forward" : "backward"},
                        {"max_depth", tree.max_depth},
                        {"root", to_json_node(tree.pivot, tree.root)}};
}

inline std::string object_frequencies_csv(const std::vector<ObjectFrequency>& rows) {
  std::ostringstream out;
  out << "object,count_papers,count_policy,total\n";
  for (const auto& r : rows)
    out << text::csv_field(r.object_lemma) << ',' << r.count_papers << ',' << r.count_policy << ',' << r.total()
        << '\n';
  return out.str();
}

inline std::string deontic_profiles_csv(const std::vector<DeonticProfile>& rows) {
  std::ostringstream out;
  out << "object,corpus,share_can,share_shall,share_must,occurrences\n";
  for (const auto& r : rows)
    out << text::csv_field(r.object_lemma) << ',' << (r.corpus == DocKind::paper ? "papers" : "policy") << ','
        << text::format_double(r.share_can) << ',' << text::format_double(r.share_shall) << ','
        << text::format_double(r.share_must) << ',' << r.occurrences << '\n';
  return out.str();
}

} // namespace mair
