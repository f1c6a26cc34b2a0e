#pragma once

// CoNLL-U reading, validation and tree navigation.

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mair/error.hpp"
#include "mair/text.hpp"

namespace mair {

inline constexpr std::string_view kUniversalPos[] = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
};

inline bool is_universal_pos(std::string_view tag) {
  return std::find(std::begin(kUniversalPos), std::end(kUniversalPos), tag) != std::end(kUniversalPos);
}

struct Token {
  int index = 0;  // 1-based
  std::string surface;
  std::string lemma;
  std::string upos;
  std::string xpos;
  std::string feats;
  int head = 0;   // 0 = root
  std::string deprel;
  std::string deps;
  std::map<std::string, std::string> misc;

  std::optional<std::string> misc_value(const std::string& key) const {
    auto it = misc.find(key);
    if (it == misc.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const Token&) const = default;
};

class SentenceTree {
public:
  SentenceTree() = default;

  // Validates and indexes. Throws ValidationError on any invariant violation.
  SentenceTree(std::vector<Token> tokens, std::string sent_id, std::string doc_id,
               std::string text = {})
      : tokens_(std::move(tokens)), sent_id_(std::move(sent_id)), doc_id_(std::move(doc_id)),
        text_(std::move(text)) {
    validate();
  }

  const std::vector<Token>& tokens() const { return tokens_; }
  const std::string& sent_id() const { return sent_id_; }
  const std::string& doc_id() const { return doc_id_; }
  const std::string& text() const { return text_; }
  std::size_t size() const { return tokens_.size(); }

  const Token& token(int index) const { return tokens_.at(static_cast<std::size_t>(index - 1)); }
  const Token& root() const { return token(root_); }

  // Dependents of `index` in surface order.
  const std::vector<int>& dependents(int index) const {
    return kids_.at(static_cast<std::size_t>(index));
  }

  bool operator==(const SentenceTree& o) const {
    return tokens_ == o.tokens_ && sent_id_ == o.sent_id_ && doc_id_ == o.doc_id_ && text_ == o.text_;
  }

private:
  void validate() {
    const int n = static_cast<int>(tokens_.size());
    if (n == 0) throw ValidationError(sent_id_, "empty sentence");
    kids_.assign(static_cast<std::size_t>(n) + 1, {});
    root_ = 0;
    for (int i = 0; i < n; ++i) {
      const Token& t = tokens_[static_cast<std::size_t>(i)];
      if (t.index != i + 1) throw ValidationError(sent_id_, "token ids are not consecutive at " + t.surface);
      if (!is_universal_pos(t.upos))
        throw ValidationError(sent_id_, "token " + std::to_string(t.index) + " has non-UD tag " + t.upos);
      if (t.head < 0 || t.head > n)
        throw ValidationError(sent_id_, "token " + std::to_string(t.index) + " has head out of range");
      if (t.head == t.index)
        throw ValidationError(sent_id_, "token " + std::to_string(t.index) + " heads itself");
      if (t.head == 0) {
        if (root_ != 0) throw ValidationError(sent_id_, "multiple roots");
        root_ = t.index;
      }
      kids_[static_cast<std::size_t>(t.head)].push_back(t.index);
    }
    if (root_ == 0) throw ValidationError(sent_id_, "no root");
    // Reachability from the root rules out cycles, given one head per token.
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> stack{root_};
    int reached = 0;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      if (seen[static_cast<std::size_t>(cur)]) continue;
      seen[static_cast<std::size_t>(cur)] = 1;
      ++reached;
      for (int c : kids_[static_cast<std::size_t>(cur)]) stack.push_back(c);
    }
    if (reached != n) throw ValidationError(sent_id_, "cycle: not every token is reachable from the root");
  }

  std::vector<Token> tokens_;
  std::string sent_id_;
  std::string doc_id_;
  std::string text_;
  int root_ = 0;
  std::vector<std::vector<int>> kids_;
};

inline constexpr std::string_view kAnyRelation = "*";

inline std::vector<int> child_indices(const SentenceTree& tree, int index,
                                      std::string_view rel = kAnyRelation) {
  std::vector<int> out;
  for (int c : tree.dependents(index))
    if (rel == kAnyRelation || tree.token(c).deprel == rel) out.push_back(c);
  return out;
}

inline std::vector<Token> children(const SentenceTree& tree, const Token& t,
                                   std::string_view rel = kAnyRelation) {
  std::vector<Token> out;
  for (int c : child_indices(tree, t.index, rel)) out.push_back(tree.token(c));
  return out;
}

// UD v2 labels rewritten to the v1 names the tagger matches on.
inline std::map<std::string, std::string> default_deprel_map() {
  return {{"nsubj:pass", "nsubjpass"}, {"obj", "dobj"}, {"csubj:pass", "csubjpass"},
          {"aux:pass", "auxpass"}};
}

inline std::map<std::string, std::string> load_deprel_map(const std::filesystem::path& path) {
  auto m = default_deprel_map();
  std::istringstream in(text::read_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto cols = text::split_ws(body);
    if (cols.size() != 2) throw ParseError("expected `from to` in " + path.string(), line_no);
    m[cols[0]] = cols[1];
  }
  return m;
}

struct ConlluOptions {
  std::map<std::string, std::string> deprel_map = default_deprel_map();
};

struct SentenceIssue {
  std::string sent_id;
  std::size_t line = 0;  // first line of the sentence
  std::string message;
};

struct ConlluReadResult {
  std::vector<SentenceTree> trees;
  std::vector<SentenceIssue> issues;
};

namespace detail {

inline int parse_int_field(std::string_view s, std::size_t line_no, const char* what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(std::string("bad ") + what + " '" + std::string(s) + "'", line_no);
  return v;
}

inline std::map<std::string, std::string> parse_misc(std::string_view s) {
  std::map<std::string, std::string> out;
  if (s == "_") return out;
  for (const auto& item : text::split(s, '|')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      out[item] = "";
    else
      out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

inline std::string_view comment_value(std::string_view line, std::string_view key) {
  // "# key = value" or "# key value"
  auto body = text::trim(line.substr(1));
  if (body.substr(0, key.size()) != key) return {};
  body.remove_prefix(key.size());
  if (!body.empty() && !text::is_space(body.front()) && body.front() != '=') return {};
  body = text::trim(body);
  if (!body.empty() && body.front() == '=') body = text::trim(body.substr(1));
  return body;
}

} // namespace detail

// Malformed lines throw ParseError. Sentences that parse but fail tree
// validation are reported in `issues` and left out of `trees`.
inline ConlluReadResult read_conllu_stream(std::istream& in, const ConlluOptions& opts = {}) {
  ConlluReadResult result;
  std::string doc_id;
  std::string sent_id;
  std::string sent_text;
  std::vector<Token> tokens;
  std::size_t sentence_line = 0;
  std::size_t ordinal = 0;
  bool in_sentence = false;

  auto flush = [&] {
    if (!in_sentence) return;
    in_sentence = false;
    if (tokens.empty()) {  // comment-only block
      sent_id.clear();
      sent_text.clear();
      return;
    }
    ++ordinal;
    std::string id = sent_id.empty() ? std::to_string(ordinal) : sent_id;
    try {
      result.trees.emplace_back(std::move(tokens), id, doc_id, sent_text);
    } catch (const ValidationError& e) {
      result.issues.push_back({id, sentence_line, e.what()});
    }
    tokens.clear();
    sent_id.clear();
    sent_text.clear();
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) {
      flush();
      continue;
    }
    if (!in_sentence) sentence_line = line_no;
    in_sentence = true;
    if (line.front() == '#') {
      if (auto v = detail::comment_value(line, "newdoc id"); !v.empty()) {
        doc_id = std::string(v);
      } else if (auto v = detail::comment_value(line, "sent_id"); !v.empty()) {
        sent_id = std::string(v);
      } else if (auto v = detail::comment_value(line, "text"); !v.empty()) {
        sent_text = std::string(v);
      }
      continue;
    }
    auto cols = text::split(line, '\t');
    if (cols.size() != 10)
      throw ParseError("expected 10 tab-separated columns, got " + std::to_string(cols.size()), line_no);
    if (cols[0].find_first_of("-.") != std::string::npos) continue;  // multiword range or empty node
    Token t;
    t.index = detail::parse_int_field(cols[0], line_no, "token id");
    t.surface = cols[1];
    t.lemma = cols[2] == "_" && cols[1] != "_" ? cols[1] : cols[2];
    t.upos = cols[3];
    t.xpos = cols[4] == "_" ? "" : cols[4];
    t.feats = cols[5] == "_" ? "" : cols[5];
    t.head = detail::parse_int_field(cols[6], line_no, "head");
    t.deprel = cols[7];
    if (auto it = opts.deprel_map.find(t.deprel); it != opts.deprel_map.end()) t.deprel = it->second;
    t.deps = cols[8] == "_" ? "" : cols[8];
    t.misc = detail::parse_misc(cols[9]);
    tokens.push_back(std::move(t));
  }
  flush();
  return result;
}

inline ConlluReadResult read_conllu(const std::filesystem::path& path, const ConlluOptions& opts = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return read_conllu_stream(in, opts);
}

inline std::string write_conllu(const std::vector<SentenceTree>& trees) {
  std::ostringstream out;
  std::string current_doc;
  bool first = true;
  for (const auto& tree : trees) {
    if (first || tree.doc_id() != current_doc) {
      if (!tree.doc_id().empty()) out << "# newdoc id = " << tree.doc_id() << '\n';
      current_doc = tree.doc_id();
      first = false;
    }
    out << "# sent_id = " << tree.sent_id() << '\n';
    if (!tree.text().empty()) out << "# text = " << tree.text() << '\n';
    for (const auto& t : tree.tokens()) {
      std::string misc;
      for (const auto& [k, v] : t.misc) {
        if (!misc.empty()) misc += '|';
        misc += v.empty() ? k : k + "=" + v;
      }
      out << t.index << '\t' << t.surface << '\t' << t.lemma << '\t' << t.upos << '\t'
          << (t.xpos.empty() ? "_" : t.xpos) << '\t' << (t.feats.empty() ? "_" : t.feats) << '\t'
          << t.head << '\t' << t.deprel << '\t' << (t.deps.empty() ? "_" : t.deps) << '\t'
          << (misc.empty() ? "_" : misc) << '\n';
    }
    out << '\n';
  }
  return out.str();
}

} // namespace mair
