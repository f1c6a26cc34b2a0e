#pragma once

// Institutional Grammar tagging over dependency trees: given a deontic
// token, locate the Aims it governs, their subjects (Attributes) and their
// objects (Objects), expand conjunctions, resolve pronoun subjects and
// lemmatize the result.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "mair/conllu.hpp"
#include "mair/corpus.hpp"
#include "mair/error.hpp"
#include "mair/text.hpp"

namespace mair {

enum class DeonticClass { shall, must, can };

inline const char* to_string(DeonticClass d) {
  switch (d) {
    case DeonticClass::shall: return "shall";
    case DeonticClass::must: return "must";
    case DeonticClass::can: return "can";
  }
  return "?";
}

inline std::optional<DeonticClass> parse_deontic_class(std::string_view s) {
  if (s == "shall") return DeonticClass::shall;
  if (s == "must") return DeonticClass::must;
  if (s == "can") return DeonticClass::can;
  return std::nullopt;
}

class DeonticLexicon {
public:
  DeonticLexicon() = default;

  static DeonticLexicon defaults() {
    DeonticLexicon lex;
    for (auto* w : {"shall", "should", "ought", "will"}) lex.add(w, DeonticClass::shall);
    for (auto* w : {"must", "need"}) lex.add(w, DeonticClass::must);
    for (auto* w : {"may", "can", "could", "might", "would"}) lex.add(w, DeonticClass::can);
    return lex;
  }

  // One `surface<TAB>class` pair per line; `#` starts a comment.
  static DeonticLexicon load(const std::filesystem::path& path) {
    DeonticLexicon lex;
    std::istringstream in(text::read_file(path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      auto body = text::trim(line);
      if (body.empty() || body.front() == '#') continue;
      auto cols = text::split(body, '\t');
      if (cols.size() != 2) throw ParseError("expected surface<TAB>class", line_no);
      auto surface = std::string(text::trim(cols[0]));
      auto cls = parse_deontic_class(text::trim(cols[1]));
      if (!cls) throw ParseError("unknown deontic class '" + cols[1] + "'", line_no);
      if (text::split_ws(surface).size() != 1)
        throw ParseError("lexicon keys must be single tokens", line_no);
      lex.add(surface, *cls);
    }
    return lex;
  }

  void add(std::string_view surface, DeonticClass cls) { entries_[text::to_lower(surface)] = cls; }

  std::optional<DeonticClass> lookup(std::string_view surface) const {
    auto it = entries_.find(text::to_lower(surface));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<std::string, DeonticClass>& entries() const { return entries_; }

private:
  std::map<std::string, DeonticClass> entries_;
};

enum class CorefStatus { not_pronoun, resolved, unresolved };

inline const char* to_string(CorefStatus c) {
  switch (c) {
    case CorefStatus::not_pronoun: return "not_pronoun";
    case CorefStatus::resolved: return "resolved";
    case CorefStatus::unresolved: return "unresolved";
  }
  return "?";
}

// A subject or object: the head token plus its compound/amod/flat modifiers.
struct Phrase {
  int index = 0;           // head token in the source sentence
  std::string text;        // surface words in sentence order
  std::string lemma;       // lower-cased lemmas in sentence order
  std::string head_lemma;  // lower-cased lemma of the head; the analytic key
  CorefStatus coref = CorefStatus::not_pronoun;

  bool operator==(const Phrase&) const = default;
};

struct Aim {
  int index = 0;
  std::string surface;
  std::string lemma;

  bool operator==(const Aim&) const = default;
};

struct IgStatement {
  std::string doc_id;
  std::string sent_id;
  DocKind corpus = DocKind::policy;
  int deontic_index = 0;
  std::string deontic_surface;
  DeonticClass deontic_class = DeonticClass::shall;
  std::vector<Phrase> attributes;
  std::vector<Aim> aims;
  std::vector<Phrase> objects;
  bool negated = false;

  bool operator==(const IgStatement&) const = default;
};

inline std::string record_id(const IgStatement& s) {
  return s.doc_id + "/" + s.sent_id + "/" + std::to_string(s.deontic_index);
}

inline void to_json(nlohmann::json& j, const Phrase& p) {
  j = nlohmann::json{{"index", p.index},
                     {"text", p.text},
                     {"lemma", p.lemma},
                     {"head_lemma", p.head_lemma},
                     {"coref", to_string(p.coref)}};
}

inline void from_json(const nlohmann::json& j, Phrase& p) {
  p.index = j.at("index").get<int>();
  p.text = j.at("text").get<std::string>();
  p.lemma = j.at("lemma").get<std::string>();
  p.head_lemma = j.at("head_lemma").get<std::string>();
  auto c = j.at("coref").get<std::string>();
  if (c == "resolved")
    p.coref = CorefStatus::resolved;
  else if (c == "unresolved")
    p.coref = CorefStatus::unresolved;
  else if (c == "not_pronoun")
    p.coref = CorefStatus::not_pronoun;
  else
    throw Error("unknown coref status " + c);
}

inline void to_json(nlohmann::json& j, const Aim& a) {
  j = nlohmann::json{{"index", a.index}, {"surface", a.surface}, {"lemma", a.lemma}};
}

inline void from_json(const nlohmann::json& j, Aim& a) {
  a.index = j.at("index").get<int>();
  a.surface = j.at("surface").get<std::string>();
  a.lemma = j.at("lemma").get<std::string>();
}

inline void to_json(nlohmann::json& j, const IgStatement& s) {
  j = nlohmann::json{{"doc_id", s.doc_id},
                     {"sent_id", s.sent_id},
                     {"corpus", to_string(s.corpus)},
                     {"deontic_index", s.deontic_index},
                     {"deontic_surface", s.deontic_surface},
                     {"deontic_class", to_string(s.deontic_class)},
                     {"attributes", s.attributes},
                     {"aims", s.aims},
                     {"objects", s.objects},
                     {"negated", s.negated}};
}

inline void from_json(const nlohmann::json& j, IgStatement& s) {
  s.doc_id = j.at("doc_id").get<std::string>();
  s.sent_id = j.at("sent_id").get<std::string>();
  auto corpus = parse_kind(j.at("corpus").get<std::string>());
  auto cls = parse_deontic_class(j.at("deontic_class").get<std::string>());
  if (!corpus || !cls) throw Error("bad statement record " + s.doc_id + "/" + s.sent_id);
  s.corpus = *corpus;
  s.deontic_class = *cls;
  s.deontic_index = j.at("deontic_index").get<int>();
  s.deontic_surface = j.at("deontic_surface").get<std::string>();
  s.attributes = j.at("attributes").get<std::vector<Phrase>>();
  s.aims = j.at("aims").get<std::vector<Aim>>();
  s.objects = j.at("objects").get<std::vector<Phrase>>();
  s.negated = j.at("negated").get<bool>();
}

namespace ig_detail {

inline bool is_verbal(const Token& t) { return t.upos == "VERB" || t.upos == "AUX"; }

inline bool is_modifier_relation(std::string_view rel) {
  return rel == "compound" || rel == "amod" || rel == "flat" || rel == "flat:name" ||
         rel == "fixed" || rel == "compound:prt";
}

} // namespace ig_detail

inline Phrase make_phrase(const SentenceTree& tree, int head) {
  std::vector<int> members{head};
  std::vector<int> stack{head};
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    for (int c : tree.dependents(cur)) {
      if (ig_detail::is_modifier_relation(tree.token(c).deprel)) {
        members.push_back(c);
        stack.push_back(c);
      }
    }
  }
  std::sort(members.begin(), members.end());
  std::vector<std::string> words, lemmas;
  for (int m : members) {
    words.push_back(tree.token(m).surface);
    lemmas.push_back(text::to_lower(tree.token(m).lemma));
  }
  Phrase p;
  p.index = head;
  p.text = text::join(words, " ");
  p.lemma = text::join(lemmas, " ");
  p.head_lemma = text::to_lower(tree.token(head).lemma);
  return p;
}

// Resolves a pronoun to the phrase it refers to, or nullopt.
class CorefResolver {
public:
  virtual ~CorefResolver() = default;
  virtual std::optional<Phrase> resolve(const SentenceTree& tree, const Token& pronoun) const = 0;
};

class NullCorefResolver final : public CorefResolver {
public:
  std::optional<Phrase> resolve(const SentenceTree&, const Token&) const override { return std::nullopt; }
};

// Works over the sentences of one document, in document order. Uses
// `Coref=<chain>` MISC annotations when the pronoun carries one, then falls
// back to the nearest preceding nominal subject.
class DocumentCorefResolver final : public CorefResolver {
public:
  explicit DocumentCorefResolver(std::span<const SentenceTree> document) : document_(document) {}

  std::optional<Phrase> resolve(const SentenceTree& tree, const Token& pronoun) const override {
    if (pronoun.upos != "PRON") return std::nullopt;
    if (auto chain = pronoun.misc_value("Coref")) {
      if (auto hit = from_annotation(*chain)) return hit;
    }
    return from_preceding_subject(tree, pronoun);
  }

private:
  std::optional<Phrase> from_annotation(const std::string& chain) const {
    for (const auto& s : document_)
      for (const auto& t : s.tokens())
        if (t.upos != "PRON" && t.misc_value("Coref") == chain) return make_phrase(s, t.index);
    return std::nullopt;
  }

  static bool is_nominal_subject(const Token& t) {
    return (t.upos == "NOUN" || t.upos == "PROPN") && (t.deprel == "nsubj" || t.deprel == "nsubjpass");
  }

  std::optional<Phrase> from_preceding_subject(const SentenceTree& tree, const Token& pronoun) const {
    for (int i = pronoun.index - 1; i >= 1; --i)
      if (is_nominal_subject(tree.token(i))) return make_phrase(tree, i);
    auto here = std::find_if(document_.begin(), document_.end(), [&](const SentenceTree& s) {
      return s.sent_id() == tree.sent_id() && s.doc_id() == tree.doc_id();
    });
    while (here != document_.begin()) {
      --here;
      const auto& toks = here->tokens();
      for (auto it = toks.rbegin(); it != toks.rend(); ++it)
        if (is_nominal_subject(*it)) return make_phrase(*here, it->index);
    }
    return std::nullopt;
  }

  std::span<const SentenceTree> document_;
};

struct TaggerOptions {
  // Also visit conj VERB children of the deontic's head (and their conj
  // VERB children). Needed for "X must be logged and retained".
  bool conj_descend = true;
};

struct DeonticHit {
  std::size_t tree = 0;  // position in the input list
  int token = 0;
};

inline bool is_deontic_token(const Token& t, const DeonticLexicon& lex) {
  return (t.upos == "AUX" || t.upos == "VERB") && lex.lookup(t.surface).has_value();
}

inline std::vector<DeonticHit> find_deontic_sentences(std::span<const SentenceTree> trees,
                                                      const DeonticLexicon& lex) {
  std::vector<DeonticHit> out;
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (const auto& t : trees[i].tokens())
      if (is_deontic_token(t, lex)) out.push_back({i, t.index});
  return out;
}

inline std::optional<IgStatement> extract_statement(const SentenceTree& tree, int deontic_index,
                                                    const DeonticLexicon& lex,
                                                    const CorefResolver& coref,
                                                    const TaggerOptions& opts = {}) {
  using ig_detail::is_verbal;
  const Token& deontic = tree.token(deontic_index);
  auto cls = lex.lookup(deontic.surface);
  if (!cls) throw Error("token '" + deontic.surface + "' is not in the deontic lexicon");
  if (deontic.head == 0 || !is_verbal(tree.token(deontic.head))) return std::nullopt;

  std::set<int> aims, attributes, objects;

  auto visit = [&](int verb) {
    aims.insert(verb);
    auto subj = child_indices(tree, verb, "nsubj");
    auto pass = child_indices(tree, verb, "nsubjpass");
    if (subj.empty() && pass.empty()) {
      // Clausal subject: the subjects of the subordinate clause stand in.
      for (std::string_view rel : {"csubj", "csubjpass"})
        for (int clause : child_indices(tree, verb, rel)) {
          for (int s : child_indices(tree, clause, "nsubj")) attributes.insert(s);
          for (int s : child_indices(tree, clause, "nsubjpass")) attributes.insert(s);
        }
    }
    attributes.insert(subj.begin(), subj.end());
    objects.insert(pass.begin(), pass.end());
    for (int o : child_indices(tree, verb, "dobj")) objects.insert(o);
  };

  // Upward walk: while the current verb is a conj dependent of another verb,
  // continue with that verb.
  const int start = deontic.head;
  for (int verb = start; verb != 0;) {
    if (aims.count(verb)) break;
    visit(verb);
    const Token& t = tree.token(verb);
    const bool climb = t.deprel == "conj" && t.upos == "VERB" && t.head != 0 && is_verbal(tree.token(t.head));
    verb = climb ? t.head : 0;
  }

  if (opts.conj_descend) {
    // Conjoined verbs that carry their own deontic get their own statement.
    auto has_own_deontic = [&](int verb) {
      for (int c : tree.dependents(verb))
        if (c != deontic_index && is_deontic_token(tree.token(c), lex) &&
            (tree.token(c).deprel == "aux" || tree.token(c).deprel == "auxpass"))
          return true;
      return false;
    };
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (int c : child_indices(tree, cur, "conj")) {
        if (tree.token(c).upos != "VERB" || aims.count(c) || has_own_deontic(c)) continue;
        visit(c);
        stack.push_back(c);
      }
    }
  }

  // The attribute post-pass in the published pseudocode reads
  // `if relation(attributes.parent, attributes) = conj then append(subject)`,
  // which applies a token relation to a list. It is taken here in the sense
  // of the surrounding prose: every subject conjoined with a found subject is
  // added, transitively. The object pass does the same.
  auto conj_closure = [&](std::set<int>& found) {
    std::vector<int> stack(found.begin(), found.end());
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (int c : child_indices(tree, cur, "conj"))
        if (found.insert(c).second) stack.push_back(c);
    }
  };
  conj_closure(attributes);
  conj_closure(objects);

  IgStatement st;
  st.doc_id = tree.doc_id();
  st.sent_id = tree.sent_id();
  st.deontic_index = deontic_index;
  st.deontic_surface = deontic.surface;
  st.deontic_class = *cls;
  for (int a : aims) {
    const Token& t = tree.token(a);
    st.aims.push_back({a, t.surface, text::to_lower(t.lemma)});
    for (int c : tree.dependents(a)) {
      const Token& d = tree.token(c);
      if (d.deprel == "neg" || (d.deprel == "advmod" && text::to_lower(d.lemma) == "not")) st.negated = true;
    }
  }
  for (int a : attributes) {
    const Token& t = tree.token(a);
    if (t.upos != "PRON") {
      st.attributes.push_back(make_phrase(tree, a));
      continue;
    }
    std::optional<Phrase> antecedent;
    try {
      antecedent = coref.resolve(tree, t);
    } catch (const std::exception&) {
      antecedent.reset();
    }
    Phrase p = antecedent ? *antecedent : make_phrase(tree, a);
    p.index = a;
    p.coref = antecedent ? CorefStatus::resolved : CorefStatus::unresolved;
    st.attributes.push_back(std::move(p));
  }
  for (int o : objects) st.objects.push_back(make_phrase(tree, o));
  return st;
}

struct TagReport {
  std::vector<IgStatement> statements;
  std::size_t deontic_hits = 0;
  std::size_t without_aim = 0;
  std::vector<std::string> failures;  // "sent_id: message"
  std::size_t orphan_sentences = 0;   // trees whose doc_id is not in `docs`
};

// Trees are grouped by doc_id; statements come out in `docs` order, then
// sentence order, then token order, regardless of `threads`.
inline TagReport tag_corpus(const std::vector<Document>& docs, const std::vector<SentenceTree>& trees,
                            const DeonticLexicon& lex, const TaggerOptions& opts = {},
                            unsigned threads = 1) {
  std::unordered_map<std::string, std::vector<SentenceTree>> by_doc;
  for (const auto& t : trees) by_doc[t.doc_id()].push_back(t);

  TagReport report;
  std::size_t attached = 0;
  for (const auto& d : docs)
    if (auto it = by_doc.find(d.id); it != by_doc.end()) attached += it->second.size();
  report.orphan_sentences = trees.size() - attached;

  std::vector<TagReport> partial(docs.size());
  auto work = [&](std::size_t di) {
    auto it = by_doc.find(docs[di].id);
    if (it == by_doc.end()) return;
    const auto& doc_trees = it->second;
    DocumentCorefResolver coref(doc_trees);
    auto& out = partial[di];
    for (const auto& hit : find_deontic_sentences(doc_trees, lex)) {
      ++out.deontic_hits;
      const auto& tree = doc_trees[hit.tree];
      try {
        auto st = extract_statement(tree, hit.token, lex, coref, opts);
        if (!st) {
          ++out.without_aim;
          continue;
        }
        st->corpus = docs[di].kind;
        out.statements.push_back(std::move(*st));
      } catch (const std::exception& e) {
        out.failures.push_back(tree.sent_id() + ": " + e.what());
      }
    }
  };

  threads = std::max(1u, threads);
  if (threads == 1 || docs.size() < 2) {
    for (std::size_t i = 0; i < docs.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < docs.size();) work(i);
      });
    for (auto& th : pool) th.join();
  }

  for (auto& p : partial) {
    report.deontic_hits += p.deontic_hits;
    report.without_aim += p.without_aim;
    for (auto& s : p.statements) report.statements.push_back(std::move(s));
    for (auto& f : p.failures) report.failures.push_back(std::move(f));
  }
  return report;
}

} // namespace mair
