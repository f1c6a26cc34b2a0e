#pragma once

// Document-function classification: a classifier interface, a keyword-rule
// baseline, a prediction-file adapter for external models, and the
// confusion-matrix evaluation harness.

#include <algorithm>
#include <array>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mair/corpus.hpp"
#include "mair/error.hpp"
#include "mair/text.hpp"

namespace mair {

struct LabeledTitle {
  std::string title;
  DocumentFunction label;
};

class Classifier {
public:
  virtual ~Classifier() = default;
  virtual DocumentFunction classify(const std::string& title) const = 0;
};

struct KeywordRule {
  std::vector<std::string> words;
  DocumentFunction label;
};

inline const std::vector<KeywordRule>& default_keyword_rules() {
  static const std::vector<KeywordRule> rules{
      {{"regulation", "regulations", "act", "acts", "law", "laws"}, DocumentFunction::regulations},
      {{"draft", "drafts", "proposal", "proposals", "bill", "bills"}, DocumentFunction::pre_regulations},
      {{"strategy", "strategies", "plan", "plans", "roadmap", "roadmaps"}, DocumentFunction::strategies},
      {{"ethics", "principle", "principles", "guideline", "guidelines"}, DocumentFunction::principles},
      {{"committee", "committees", "council", "councils", "office", "offices", "body", "bodies"},
       DocumentFunction::body},
  };
  return rules;
}

// First rule with a whole-word hit in the normalized title wins.
class KeywordClassifier : public Classifier {
public:
  explicit KeywordClassifier(std::vector<KeywordRule> rules = default_keyword_rules(),
                             DocumentFunction fallback = DocumentFunction::diagnosis)
      : rules_(std::move(rules)), fallback_(fallback) {}

  DocumentFunction classify(const std::string& title) const override {
    auto words = text::split_ws(text::normalize_title(title));
    for (const auto& rule : rules_)
      for (const auto& w : words)
        if (std::find(rule.words.begin(), rule.words.end(), w) != rule.words.end()) return rule.label;
    return fallback_;
  }

private:
  std::vector<KeywordRule> rules_;
  DocumentFunction fallback_;
};

// `title<TAB>label` lines; blank lines and `#` comments are skipped.
inline std::vector<LabeledTitle> parse_labeled_titles(const std::string& content) {
  std::vector<LabeledTitle> out;
  std::istringstream in(content);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line[0] == '#') continue;
    auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw ParseError("expected title<TAB>label", number);
    std::string title(text::trim(std::string_view(line).substr(0, tab)));
    std::string label_text(text::trim(std::string_view(line).substr(tab + 1)));
    auto label = parse_function(label_text);
    if (title.empty()) throw ParseError("empty title", number);
    if (!label) throw ParseError("unknown label '" + label_text + "'", number);
    out.push_back({title, *label});
  }
  return out;
}

inline std::vector<LabeledTitle> read_labeled_titles(const std::filesystem::path& path) {
  return parse_labeled_titles(text::read_file(path));
}

// Mounts predictions produced elsewhere; titles are looked up after normalization.
class PredictionFileClassifier : public Classifier {
public:
  explicit PredictionFileClassifier(const std::vector<LabeledTitle>& predictions) {
    for (const auto& p : predictions) {
      auto key = text::normalize_title(p.title);
      auto [it, inserted] = table_.emplace(key, p.label);
      if (!inserted && it->second != p.label) throw Error("conflicting predictions for '" + p.title + "'");
    }
  }

  static PredictionFileClassifier load(const std::filesystem::path& path) {
    return PredictionFileClassifier(read_labeled_titles(path));
  }

  DocumentFunction classify(const std::string& title) const override {
    auto it = table_.find(text::normalize_title(title));
    if (it == table_.end()) throw NotFoundError("no prediction for '" + title + "'");
    return it->second;
  }

private:
  std::map<std::string, DocumentFunction> table_;
};

inline std::size_t function_slot(DocumentFunction f) { return static_cast<std::size_t>(f); }

struct ConfusionMatrix {
  std::array<std::array<std::size_t, 6>, 6> counts{};  // [true][predicted]

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& row : counts)
      for (auto c : row) n += c;
    return n;
  }
  std::size_t trace() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < 6; ++i) n += counts[i][i];
    return n;
  }
  double accuracy() const {
    auto n = total();
    return n == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(n);
  }
};

inline ConfusionMatrix evaluate(const std::vector<LabeledTitle>& pairs, const Classifier& model) {
  if (pairs.empty()) throw Error("evaluation set is empty");
  ConfusionMatrix m;
  for (const auto& p : pairs) ++m.counts[function_slot(p.label)][function_slot(model.classify(p.title))];
  return m;
}

inline std::string confusion_csv(const ConfusionMatrix& m) {
  std::string out = "true\\pred";
  for (auto f : kAllFunctions) out += std::string(",") + to_string(f);
  out += "\n";
  for (auto t : kAllFunctions) {
    out += to_string(t);
    for (auto p : kAllFunctions) out += "," + std::to_string(m.counts[function_slot(t)][function_slot(p)]);
    out += "\n";
  }
  out += "accuracy," + text::format_double(m.accuracy()) + "\n";
  return out;
}

} // namespace mair
