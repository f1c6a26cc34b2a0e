#pragma once

// Document model, dump ingestion and corpus filters.

#include <algorithm>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "mair/error.hpp"
#include "mair/text.hpp"

namespace mair {

using json = nlohmann::json;

enum class Source { oecd, nesta, arxiv };
enum class DocKind { policy, paper };
enum class DocumentFunction { diagnosis, principles, strategies, pre_regulations, regulations, body };
enum class Sector { academia, industry, none };
enum class AffiliationEvidence { latex_tag, email_domain, alias_table, kb_lookup };

inline const char* to_string(Source s) {
  switch (s) {
    case Source::oecd: return "oecd";
    case Source::nesta: return "nesta";
    case Source::arxiv: return "arxiv";
  }
  return "?";
}

inline const char* to_string(DocKind k) { return k == DocKind::policy ? "policy" : "paper"; }

inline const char* to_string(DocumentFunction f) {
  switch (f) {
    case DocumentFunction::diagnosis: return "diagnosis";
    case DocumentFunction::principles: return "principles";
    case DocumentFunction::strategies: return "strategies";
    case DocumentFunction::pre_regulations: return "pre_regulations";
    case DocumentFunction::regulations: return "regulations";
    case DocumentFunction::body: return "body";
  }
  return "?";
}

inline const char* to_string(Sector s) {
  switch (s) {
    case Sector::academia: return "academia";
    case Sector::industry: return "industry";
    case Sector::none: return "none";
  }
  return "?";
}

inline const char* to_string(AffiliationEvidence e) {
  switch (e) {
    case AffiliationEvidence::latex_tag: return "latex_tag";
    case AffiliationEvidence::email_domain: return "email_domain";
    case AffiliationEvidence::alias_table: return "alias_table";
    case AffiliationEvidence::kb_lookup: return "kb_lookup";
  }
  return "?";
}

inline std::optional<Source> parse_source(std::string_view s) {
  if (s == "oecd") return Source::oecd;
  if (s == "nesta") return Source::nesta;
  if (s == "arxiv") return Source::arxiv;
  return std::nullopt;
}

inline std::optional<DocKind> parse_kind(std::string_view s) {
  if (s == "policy") return DocKind::policy;
  if (s == "paper") return DocKind::paper;
  return std::nullopt;
}

inline constexpr DocumentFunction kAllFunctions[] = {
    DocumentFunction::diagnosis,       DocumentFunction::principles,
    DocumentFunction::strategies,      DocumentFunction::pre_regulations,
    DocumentFunction::regulations,     DocumentFunction::body,
};

// Accepts the underscore form and the hyphenated "pre-regulations".
inline std::optional<DocumentFunction> parse_function(std::string_view s) {
  std::string key = text::to_lower(text::trim(s));
  std::replace(key.begin(), key.end(), '-', '_');
  for (auto f : kAllFunctions)
    if (key == to_string(f)) return f;
  return std::nullopt;
}

inline std::optional<Sector> parse_sector(std::string_view s) {
  if (s == "academia") return Sector::academia;
  if (s == "industry") return Sector::industry;
  if (s == "none") return Sector::none;
  return std::nullopt;
}

inline std::optional<AffiliationEvidence> parse_evidence(std::string_view s) {
  if (s == "latex_tag") return AffiliationEvidence::latex_tag;
  if (s == "email_domain") return AffiliationEvidence::email_domain;
  if (s == "alias_table") return AffiliationEvidence::alias_table;
  if (s == "kb_lookup") return AffiliationEvidence::kb_lookup;
  return std::nullopt;
}

struct AffiliationRecord {
  std::string doc_id;
  std::string surface;
  std::string canonical;  // empty when unresolved
  Sector sector = Sector::none;
  AffiliationEvidence evidence = AffiliationEvidence::latex_tag;

  bool operator==(const AffiliationRecord&) const = default;
};

struct Document {
  std::string id;
  Source source = Source::arxiv;
  DocKind kind = DocKind::paper;
  std::string title;
  std::vector<std::string> authors;
  std::optional<int> year;
  std::optional<std::string> body_text;
  std::optional<std::string> abstract;
  std::optional<std::string> journal_ref;
  std::optional<std::string> latex_source;
  std::vector<std::string> categories;
  std::optional<DocumentFunction> function;
  std::optional<std::string> url;
  std::vector<AffiliationRecord> affiliations;

  bool operator==(const Document&) const = default;
};

// Throws mair::Error describing the first violated invariant.
inline void validate(const Document& d) {
  if (d.id.empty()) throw Error("document without id");
  if (d.kind == DocKind::paper && d.source != Source::arxiv)
    throw Error("paper " + d.id + " must come from arxiv");
  if (d.kind == DocKind::policy && d.source == Source::arxiv)
    throw Error("policy document " + d.id + " cannot come from arxiv");
  if (d.year && (*d.year < 1900 || *d.year > 2100))
    throw Error("document " + d.id + " has year out of range");
}

inline void to_json(json& j, const AffiliationRecord& a) {
  j = json{{"doc_id", a.doc_id},
           {"surface", a.surface},
           {"canonical", a.canonical},
           {"sector", to_string(a.sector)},
           {"evidence", to_string(a.evidence)}};
}

inline void from_json(const json& j, AffiliationRecord& a) {
  a.doc_id = j.at("doc_id").get<std::string>();
  a.surface = j.at("surface").get<std::string>();
  a.canonical = j.value("canonical", std::string{});
  auto sector = parse_sector(j.at("sector").get<std::string>());
  auto evidence = parse_evidence(j.at("evidence").get<std::string>());
  if (!sector || !evidence) throw Error("bad affiliation record for " + a.doc_id);
  a.sector = *sector;
  a.evidence = *evidence;
}

inline void to_json(json& j, const Document& d) {
  j = json::object();
  j["id"] = d.id;
  j["source"] = to_string(d.source);
  j["kind"] = to_string(d.kind);
  j["title"] = d.title;
  j["authors"] = d.authors;
  if (d.year) j["year"] = *d.year;
  if (d.body_text) j["body_text"] = *d.body_text;
  if (d.abstract) j["abstract"] = *d.abstract;
  if (d.journal_ref) j["journal_ref"] = *d.journal_ref;
  if (d.latex_source) j["latex_source"] = *d.latex_source;
  j["categories"] = d.categories;
  if (d.function) j["function"] = to_string(*d.function);
  if (d.url) j["url"] = *d.url;
  if (!d.affiliations.empty()) j["affiliations"] = d.affiliations;
}

inline void from_json(const json& j, Document& d) {
  d = Document{};
  d.id = j.at("id").get<std::string>();
  auto source = parse_source(j.at("source").get<std::string>());
  if (!source) throw Error("unknown source for " + d.id);
  d.source = *source;
  if (j.contains("kind")) {
    auto kind = parse_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error("unknown kind for " + d.id);
    d.kind = *kind;
  } else {
    d.kind = d.source == Source::arxiv ? DocKind::paper : DocKind::policy;
  }
  d.title = j.at("title").get<std::string>();
  if (j.contains("authors")) d.authors = j.at("authors").get<std::vector<std::string>>();
  if (j.contains("year") && !j.at("year").is_null()) d.year = j.at("year").get<int>();
  auto opt = [&](const char* key, std::optional<std::string>& field) {
    if (j.contains(key) && !j.at(key).is_null()) field = j.at(key).get<std::string>();
  };
  opt("body_text", d.body_text);
  opt("abstract", d.abstract);
  opt("journal_ref", d.journal_ref);
  opt("latex_source", d.latex_source);
  opt("url", d.url);
  if (j.contains("categories")) d.categories = j.at("categories").get<std::vector<std::string>>();
  if (j.contains("function") && !j.at("function").is_null()) {
    auto f = parse_function(j.at("function").get<std::string>());
    if (!f) throw Error("unknown function for " + d.id);
    d.function = *f;
  }
  if (j.contains("affiliations"))
    d.affiliations = j.at("affiliations").get<std::vector<AffiliationRecord>>();
}

inline std::string record_id(const Document& d) { return d.id; }

inline std::string dedup_key(const Document& d) {
  return std::string(to_string(d.source)) + "|" + text::collapse_whitespace(text::to_lower(d.title));
}

struct IngestResult {
  std::vector<Document> documents;
  std::size_t malformed = 0;
  std::size_t duplicates = 0;
};

// `default_source` fills records that omit the `source` field.
inline IngestResult ingest_stream(std::istream& in, std::optional<Source> default_source = {}) {
  IngestResult result;
  std::unordered_set<std::string> seen_keys;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    Document doc;
    try {
      json j = json::parse(line);
      if (!j.is_object()) throw Error("record is not an object");
      if (!j.contains("source") && default_source) j["source"] = to_string(*default_source);
      doc = j.get<Document>();
      validate(doc);
    } catch (const std::exception&) {
      ++result.malformed;
      continue;
    }
    if (!seen_keys.insert(dedup_key(doc)).second || !seen_ids.insert(doc.id).second) {
      ++result.duplicates;
      continue;
    }
    result.documents.push_back(std::move(doc));
  }
  if (result.documents.empty()) throw EmptyIngestError("empty ingest: no valid records");
  return result;
}

inline IngestResult ingest(const std::filesystem::path& dump_path,
                           std::optional<Source> default_source = {}) {
  std::ifstream in(dump_path, std::ios::binary);
  if (!in) throw IoError("cannot read " + dump_path.string());
  try {
    return ingest_stream(in, default_source);
  } catch (const EmptyIngestError&) {
    throw EmptyIngestError("empty ingest: no valid records in " + dump_path.string());
  }
}

// Documents from `incoming` whose id and dedup key are both new to `existing`.
inline std::vector<Document> new_documents(const std::vector<Document>& existing,
                                           const std::vector<Document>& incoming) {
  std::unordered_set<std::string> keys, ids;
  for (const auto& d : existing) {
    keys.insert(dedup_key(d));
    ids.insert(d.id);
  }
  std::vector<Document> out;
  for (const auto& d : incoming)
    if (keys.insert(dedup_key(d)).second && ids.insert(d.id).second) out.push_back(d);
  return out;
}

enum class MatchField { title, abstract, journal_ref };

struct CorpusFilter {
  std::set<std::string> categories;
  std::set<std::string> keywords;
  std::set<MatchField> match_fields{MatchField::title, MatchField::abstract, MatchField::journal_ref};

  bool valid() const { return !categories.empty() || !keywords.empty(); }
};

// arXiv categories that define the AI paper corpus.
inline CorpusFilter arxiv_ai_filter() {
  CorpusFilter f;
  f.categories = {"cs.CV", "stat.ML", "cs.AI", "cs.CL", "cs.CY", "cs.NE", "cs.GT"};
  return f;
}

// Keywords that carve the explainability subset out of the AI corpus.
inline CorpusFilter arxiv_xai_filter() {
  CorpusFilter f;
  f.keywords = {"Interpretable Machine Learning", "Explainable Artificial Intelligence",
                "Fairness", "Transparency"};
  return f;
}

inline bool matches(const Document& d, const CorpusFilter& f) {
  for (const auto& c : d.categories)
    if (f.categories.count(c)) return true;
  for (const auto& kw : f.keywords) {
    if (f.match_fields.count(MatchField::title) && text::contains_ci(d.title, kw)) return true;
    if (f.match_fields.count(MatchField::abstract) && d.abstract &&
        text::contains_ci(*d.abstract, kw))
      return true;
    if (f.match_fields.count(MatchField::journal_ref) && d.journal_ref &&
        text::contains_ci(*d.journal_ref, kw))
      return true;
  }
  return false;
}

inline std::vector<Document> filter_corpus(const std::vector<Document>& docs, const CorpusFilter& f) {
  std::vector<Document> out;
  std::copy_if(docs.begin(), docs.end(), std::back_inserter(out),
               [&](const Document& d) { return matches(d, f); });
  return out;
}

} // namespace mair
