#pragma once

// Affiliation extraction from LaTeX sources in four steps: locate the
// affiliation markup in the header, extract institution mentions, match
// them to canonical names, classify each canonical as academia or industry.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "mair/corpus.hpp"
#include "mair/digest.hpp"
#include "mair/error.hpp"
#include "mair/text.hpp"

namespace mair {

struct LocateOptions {
  // Commands whose last brace argument holds an affiliation.
  std::vector<std::string> commands{"affil",       "affiliation", "affiliations", "institute", "institution",
                                    "address",     "icmlaffiliation", "IEEEauthorblockA", "email"};
  // Used only when none of `commands` occurs in the header.
  std::vector<std::string> fallback{"author", "thanks"};
  // The header ends at the first of these.
  std::vector<std::string> header_end{"\\begin{abstract}", "\\section", "\\abstract"};
};

struct TextSpan {
  std::string command;
  std::string text;  // markup stripped, one logical line per `\\` or `\and`
};

namespace affil_detail {

inline bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

// Index just past the brace group opening at `open`, or npos if unbalanced.
inline std::size_t skip_group(std::string_view s, std::size_t open, char lb = '{', char rb = '}') {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
      continue;
    }
    if (s[i] == lb) ++depth;
    if (s[i] == rb && --depth == 0) return i + 1;
  }
  return std::string_view::npos;
}

inline std::size_t skip_blanks(std::string_view s, std::size_t i) {
  while (i < s.size() && text::is_space(s[i])) ++i;
  return i;
}

inline std::string drop_comments(std::string_view s) {
  std::string out;
  bool in_comment = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_comment) {
      if (c == '\n') {
        in_comment = false;
        out += c;
      }
      continue;
    }
    if (c == '\\' && i + 1 < s.size()) {
      out += c;
      out += s[++i];
      continue;
    }
    if (c == '%') {
      in_comment = true;
      continue;
    }
    out += c;
  }
  return out;
}

// Math content with markup characters removed.
inline std::string math_text(std::string_view m) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    char c = m[i];
    if (c == '\\') {
      while (i + 1 < m.size() && is_letter(m[i + 1])) ++i;
      continue;
    }
    if (c == '^' || c == '_' || c == '{' || c == '}') continue;
    out += c;
  }
  return out;
}

} // namespace affil_detail

// Flattens LaTeX markup into plain lines. Inline math glued to a word keeps
// its text ("MI$^2$" -> "MI2"); math standing alone is a footnote marker and
// becomes a space.
inline std::string strip_latex(std::string_view s) {
  using namespace affil_detail;
  static const std::set<std::string> drop_with_argument{"orcidlink", "footnotemark", "thanksmark", "inst", "label",
                                                        "textsuperscript", "url", "affilmark", "IEEEauthorrefmark"};
  static const std::map<std::string, std::string> letters{{"l", "l"}, {"L", "L"}, {"o", "o"}, {"O", "O"},
                                                          {"ss", "ss"}, {"aa", "a"}, {"AA", "A"}, {"ae", "ae"},
                                                          {"i", "i"}};
  const std::string src = drop_comments(s);
  std::string out;
  auto last_is_alnum = [&] { return !out.empty() && std::isalnum(static_cast<unsigned char>(out.back())); };
  for (std::size_t i = 0; i < src.size();) {
    char c = src[i];
    if (c == '\\') {
      if (i + 1 >= src.size()) break;
      char n = src[i + 1];
      if (n == '\\') {
        out += '\n';
        i += 2;
        if (i < src.size() && src[i] == '[') i = std::min(src.size(), skip_group(src, i, '[', ']'));
        continue;
      }
      if (!is_letter(n)) {
        if (std::string_view("&%_#$").find(n) != std::string_view::npos) out += n;
        else if (n == ',' || n == ' ' || n == ';') out += ' ';
        i += 2;  // accents and other control symbols vanish
        continue;
      }
      std::size_t j = i + 1;
      while (j < src.size() && is_letter(src[j])) ++j;
      std::string name = src.substr(i + 1, j - i - 1);
      i = j;
      if (name == "and" || name == "thanks" || name == "footnote") {
        out += '\n';
      } else if (drop_with_argument.count(name)) {
        i = skip_blanks(src, i);
        if (i < src.size() && src[i] == '[') i = std::min(src.size(), skip_group(src, i, '[', ']'));
        if (i < src.size() && src[i] == '{') i = std::min(src.size(), skip_group(src, i));
        if (name == "textsuperscript" && !out.empty() && !text::is_space(out.back())) out += ' ';
      } else if (auto it = letters.find(name); it != letters.end()) {
        out += it->second;
      }
      continue;
    }
    if (c == '$') {
      std::size_t close = src.find('$', i + 1);
      if (close == std::string::npos) close = src.size();
      if (last_is_alnum())
        out += math_text(std::string_view(src).substr(i + 1, close - i - 1));
      else
        out += ' ';
      i = close + 1;
      continue;
    }
    if (c == '{' || c == '}' || c == '^' || c == '_') {
      ++i;
      continue;
    }
    out += c == '~' ? ' ' : c;
    ++i;
  }
  std::vector<std::string> lines;
  for (const auto& line : text::split(out, '\n')) {
    auto l = text::collapse_whitespace(line);
    if (!l.empty()) lines.push_back(l);
  }
  return text::join(lines, "\n");
}

// Affiliation-bearing spans of the header. Institutions named in body text
// are never returned because only markup arguments are read.
inline std::vector<TextSpan> locate(std::string_view latex, const LocateOptions& opts = {}) {
  using namespace affil_detail;
  const std::string src = drop_comments(latex);
  std::size_t end = src.size();
  for (const auto& marker : opts.header_end) end = std::min(end, src.find(marker));
  const std::string_view header = std::string_view(src).substr(0, end);

  auto scan = [&](const std::vector<std::string>& wanted) {
    std::vector<TextSpan> spans;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] != '\\' || i + 1 >= header.size() || !is_letter(header[i + 1])) {
        if (header[i] == '\\') ++i;
        continue;
      }
      std::size_t j = i + 1;
      while (j < header.size() && is_letter(header[j])) ++j;
      std::string name(header.substr(i + 1, j - i - 1));
      if (std::find(wanted.begin(), wanted.end(), name) == wanted.end()) {
        i = j - 1;
        continue;
      }
      std::size_t k = j;
      if (k < header.size() && header[k] == '*') ++k;
      k = skip_blanks(header, k);
      while (k < header.size() && header[k] == '[') {
        auto after = skip_group(header, k, '[', ']');
        if (after == std::string_view::npos) break;
        k = skip_blanks(header, after);
      }
      std::optional<std::pair<std::size_t, std::size_t>> last;
      while (k < header.size() && header[k] == '{') {
        auto after = skip_group(header, k);
        if (after == std::string_view::npos) break;
        last = {k + 1, after - 1};
        k = skip_blanks(header, after);
      }
      if (!last) {
        i = j - 1;
        continue;
      }
      auto body = strip_latex(header.substr(last->first, last->second - last->first));
      if (!body.empty()) spans.push_back({name, body});
      // Nested commands (e.g. \thanks inside \author) are part of this span.
      i = (k > 0 ? k : j) - 1;
    }
    return spans;
  };
  auto spans = scan(opts.commands);
  if (spans.empty()) spans = scan(opts.fallback);
  return spans;
}

struct Mention {
  std::string name;       // empty for a mention known only by email domain
  std::string qualifier;  // department, faculty or lab text
  std::vector<std::string> email_domains;

  bool operator==(const Mention&) const = default;
};

// Lower-cased ASCII words of `s`, diacritics folded, punctuation dropped.
inline std::vector<std::string> words_of(std::string_view s) {
  std::string folded = text::to_lower(text::fold_diacritics(s));
  for (char& c : folded)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = ' ';
  return text::split_ws(folded);
}

inline const std::set<std::string>& academia_keywords() {
  static const std::set<std::string> k{"university", "universitat", "universite", "universidad", "universita",
                                       "universiteit", "universidade", "univ", "institute", "institut",
                                       "instituto", "istituto", "school", "academy", "college", "polytechnic",
                                       "politecnico"};
  return k;
}

inline const std::set<std::string>& industry_keywords() {
  static const std::set<std::string> k{"inc", "ltd", "llc", "gmbh", "labs", "corporation", "corp", "company"};
  return k;
}

// Words that make a segment an institution name without deciding its sector.
inline const std::set<std::string>& neutral_institution_keywords() {
  static const std::set<std::string> k{"research", "center", "centre", "foundation", "hospital", "laboratories",
                                       "cnrs", "inria", "eth", "epfl", "mit", "ag"};
  return k;
}

enum class SegmentKind { institution, department, other };

inline SegmentKind segment_kind(std::string_view segment) {
  auto w = words_of(segment);
  if (w.empty()) return SegmentKind::other;
  static const std::set<std::string> lead{"dept", "department", "departement", "departamento", "faculty", "division",
                                          "chair", "fakultat", "faculte"};
  if (lead.count(w[0]) || (w.size() > 1 && w[0] == "school" && w[1] == "of")) return SegmentKind::department;
  for (const auto& word : w)
    if (academia_keywords().count(word) || industry_keywords().count(word) ||
        neutral_institution_keywords().count(word))
      return SegmentKind::institution;
  static const std::set<std::string> tail{"lab", "group", "team", "unit"};
  if (tail.count(w.back())) return SegmentKind::department;
  return SegmentKind::other;
}

class AliasTable;

// Splits a span into institution mentions. Person names, postal fragments
// and countries carry no institution keyword and are dropped; department
// segments become the qualifier of the next institution. Email addresses
// are removed and kept as domains. With a table, segments equal to a known
// alias count as institutions too.
std::vector<Mention> extract(std::string_view span, const AliasTable* table = nullptr);

struct AliasEntry {
  std::string canonical;
  std::vector<std::string> aliases;
  std::vector<std::string> domains;
  Sector sector = Sector::academia;

  bool operator==(const AliasEntry&) const = default;
};

// Lookup key for institution names: comma segments that look like
// departments are dropped, "univ."/"inst."/"tech." are expanded, case and
// diacritics are folded and punctuation is removed.
inline std::string normalize_institution(std::string_view name) {
  std::vector<std::string> kept;
  auto segments = text::split(name, ',');
  for (const auto& seg : segments)
    if (segments.size() == 1 || segment_kind(seg) != SegmentKind::department) kept.push_back(seg);
  static const std::map<std::string, std::string> expand{{"univ", "university"}, {"inst", "institute"},
                                                         {"tech", "technology"}, {"natl", "national"},
                                                         {"intl", "international"}};
  std::vector<std::string> words;
  for (const auto& seg : kept)
    for (auto& w : words_of(seg)) {
      if (auto it = expand.find(w); it != expand.end()) w = it->second;
      words.push_back(w);
    }
  if (!words.empty() && words.front() == "the") words.erase(words.begin());
  return text::join(words, " ");
}

class AliasTable {
public:
  // Canonical names count as their own aliases. Throws Error when an alias
  // or domain is already taken by another canonical.
  void add(AliasEntry entry) {
    if (entry.canonical.empty()) throw Error("alias entry without canonical name");
    if (entry.sector == Sector::none) throw Error("alias entry " + entry.canonical + " needs a sector");
    const std::size_t idx = entries_.size();
    std::vector<std::string> keys{normalize_institution(entry.canonical)};
    for (const auto& a : entry.aliases) keys.push_back(normalize_institution(a));
    for (const auto& k : keys) {
      if (k.empty()) continue;
      if (auto it = names_.find(k); it != names_.end() && it->second != idx)
        throw Error("alias '" + k + "' belongs to both " + entries_[it->second].canonical + " and " + entry.canonical);
    }
    for (auto& d : entry.domains) {
      d = text::to_lower(text::trim(d));
      if (auto it = domains_.find(d); it != domains_.end())
        throw Error("domain " + d + " belongs to both " + entries_[it->second].canonical + " and " + entry.canonical);
    }
    for (const auto& k : keys)
      if (!k.empty()) names_[k] = idx;
    for (const auto& d : entry.domains) domains_[d] = idx;
    entries_.push_back(std::move(entry));
  }

  // Line format: `canonical | alias,... | domain,... | sector`.
  static AliasTable parse(std::string_view data, const std::string& origin = "alias table") {
    AliasTable t;
    std::istringstream in{std::string(data)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      auto body = text::trim(line);
      if (body.empty() || body.front() == '#') continue;
      auto cols = text::split(body, '|');
      if (cols.size() != 4) throw ParseError("expected 4 `|`-separated fields in " + origin, line_no);
      AliasEntry e;
      e.canonical = std::string(text::trim(cols[0]));
      auto list = [](const std::string& field) {
        std::vector<std::string> out;
        for (const auto& item : text::split(field, ','))
          if (auto v = text::trim(item); !v.empty()) out.emplace_back(v);
        return out;
      };
      e.aliases = list(cols[1]);
      e.domains = list(cols[2]);
      auto sector = parse_sector(text::trim(cols[3]));
      if (!sector || *sector == Sector::none)
        throw ParseError("sector must be academia or industry in " + origin, line_no);
      e.sector = *sector;
      try {
        t.add(std::move(e));
      } catch (const ParseError&) {
        throw;
      } catch (const Error& err) {
        throw ParseError(err.what(), line_no);
      }
    }
    return t;
  }

  static AliasTable load(const std::filesystem::path& path) { return parse(text::read_file(path), path.string()); }

  const AliasEntry* by_name(std::string_view name) const {
    auto it = names_.find(normalize_institution(name));
    return it == names_.end() ? nullptr : &entries_[it->second];
  }

  // Exact domain or any parent domain ("cs.pw.edu.pl" finds "pw.edu.pl").
  const AliasEntry* by_domain(std::string_view domain) const {
    std::string d = text::to_lower(text::trim(domain));
    while (!d.empty()) {
      if (auto it = domains_.find(d); it != domains_.end()) return &entries_[it->second];
      auto dot = d.find('.');
      if (dot == std::string::npos) break;
      d = d.substr(dot + 1);
    }
    return nullptr;
  }

  const std::vector<AliasEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

private:
  std::vector<AliasEntry> entries_;
  std::map<std::string, std::size_t> names_;
  std::map<std::string, std::size_t> domains_;
};

inline std::vector<Mention> extract(std::string_view span, const AliasTable* table) {
  static const std::regex email(R"(([A-Za-z0-9._%+\-]+)@([A-Za-z0-9\-]+(\.[A-Za-z0-9\-]+)+))");
  std::string body(span);
  std::vector<std::string> domains;
  for (std::sregex_iterator it(body.begin(), body.end(), email), end; it != end; ++it) {
    auto d = text::to_lower((*it)[2].str());
    if (std::find(domains.begin(), domains.end(), d) == domains.end()) domains.push_back(d);
  }
  body = std::regex_replace(body, email, " ");
  static const std::regex url(R"((https?://|www\.)\S+)");
  body = std::regex_replace(body, url, " ");

  auto strip_marker = [](std::string_view s) {
    s = text::trim(s);
    while (!s.empty()) {
      if (std::isdigit(static_cast<unsigned char>(s.front())) || s.front() == '*' || s.front() == ',') {
        s.remove_prefix(1);
      } else if (s.substr(0, 3) == "\xE2\x80\xA0" || s.substr(0, 3) == "\xE2\x80\xA1") {  // dagger, double dagger
        s.remove_prefix(3);
      } else {
        break;
      }
      s = text::trim(s);
    }
    while (!s.empty() && (s.back() == '.' || s.back() == ':')) s.remove_suffix(1);
    return std::string(text::trim(s));
  };

  std::vector<Mention> out;
  std::vector<std::string> pending;  // departments waiting for their institution
  std::set<std::string> seen;
  static const std::set<std::string> legal_suffix{"inc", "ltd", "llc", "gmbh", "corp", "co", "plc", "ag", "sa"};
  for (auto& raw_line : text::split(body, '\n'))
    for (auto& line : text::split(raw_line, ';')) {
      bool last_was_department = false;
      std::string prev_other;
      for (const auto& raw_seg : text::split(line, ',')) {
        std::string seg = strip_marker(raw_seg);
        if (seg.empty()) continue;
        auto w = words_of(seg);
        if (w.size() == 1 && legal_suffix.count(w[0]) && !prev_other.empty()) seg = prev_other + ", " + seg;
        prev_other.clear();
        auto kind = segment_kind(seg);
        if (kind == SegmentKind::other && table && table->by_name(seg)) kind = SegmentKind::institution;
        if (kind == SegmentKind::institution) {
          Mention m{seg, text::join(pending, ", "), {}};
          pending.clear();
          if (seen.insert(seg).second) out.push_back(std::move(m));
          last_was_department = false;
        } else if (kind == SegmentKind::department) {
          pending.push_back(seg);
          last_was_department = true;
        } else if (last_was_department && seg.find_first_of("0123456789") == std::string::npos) {
          // "Faculty of Mathematics, Informatics and Mechanics": the comma
          // belongs to the department name.
          pending.back() += ", " + seg;
        } else {
          last_was_department = false;
          prev_other = seg;
        }
      }
    }
  if (!pending.empty() && !out.empty()) {
    auto& q = out.back().qualifier;
    q += (q.empty() ? "" : ", ") + text::join(pending, ", ");
  }
  if (out.size() == 1) {
    out.front().email_domains = domains;
  } else {
    for (const auto& d : domains) out.push_back({"", "", {d}});
  }
  return out;
}

struct KbEntry {
  std::string canonical;
  std::vector<std::string> tags;

  bool operator==(const KbEntry&) const = default;
};

class KbUnavailable : public Error {
public:
  using Error::Error;
};

// External knowledge-base lookup. Returns nullopt when the name is unknown
// and throws KbUnavailable when the service cannot be reached.
class KbClient {
public:
  virtual ~KbClient() = default;
  virtual std::optional<KbEntry> lookup(const std::string& name) = 0;
};

class StaticKbClient : public KbClient {
public:
  StaticKbClient() = default;
  explicit StaticKbClient(std::map<std::string, KbEntry> entries) {
    for (auto& [k, v] : entries) entries_[normalize_institution(k)] = std::move(v);
  }
  std::optional<KbEntry> lookup(const std::string& name) override {
    auto it = entries_.find(normalize_institution(name));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

private:
  std::map<std::string, KbEntry> entries_;
};

// GET `endpoint?q=<name>` answering `{"canonical": ..., "tags": [...]}` (404
// or an empty canonical = unknown). Responses, including misses, are cached
// as JSON files named by the SHA-256 of the normalized query. Requests are
// serialized and spaced at least `min_interval` apart.
class HttpKbClient : public KbClient {
public:
  HttpKbClient(std::string endpoint, std::filesystem::path cache_dir, bool offline = false,
               std::chrono::milliseconds min_interval = std::chrono::milliseconds(200))
      : endpoint_(std::move(endpoint)), cache_dir_(std::move(cache_dir)), offline_(offline),
        min_interval_(min_interval) {}

  std::optional<KbEntry> lookup(const std::string& name) override {
    const std::string key = normalize_institution(name);
    std::lock_guard lock(mu_);
    if (auto cached = read_cache(key)) {
      if (!cached->value("found", false)) return std::nullopt;
      return entry(*cached);
    }
    if (offline_) throw KbUnavailable("offline: no cached knowledge-base answer for '" + name + "'");
    if (endpoint_.empty()) throw KbUnavailable("no knowledge-base endpoint configured");

    auto scheme_end = endpoint_.find("://");
    auto path_start = endpoint_.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    std::string host = endpoint_.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : endpoint_.substr(path_start);

    auto now = std::chrono::steady_clock::now();
    if (last_request_ && now - *last_request_ < min_interval_)
      std::this_thread::sleep_for(min_interval_ - (now - *last_request_));
    last_request_ = std::chrono::steady_clock::now();

    httplib::Client client(host);
    client.set_connection_timeout(5);
    client.set_read_timeout(10);
    auto res = client.Get(path, httplib::Params{{"q", name}}, httplib::Headers{});
    if (!res) throw KbUnavailable("knowledge base unreachable: " + httplib::to_string(res.error()));
    nlohmann::json record{{"query", key}, {"found", false}};
    if (res->status == 200) {
      nlohmann::json body;
      try {
        body = nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception&) {
        throw KbUnavailable("knowledge base returned invalid JSON");
      }
      std::string canonical = body.value("canonical", std::string{});
      if (!canonical.empty()) {
        record["found"] = true;
        record["canonical"] = canonical;
        record["tags"] = body.value("tags", std::vector<std::string>{});
      }
    } else if (res->status != 404) {
      throw KbUnavailable("knowledge base answered HTTP " + std::to_string(res->status));
    }
    if (!cache_dir_.empty()) text::write_file(cache_path(key), record.dump() + "\n");
    if (!record["found"].get<bool>()) return std::nullopt;
    return entry(record);
  }

  std::filesystem::path cache_path(const std::string& normalized) const {
    return cache_dir_ / (sha256_hex(normalized) + ".json");
  }

private:
  static KbEntry entry(const nlohmann::json& j) {
    return {j.at("canonical").get<std::string>(), j.value("tags", std::vector<std::string>{})};
  }

  std::optional<nlohmann::json> read_cache(const std::string& key) const {
    if (cache_dir_.empty()) return std::nullopt;
    auto p = cache_path(key);
    if (!std::filesystem::exists(p)) return std::nullopt;
    try {
      return nlohmann::json::parse(text::read_file(p));
    } catch (const nlohmann::json::exception&) {
      return std::nullopt;
    }
  }

  std::string endpoint_;
  std::filesystem::path cache_dir_;
  bool offline_;
  std::chrono::milliseconds min_interval_;
  std::optional<std::chrono::steady_clock::time_point> last_request_;
  std::mutex mu_;
};

struct MatchResult {
  std::string canonical;
  AffiliationEvidence evidence = AffiliationEvidence::alias_table;
  std::vector<std::string> kb_tags;

  bool operator==(const MatchResult&) const = default;
};

// Alias table by name, then alias table by email domain, then the knowledge
// base; the first hit wins. A knowledge-base failure leaves the mention
// unresolved and appends a warning.
inline std::optional<MatchResult> match(const Mention& m, const AliasTable& table, KbClient* kb = nullptr,
                                        std::vector<std::string>* warnings = nullptr) {
  if (!m.name.empty())
    if (const auto* e = table.by_name(m.name)) return MatchResult{e->canonical, AffiliationEvidence::alias_table, {}};
  for (const auto& d : m.email_domains)
    if (const auto* e = table.by_domain(d)) return MatchResult{e->canonical, AffiliationEvidence::email_domain, {}};
  if (kb && !m.name.empty()) {
    try {
      if (auto hit = kb->lookup(m.name)) return MatchResult{hit->canonical, AffiliationEvidence::kb_lookup, hit->tags};
    } catch (const KbUnavailable& e) {
      if (warnings) warnings->push_back(std::string("knowledge base lookup skipped: ") + e.what());
    }
  }
  return std::nullopt;
}

inline std::optional<MatchResult> match(const std::string& name, const AliasTable& table, KbClient* kb = nullptr,
                                        std::vector<std::string>* warnings = nullptr) {
  return match(Mention{name, "", {}}, table, kb, warnings);
}

inline Sector keyword_sector(std::string_view name) {
  auto w = words_of(name);
  for (const auto& word : w)
    if (academia_keywords().count(word)) return Sector::academia;
  for (const auto& word : w)
    if (industry_keywords().count(word)) return Sector::industry;
  return Sector::none;
}

inline Sector kb_sector(const std::vector<std::string>& tags) {
  for (const auto& t : tags) {
    auto tag = text::to_lower(t);
    for (const char* k : {"company", "business", "corporation", "enterprise"})
      if (tag.find(k) != std::string::npos) return Sector::industry;
    for (const char* k : {"university", "academic", "college", "research institute", "educational"})
      if (tag.find(k) != std::string::npos) return Sector::academia;
  }
  return Sector::none;
}

// Alias-table sector, then keyword rules on the name, then knowledge-base tags.
inline Sector classify(const std::string& canonical, const AliasTable& table,
                       const std::vector<std::string>& kb_tags = {}) {
  if (const auto* e = table.by_name(canonical)) return e->sector;
  if (auto s = keyword_sector(canonical); s != Sector::none) return s;
  return kb_sector(kb_tags);
}

struct AffiliationReport {
  std::vector<AffiliationRecord> records;
  std::vector<std::string> warnings;
  std::size_t spans = 0;
  std::size_t mentions = 0;
  std::size_t unresolved = 0;
};

// Paper-level affiliation set: one record per canonical institution. A
// mention that no source resolves but whose name carries a sector keyword
// becomes its own canonical with latex_tag evidence.
inline AffiliationReport extract_affiliations(const Document& doc, const AliasTable& table, KbClient* kb = nullptr,
                                              const LocateOptions& opts = {}) {
  AffiliationReport report;
  if (!doc.latex_source) return report;
  std::set<std::string> seen;
  for (const auto& span : locate(*doc.latex_source, opts)) {
    ++report.spans;
    auto mentions = extract(span.text, &table);
    // A bare one-segment tag such as \affil{OpenAI} carries no keyword; it
    // is kept only if a matcher recognizes it.
    bool candidate = false;
    if (std::none_of(mentions.begin(), mentions.end(), [](const Mention& m) { return !m.name.empty(); }) &&
        span.text.find_first_of("\n,;@") == std::string::npos) {
      mentions.insert(mentions.begin(), Mention{span.text, "", {}});
      candidate = true;
    }
    for (const auto& m : mentions) {
      const bool is_candidate = candidate && &m == &mentions.front();
      if (is_candidate) {
        if (auto hit = match(m, table, kb, &report.warnings)) {
          ++report.mentions;
          AffiliationRecord rec{doc.id, m.name, hit->canonical, classify(hit->canonical, table, hit->kb_tags),
                                hit->evidence};
          if (seen.insert(normalize_institution(rec.canonical)).second) report.records.push_back(std::move(rec));
        }
        continue;
      }
      ++report.mentions;
      AffiliationRecord rec;
      rec.doc_id = doc.id;
      rec.surface = m.name.empty() ? m.email_domains.front() : m.name;
      if (auto hit = match(m, table, kb, &report.warnings)) {
        rec.canonical = hit->canonical;
        rec.evidence = hit->evidence;
        rec.sector = classify(hit->canonical, table, hit->kb_tags);
      } else if (!m.name.empty() && keyword_sector(m.name) != Sector::none) {
        rec.canonical = m.name;
        rec.sector = keyword_sector(m.name);
        rec.evidence = AffiliationEvidence::latex_tag;
      } else {
        ++report.unresolved;
        rec.evidence = AffiliationEvidence::latex_tag;
      }
      std::string key = rec.canonical.empty() ? "?" + normalize_institution(rec.surface)
                                              : normalize_institution(rec.canonical);
      if (seen.insert(key).second) report.records.push_back(std::move(rec));
    }
  }
  return report;
}

// Fills `affiliations` of every document in place. Documents are processed
// in parallel; `kb` must tolerate concurrent calls (the shipped clients do).
inline std::vector<std::string> annotate_affiliations(std::vector<Document>& docs, const AliasTable& table,
                                                      KbClient* kb = nullptr, unsigned threads = 1,
                                                      const LocateOptions& opts = {}) {
  std::vector<AffiliationReport> reports(docs.size());
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < docs.size(); i += step) reports[i] = extract_affiliations(docs[i], table, kb, opts);
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].latex_source) docs[i].affiliations = reports[i].records;
    for (auto& w : reports[i].warnings) warnings.push_back(docs[i].id + ": " + w);
  }
  return warnings;
}

} // namespace mair
