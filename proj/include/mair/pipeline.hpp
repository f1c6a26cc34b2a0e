#pragma once

// Declarative stage pipelines with content-addressed caching.
//
// Pipeline file format, one directive per line:
//
//   # comment
//   stage NAME
//     deps PATH [PATH...]
//     outs PATH [PATH...]
//     cmd COMMAND LINE
//
// `deps`, `outs` and `cmd` may repeat and accumulate; a stage's commands run
// in the order listed. Paths are relative to the directory holding the
// pipeline file. Run state lives in `.mair/state.json` next to it.

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mair/digest.hpp"
#include "mair/error.hpp"
#include "mair/text.hpp"

namespace mair {

struct Stage {
  std::string name;
  std::vector<std::string> deps;
  std::vector<std::string> outs;
  std::vector<std::string> cmds;
};

class Pipeline {
public:
  static Pipeline parse(const std::string& content, std::filesystem::path root = ".") {
    Pipeline p;
    p.root_ = std::move(root);
    std::istringstream in(content);
    std::string line;
    std::size_t number = 0;
    Stage* current = nullptr;
    while (std::getline(in, line)) {
      ++number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      auto body = text::trim(line);
      if (body.empty() || body.front() == '#') continue;
      auto space = body.find_first_of(" \t");
      std::string key(body.substr(0, space));
      std::string rest(space == std::string_view::npos ? std::string_view{} : text::trim(body.substr(space)));
      if (key == "stage") {
        if (rest.empty() || rest.find_first_of(" \t") != std::string::npos)
          throw ParseError("stage needs a single name", number);
        if (p.index_.count(rest)) throw ParseError("duplicate stage '" + rest + "'", number);
        p.index_[rest] = p.stages_.size();
        p.stages_.push_back({rest, {}, {}, {}});
        current = &p.stages_.back();
        continue;
      }
      if (!current) throw ParseError("'" + key + "' outside a stage", number);
      if (key == "deps" || key == "outs") {
        auto& list = key == "deps" ? current->deps : current->outs;
        for (auto& path : text::split_ws(rest)) list.push_back(path);
      } else if (key == "cmd") {
        if (rest.empty()) throw ParseError("empty cmd", number);
        current->cmds.push_back(rest);
      } else {
        throw ParseError("unknown directive '" + key + "'", number);
      }
    }
    p.check();
    return p;
  }

  static Pipeline load(const std::filesystem::path& file) {
    auto root = file.parent_path();
    if (root.empty()) root = ".";
    return parse(text::read_file(file), root);
  }

  const std::vector<Stage>& stages() const { return stages_; }
  const std::filesystem::path& root() const { return root_; }

  const Stage& stage(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw NotFoundError("no stage named '" + name + "'");
    return stages_[it->second];
  }

  // Stage that declares `path` as an output, if any.
  std::optional<std::string> producer(const std::string& path) const {
    auto it = producers_.find(path);
    if (it == producers_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<std::string> upstream(const Stage& s) const {
    std::set<std::string> names;
    for (const auto& d : s.deps)
      if (auto p = producer(d)) names.insert(*p);
    return {names.begin(), names.end()};
  }

  // Stages in dependency order; ties broken by declaration order.
  std::vector<std::string> topological_order() const {
    std::map<std::string, std::size_t> indegree;
    std::map<std::string, std::vector<std::string>> downstream;
    for (const auto& s : stages_) {
      indegree[s.name];
      for (const auto& up : upstream(s)) {
        ++indegree[s.name];
        downstream[up].push_back(s.name);
      }
    }
    std::vector<std::string> order;
    std::vector<bool> done(stages_.size(), false);
    while (order.size() < stages_.size()) {
      bool progressed = false;
      for (std::size_t i = 0; i < stages_.size(); ++i) {
        if (done[i] || indegree[stages_[i].name] != 0) continue;
        done[i] = true;
        progressed = true;
        order.push_back(stages_[i].name);
        for (const auto& d : downstream[stages_[i].name]) --indegree[d];
        break;
      }
      if (!progressed) throw Error("pipeline has a cycle: " + find_cycle());
    }
    return order;
  }

  // `targets` plus everything they depend on, in execution order.
  std::vector<std::string> plan(const std::vector<std::string>& targets) const {
    auto order = topological_order();
    if (targets.empty()) return order;
    std::set<std::string> needed;
    std::vector<std::string> frontier;
    for (const auto& t : targets) frontier.push_back(stage(t).name);
    while (!frontier.empty()) {
      auto name = frontier.back();
      frontier.pop_back();
      if (!needed.insert(name).second) continue;
      for (const auto& up : upstream(stage(name))) frontier.push_back(up);
    }
    std::vector<std::string> out;
    for (const auto& n : order)
      if (needed.count(n)) out.push_back(n);
    return out;
  }

private:
  void check() {
    for (const auto& s : stages_) {
      if (s.cmds.empty()) throw Error("stage '" + s.name + "' has no cmd");
      if (s.outs.empty()) throw Error("stage '" + s.name + "' declares no outs");
      for (const auto& o : s.outs) {
        auto [it, inserted] = producers_.emplace(o, s.name);
        if (!inserted && it->second != s.name)
          throw Error("output '" + o + "' is declared by both '" + it->second + "' and '" + s.name + "'");
      }
    }
  }

  std::string find_cycle() const {
    enum Mark { white, grey, black };
    std::map<std::string, Mark> mark;
    std::vector<std::string> path;
    std::string found;
    std::function<bool(const std::string&)> visit = [&](const std::string& name) {
      mark[name] = grey;
      path.push_back(name);
      for (const auto& up : upstream(stage(name))) {
        if (mark[up] == grey) {
          auto start = std::find(path.begin(), path.end(), up);
          std::vector<std::string> cycle(start, path.end());
          std::reverse(cycle.begin(), cycle.end());
          cycle.insert(cycle.begin(), up);
          found = text::join(cycle, " -> ");
          return true;
        }
        if (mark[up] == white && visit(up)) return true;
      }
      path.pop_back();
      mark[name] = black;
      return false;
    };
    for (const auto& s : stages_)
      if (mark[s.name] == white && visit(s.name)) return found;
    return "?";
  }

  std::filesystem::path root_;
  std::vector<Stage> stages_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, std::string> producers_;
};

struct StageRecord {
  std::string key;
  std::map<std::string, std::string> outs;  // path -> sha256
};

inline std::filesystem::path state_path(const Pipeline& p) { return p.root() / ".mair" / "state.json"; }

inline std::map<std::string, StageRecord> load_state(const Pipeline& p) {
  std::map<std::string, StageRecord> state;
  auto path = state_path(p);
  if (!std::filesystem::exists(path)) return state;
  try {
    auto j = nlohmann::json::parse(text::read_file(path));
    for (const auto& [name, rec] : j.items())
      state[name] = {rec.at("key").get<std::string>(), rec.at("outs").get<std::map<std::string, std::string>>()};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
  return state;
}

inline void save_state(const Pipeline& p, const std::map<std::string, StageRecord>& state) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, rec] : state) j[name] = {{"key", rec.key}, {"outs", rec.outs}};
  text::write_file(state_path(p), j.dump(2) + "\n");
}

// Digest over the command strings and every dependency's path and bytes.
inline std::string stage_key(const Pipeline& p, const Stage& s) {
  Sha256 h;
  for (const auto& c : s.cmds) h.update("cmd ").update(c).update("\n");
  auto deps = s.deps;
  std::sort(deps.begin(), deps.end());
  for (const auto& d : deps) {
    auto full = p.root() / d;
    if (!std::filesystem::is_regular_file(full))
      throw NotFoundError("stage '" + s.name + "': missing input '" + d + "'");
    h.update("dep ").update(d).update(" ").update(sha256_file(full)).update("\n");
  }
  return h.hex();
}

inline std::map<std::string, std::string> output_digests(const Pipeline& p, const Stage& s) {
  std::map<std::string, std::string> out;
  for (const auto& o : s.outs) {
    auto full = p.root() / o;
    if (std::filesystem::is_regular_file(full)) out[o] = sha256_file(full);
  }
  return out;
}

enum class StageState { up_to_date, changed, never_run, outputs_missing, inputs_missing };

inline const char* to_string(StageState s) {
  switch (s) {
    case StageState::up_to_date: return "up-to-date";
    case StageState::changed: return "changed";
    case StageState::never_run: return "never-run";
    case StageState::outputs_missing: return "outputs-missing";
    case StageState::inputs_missing: return "inputs-missing";
  }
  return "?";
}

inline StageState stage_state(const Pipeline& p, const Stage& s, const std::map<std::string, StageRecord>& state) {
  std::string key;
  try {
    key = stage_key(p, s);
  } catch (const NotFoundError&) {
    return StageState::inputs_missing;
  }
  auto it = state.find(s.name);
  if (it == state.end()) return StageState::never_run;
  if (it->second.key != key) return StageState::changed;
  if (output_digests(p, s) != it->second.outs || it->second.outs.size() != s.outs.size())
    return StageState::outputs_missing;
  return StageState::up_to_date;
}

struct StageStatus {
  std::string name;
  StageState state;
};

// Current state of every stage against the recorded run, in execution order.
// A stage whose upstream is stale is reported as changed.
inline std::vector<StageStatus> status(const Pipeline& p) {
  auto state = load_state(p);
  std::set<std::string> stale;
  std::vector<StageStatus> out;
  for (const auto& name : p.topological_order()) {
    const auto& s = p.stage(name);
    auto st = stage_state(p, s, state);
    if (st == StageState::up_to_date)
      for (const auto& up : p.upstream(s))
        if (stale.count(up)) st = StageState::changed;
    if (st == StageState::inputs_missing)
      for (const auto& up : p.upstream(s))
        if (stale.count(up)) st = StageState::never_run;
    if (st != StageState::up_to_date) stale.insert(name);
    out.push_back({name, st});
  }
  return out;
}

struct StageResult {
  std::string name;
  bool executed = false;
  std::map<std::string, std::string> outs;
};

struct RunReport {
  std::vector<StageResult> stages;

  std::vector<std::string> executed() const {
    std::vector<std::string> out;
    for (const auto& s : stages)
      if (s.executed) out.push_back(s.name);
    return out;
  }
  std::vector<std::string> skipped() const {
    std::vector<std::string> out;
    for (const auto& s : stages)
      if (!s.executed) out.push_back(s.name);
    return out;
  }
};

// Receives the stage to execute; `root` is the pipeline directory that paths are relative to.
using StageRunner = std::function<void(const Stage& stage, const std::filesystem::path& root)>;

struct RunOptions {
  std::vector<std::string> targets;
  bool force = false;
};

inline RunReport run(const Pipeline& p, const StageRunner& runner, const RunOptions& opts = {}) {
  auto order = p.plan(opts.targets);
  for (const auto& name : order)
    for (const auto& d : p.stage(name).deps)
      if (!p.producer(d) && !std::filesystem::is_regular_file(p.root() / d))
        throw NotFoundError("stage '" + name + "': missing input '" + d + "'");

  auto state = load_state(p);
  RunReport report;
  for (const auto& name : order) {
    const auto& s = p.stage(name);
    auto key = stage_key(p, s);
    auto it = state.find(name);
    bool fresh = !opts.force && it != state.end() && it->second.key == key &&
                 it->second.outs.size() == s.outs.size() && output_digests(p, s) == it->second.outs;
    StageResult result{name, !fresh, {}};
    if (!fresh) {
      state.erase(name);
      save_state(p, state);
      runner(s, p.root());
      for (const auto& o : s.outs)
        if (!std::filesystem::is_regular_file(p.root() / o))
          throw Error("stage '" + name + "' did not produce '" + o + "'");
      state[name] = {key, output_digests(p, s)};
      save_state(p, state);
    }
    result.outs = state[name].outs;
    report.stages.push_back(std::move(result));
  }
  return report;
}

// Splits a cmd line into arguments; double quotes group, backslash escapes inside quotes.
inline std::vector<std::string> split_command(const std::string& cmd) {
  std::vector<std::string> out;
  std::string cur;
  bool in_token = false, quoted = false;
  for (std::size_t i = 0; i < cmd.size(); ++i) {
    char c = cmd[i];
    if (quoted) {
      if (c == '\\' && i + 1 < cmd.size()) cur += cmd[++i];
      else if (c == '"') quoted = false;
      else cur += c;
    } else if (c == '"') {
      quoted = in_token = true;
    } else if (text::is_space(c)) {
      if (in_token) out.push_back(cur);
      cur.clear();
      in_token = false;
    } else {
      cur += c;
      in_token = true;
    }
  }
  if (quoted) throw Error("unterminated quote in command: " + cmd);
  if (in_token) out.push_back(cur);
  return out;
}

} // namespace mair
