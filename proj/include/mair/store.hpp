#pragma once

// Append-only line stores. One JSON object per line; a later line with an
// existing id supersedes the earlier one. The in-memory index keeps the
// latest version of each record in first-insertion order.

#include <filesystem>
#include <fstream>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "mair/error.hpp"
#include "mair/text.hpp"

namespace mair {

enum class StoreKind { documents, statements, networks };

inline const char* store_file_name(StoreKind k) {
  switch (k) {
    case StoreKind::documents: return "documents.jsonl";
    case StoreKind::statements: return "statements.jsonl";
    case StoreKind::networks: return "networks.jsonl";
  }
  return "?";
}

inline std::filesystem::path store_path(const std::filesystem::path& dir, StoreKind k) {
  return dir / store_file_name(k);
}

// Record must be json-convertible and provide `std::string record_id(const Record&)`.
template <typename Record>
class RecordStore {
public:
  explicit RecordStore(std::filesystem::path path) : path_(std::move(path)) { load(); }

  const std::filesystem::path& path() const { return path_; }

  void put(const Record& r) {
    std::unique_lock lock(mutex_);
    append_line(r);
    index_record(r);
  }

  void put_all(const std::vector<Record>& records) {
    std::unique_lock lock(mutex_);
    for (const auto& r : records) {
      append_line(r);
      index_record(r);
    }
  }

  Record get(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = index_.find(id);
    if (it == index_.end()) throw NotFoundError("no record with id " + id + " in " + path_.string());
    return records_[it->second];
  }

  bool contains(const std::string& id) const {
    std::shared_lock lock(mutex_);
    return index_.count(id) > 0;
  }

  std::vector<Record> scan() const {
    std::shared_lock lock(mutex_);
    return records_;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return records_.size();
  }

  // Rewrites the file with exactly `records`, dropping superseded lines.
  void replace_all(const std::vector<Record>& records) {
    std::unique_lock lock(mutex_);
    records_.clear();
    index_.clear();
    std::string data;
    for (const auto& r : records) {
      data += serialize(r);
      data += '\n';
      index_record(r);
    }
    text::write_file(path_, data);
  }

  static std::string serialize(const Record& r) { return nlohmann::json(r).dump(); }

private:
  void load() {
    if (!std::filesystem::exists(path_)) return;
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw IoError("cannot read " + path_.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (text::trim(line).empty()) continue;
      try {
        index_record(nlohmann::json::parse(line).get<Record>());
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(path_.string() + ": " + e.what(), line_no);
      } catch (const Error& e) {
        throw ParseError(path_.string() + ": " + e.what(), line_no);
      }
    }
  }

  void append_line(const Record& r) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot append to " + path_.string());
    out << serialize(r) << '\n';
    if (!out) throw IoError("short write to " + path_.string());
  }

  void index_record(const Record& r) {
    std::string id = record_id(r);
    auto it = index_.find(id);
    if (it != index_.end()) {
      records_[it->second] = r;
    } else {
      index_.emplace(std::move(id), records_.size());
      records_.push_back(r);
    }
  }

  std::filesystem::path path_;
  mutable std::shared_mutex mutex_;
  std::vector<Record> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

} // namespace mair
