#pragma once

// Content-addressed result cache. One JSON file per entry, named by the
// SHA-256 of the canonical key; writes go through a temporary file and a
// rename so readers never observe a partial entry.

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace prudent::cli {

inline constexpr const char* kCacheEnvVar = "PRUDENT_CACHE_DIR";

struct CacheEntry {
  std::string config_hash;
  std::string code_version;
  nlohmann::ordered_json payload;
  std::string created;
};

std::string sha256_hex(const std::string& data);

class Cache {
 public:
  /// An empty directory disables the cache.
  explicit Cache(std::filesystem::path dir, std::string code_version);

  /// Explicit directory if non-empty, else the environment override, else
  /// disabled.
  static Cache resolve(const std::string& explicit_dir, std::string code_version);

  bool enabled() const { return !dir_.empty(); }
  const std::filesystem::path& dir() const { return dir_; }
  static std::string key_hash(const nlohmann::ordered_json& key);

  /// Absent when missing, disabled, or written by another code version.
  /// Stale files are left in place.
  std::optional<CacheEntry> get(const std::string& hash) const;
  void put(const std::string& hash, const nlohmann::ordered_json& payload) const;

 private:
  std::filesystem::path path_for(const std::string& hash) const;
  std::filesystem::path dir_;
  std::string code_version_;
};

}  // namespace prudent::cli
