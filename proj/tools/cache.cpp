#include "cache.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <openssl/evp.h>
#include <unistd.h>

namespace prudent::cli {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

Cache::Cache(std::filesystem::path dir, std::string code_version)
    : dir_(std::move(dir)), code_version_(std::move(code_version)) {}

Cache Cache::resolve(const std::string& explicit_dir, std::string code_version) {
  if (!explicit_dir.empty()) return Cache(explicit_dir, std::move(code_version));
  if (const char* env = std::getenv(kCacheEnvVar); env && *env) return Cache(env, std::move(code_version));
  return Cache({}, std::move(code_version));
}

std::string Cache::key_hash(const nlohmann::ordered_json& key) { return sha256_hex(key.dump()); }

std::filesystem::path Cache::path_for(const std::string& hash) const { return dir_ / (hash + ".json"); }

std::optional<CacheEntry> Cache::get(const std::string& hash) const {
  if (!enabled()) return std::nullopt;
  std::ifstream in(path_for(hash));
  if (!in) return std::nullopt;
  const auto j = nlohmann::ordered_json::parse(in);  // corrupt entries surface as errors
  if (j.at("code_version").get<std::string>() != code_version_) return std::nullopt;
  if (j.at("config_hash").get<std::string>() != hash) return std::nullopt;
  return CacheEntry{hash, code_version_, j.at("payload"), j.at("created").get<std::string>()};
}

void Cache::put(const std::string& hash, const nlohmann::ordered_json& payload) const {
  if (!enabled()) return;
  std::filesystem::create_directories(dir_);
  nlohmann::ordered_json j;
  j["config_hash"] = hash;
  j["code_version"] = code_version_;
  j["created"] = std::to_string(
      std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count());
  j["payload"] = payload;

  static std::atomic<unsigned> counter{0};
  std::ostringstream tmp_name;
  tmp_name << "." << hash << "." << ::getpid() << "." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "."
           << counter++ << ".tmp";
  const auto tmp = dir_ / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    out << j.dump() << "\n";
    out.close();
    if (!out) throw std::runtime_error("failed writing cache file " + tmp.string());
  }
  // rename() replaces atomically; concurrent writers of one hash carry the
  // same payload, so whichever lands last is correct.
  std::filesystem::rename(tmp, path_for(hash));
}

}  // namespace prudent::cli
