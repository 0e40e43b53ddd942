#include "nodalab/manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>
#include <memory>
#include <stdexcept>

namespace nodalab {

int Manifest::failures() const {
  int n = 0;
  for (const auto& i : instances) n += i.status == "failed" ? 1 : 0;
  return n;
}

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  hex.reserve(2 * length);
  char buf[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void add_artifact(Manifest& manifest, const std::filesystem::path& root, const std::filesystem::path& relative) {
  const auto full = root / relative;
  manifest.artifacts.push_back(
      {relative.generic_string(), sha256_file(full), std::filesystem::file_size(full)});
}

nlohmann::json to_json(const Manifest& m) {
  nlohmann::json inst = nlohmann::json::array(), art = nlohmann::json::array();
  for (const auto& i : m.instances) {
    nlohmann::json j{{"id", i.id}, {"status", i.status}};
    if (i.status != "ok") {
      j["error_kind"] = i.error_kind;
      j["error"] = i.error;
    }
    inst.push_back(j);
  }
  for (const auto& a : m.artifacts) art.push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  return {{"kind", m.kind},
          {"created", m.created},
          {"config", m.config},
          {"instances", inst},
          {"failures", m.failures()},
          {"artifacts", art}};
}

Manifest manifest_from_json(const nlohmann::json& j) {
  Manifest m;
  m.kind = j.at("kind").get<std::string>();
  m.created = j.value("created", "");
  m.config = j.value("config", nlohmann::json::object());
  for (const auto& i : j.at("instances"))
    m.instances.push_back({i.at("id").get<std::string>(), i.at("status").get<std::string>(),
                           i.value("error_kind", ""), i.value("error", "")});
  for (const auto& a : j.at("artifacts"))
    m.artifacts.push_back({a.at("path").get<std::string>(), a.at("sha256").get<std::string>(),
                           a.at("bytes").get<std::uintmax_t>()});
  return m;
}

std::filesystem::path write_manifest(const Manifest& manifest, const std::filesystem::path& root) {
  const auto path = root / "manifest.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(manifest).dump(2) << '\n';
  return path;
}

Manifest read_manifest(const std::filesystem::path& root) {
  std::ifstream in(root / "manifest.json");
  if (!in) throw std::runtime_error("no manifest in " + root.string());
  return manifest_from_json(nlohmann::json::parse(in));
}

std::vector<std::string> verify_manifest(const std::filesystem::path& root) {
  std::vector<std::string> bad;
  for (const auto& a : read_manifest(root).artifacts) {
    const auto full = root / a.path;
    if (!std::filesystem::exists(full) || std::filesystem::file_size(full) != a.bytes ||
        sha256_file(full) != a.sha256)
      bad.push_back(a.path);
  }
  return bad;
}

}  // namespace nodalab
