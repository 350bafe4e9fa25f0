#include "manifest.hpp"

#include <fstream>
#include <memory>
#include <stdexcept>

#include <openssl/evp.h>

namespace fedstrat::cli {

std::string git_blob_hash(const std::string& content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), content.data(), content.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw std::runtime_error("SHA-1 digest failed");

  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"config_path", m.config_path},
          {"output_dir", m.output_dir.string()},
          {"label", m.label},
          {"config_hash", m.config_hash}};
}

std::optional<RunManifest> read_manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) return std::nullopt;
  const auto j = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object()) return std::nullopt;
  RunManifest m;
  m.config_path = j.value("config_path", "");
  m.output_dir = j.value("output_dir", "");
  m.label = j.value("label", "");
  m.config_hash = j.value("config_hash", "");
  return m;
}

}  // namespace fedstrat::cli
