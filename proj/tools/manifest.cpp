#include "manifest.hpp"

#include <chrono>
#include <fstream>
#include <stdexcept>

#include <json.hpp>
#include <openssl/evp.h>

namespace patnet::cli {

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::string Manifest::to_json() const {
    nlohmann::json j;
    j["tool"] = "patnet";
    j["command"] = command;
    j["config_sha256"] = config_sha256;
    if (has_seed) j["master_seed"] = master_seed;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    nlohmann::json c = nlohmann::json::object();
    for (const auto& [k, v] : counters) c[k] = v;
    j["counters"] = std::move(c);
    if (with_timestamp) {
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        j["created_at_unix"] =
            std::chrono::duration_cast<std::chrono::seconds>(now).count();
    }
    return j.dump(2);
}

void Manifest::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << to_json() << '\n';
}

}  // namespace patnet::cli
