#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace patnet::cli {

/// SHA-256 of a byte string, lowercase hex.
std::string sha256_hex(const std::string& bytes);

/// Per-artifact manifest: command, canonical-config hash, seed, and the
/// input/output paths as given. No timestamp unless explicitly requested,
/// so reruns are byte-identical.
struct Manifest {
    std::string command;
    std::string config_sha256;
    std::uint64_t master_seed = 0;
    bool has_seed = false;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<std::pair<std::string, std::int64_t>> counters;
    bool with_timestamp = false;

    std::string to_json() const;
    void write(const std::string& path) const;
};

}  // namespace patnet::cli
