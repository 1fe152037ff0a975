#pragma once

// Command-line front end. run_cli is the whole program minus process setup so
// tests can drive it in-process.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace triwork {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitAccuracy = 2,
    kExitInput = 3,
    kExitIo = 4,
    kExitPrecondition = 5,
};

struct RunManifest {
    std::string command;
    std::string config_hash; // FNV-1a 64 over the canonical JSON of all inputs
    std::string tool_version = kToolVersion;
    double wall_time = 0.0; // seconds
    nlohmann::json results;

    nlohmann::json to_json() const;
};

std::uint64_t fnv1a64(const std::string& bytes);
// Hex digest of the canonical (key-sorted, compact) dump of inputs.
std::string config_hash(const nlohmann::json& inputs);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace triwork
