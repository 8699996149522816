#pragma once

// Run manifests: the full configuration of a CLI run plus a content hash of
// the dataset, written next to every output file.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <json.hpp>

#include "revset/error.hpp"

namespace revset {

inline constexpr const char* kToolVersion = "1.0.0";

/// 64-bit FNV-1a, continued from `state`.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL) {
    for (unsigned char c : bytes) {
        state ^= c;
        state *= 0x100000001b3ULL;
    }
    return state;
}

/// Hash over the dataset files that exist in `dir`, in a fixed order.
inline std::string corpus_content_hash(const std::filesystem::path& dir) {
    std::uint64_t h = fnv1a("");
    for (const char* name : {"publications.jsonl", "reviewers.jsonl", "manuscripts.jsonl", "ground_truth.jsonl"}) {
        std::ifstream in(dir / name, std::ios::binary);
        if (!in) continue;
        std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        h = fnv1a(name, h);
        h = fnv1a(bytes, h);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct RunManifest {
    std::string command;
    nlohmann::json config = nlohmann::json::object();
    std::string corpus_hash;
    std::uint64_t rng_seed = 0;
    std::string rng = "std::mt19937_64";
    std::string started_at;
    std::string finished_at;

    nlohmann::json to_json() const {
        return {{"command", command},   {"config", config},       {"corpus_hash", corpus_hash},
                {"tool_version", kToolVersion}, {"rng", rng},      {"rng_seed", rng_seed},
                {"started_at", started_at}, {"finished_at", finished_at}};
    }

    /// The manifest path for an output file: "<out>.manifest.json", or
    /// "<dir>/manifest.json" when the output is a directory.
    static std::filesystem::path path_for(const std::filesystem::path& out) {
        if (std::filesystem::is_directory(out)) return out / "manifest.json";
        return std::filesystem::path(out.string() + ".manifest.json");
    }

    void write_beside(const std::filesystem::path& out) const {
        const auto path = path_for(out);
        std::ofstream f(path);
        if (!f) throw DataError("cannot write " + path.string());
        f << to_json().dump(2) << '\n';
    }
};

}  // namespace revset
