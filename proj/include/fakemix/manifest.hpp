#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fakemix::pipeline {

struct ManifestEntry {
    std::string id;
    std::filesystem::path image;     // relative to the manifest directory
    std::filesystem::path seg;
    std::optional<std::filesystem::path> boundary;
    std::string split = "train";
};

/// JSON-lines dataset index: a header record with format version and channel
/// means, then one entry per line. Paths are stored relative to the manifest
/// file so trees can be moved wholesale.
struct Manifest {
    static constexpr int kFormatVersion = 1;

    int format_version = kFormatVersion;
    std::array<double, 3> channel_mean{0.0, 0.0, 0.0};
    std::vector<ManifestEntry> entries;
    std::filesystem::path root;  // directory of the manifest file

    std::filesystem::path image_path(const ManifestEntry& e) const { return root / e.image; }
    std::filesystem::path seg_path(const ManifestEntry& e) const { return root / e.seg; }
    std::optional<std::filesystem::path> boundary_path(const ManifestEntry& e) const {
        if (!e.boundary) return std::nullopt;
        return root / *e.boundary;
    }

    /// Load and validate: recognized version, unique ids, referenced files
    /// present. Throws std::runtime_error on violations.
    static Manifest load(const std::filesystem::path& path);

    /// Write atomically (temp file + rename), deterministic bytes.
    void save(const std::filesystem::path& path) const;
};

}  // namespace fakemix::pipeline
