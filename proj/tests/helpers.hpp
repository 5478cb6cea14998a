#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "fakemix/rng.hpp"
#include "fakemix/types.hpp"

namespace test_helpers {

inline fakemix::ImageTensor tensor_from(int h, int w, std::initializer_list<double> vals) {
    return fakemix::ImageTensor(h, w, 1, std::vector<double>(vals));
}

inline fakemix::BinaryMask mask_from(int h, int w, std::initializer_list<int> vals) {
    fakemix::BinaryMask m(h, w);
    auto it = vals.begin();
    for (auto& v : m.data()) v = static_cast<uint8_t>(*it++);
    return m;
}

inline fakemix::LabelMask labels_from(int h, int w, std::initializer_list<int> vals) {
    fakemix::LabelMask m(h, w);
    auto it = vals.begin();
    for (auto& v : m.data()) v = *it++;
    return m;
}

inline fakemix::ImageTensor random_tensor(int h, int w, int c, fakemix::SeededRng& rng,
                                          double lo = 0.0, double hi = 1.0) {
    fakemix::ImageTensor t(h, w, c);
    for (double& v : t.data()) v = rng.uniform(lo, hi);
    return t;
}

inline fakemix::BinaryMask random_mask(int h, int w, fakemix::SeededRng& rng, double p = 0.5) {
    fakemix::BinaryMask m(h, w);
    for (auto& v : m.data()) v = rng.bernoulli(p) ? 1 : 0;
    return m;
}

/// Scratch directory unique to a test, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("fakemix_test_" + tag + "_" + std::to_string(counter_++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

inline uint64_t hash_bytes(const std::string& bytes, uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline uint64_t hash_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return hash_bytes(bytes);
}

/// Order-independent content hash: filenames are sorted, names and bytes
/// both feed the digest.
inline uint64_t hash_tree(const std::filesystem::path& root) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(root))
        if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    uint64_t h = 1469598103934665603ull;
    for (const auto& f : files) {
        h = hash_bytes(std::filesystem::relative(f, root).generic_string(), h);
        std::ifstream in(f, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
        h = hash_bytes(bytes, h);
    }
    return h;
}

}  // namespace test_helpers
