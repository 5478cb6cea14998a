#include "fakemix/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fakemix::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

Manifest Manifest::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path.string());

    Manifest m;
    m.root = path.has_parent_path() ? path.parent_path() : fs::path(".");

    std::string line;
    bool have_header = false;
    std::set<std::string> ids;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        // Parse and field-extraction errors both get file/line context;
        // semantic errors below keep their specific messages.
        try {
            const json j = json::parse(line);
            if (!have_header) {
                m.format_version = j.at("format_version").get<int>();
                if (m.format_version != kFormatVersion)
                    throw std::runtime_error("unrecognized manifest version " +
                                             std::to_string(m.format_version));
                const auto mean = j.at("channel_mean").get<std::vector<double>>();
                if (mean.size() != 3)
                    throw std::runtime_error("manifest channel_mean must have 3 values");
                std::copy(mean.begin(), mean.end(), m.channel_mean.begin());
                have_header = true;
                continue;
            }
            ManifestEntry e;
            e.id = j.at("id").get<std::string>();
            e.image = fs::path(j.at("image").get<std::string>());
            e.seg = fs::path(j.at("seg").get<std::string>());
            if (j.contains("boundary") && !j.at("boundary").is_null())
                e.boundary = fs::path(j.at("boundary").get<std::string>());
            if (j.contains("split")) e.split = j.at("split").get<std::string>();
            if (!ids.insert(e.id).second)
                throw std::runtime_error("duplicate manifest id: " + e.id);
            for (const fs::path* p : {&e.image, &e.seg}) {
                if (!fs::exists(m.root / *p))
                    throw std::runtime_error("manifest references missing file: " +
                                             (m.root / *p).string());
            }
            if (e.boundary && !fs::exists(m.root / *e.boundary))
                throw std::runtime_error("manifest references missing file: " +
                                         (m.root / *e.boundary).string());
            m.entries.push_back(std::move(e));
        } catch (const json::exception& e) {
            throw std::runtime_error("manifest " + path.string() + " line " +
                                     std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!have_header) throw std::runtime_error("manifest has no header line: " + path.string());
    return m;
}

void Manifest::save(const fs::path& path) const {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write manifest: " + tmp.string());
        json header{{"format_version", format_version},
                    {"channel_mean",
                     std::vector<double>(channel_mean.begin(), channel_mean.end())}};
        out << header.dump() << "\n";
        for (const ManifestEntry& e : entries) {
            json j{{"id", e.id},
                   {"image", e.image.generic_string()},
                   {"seg", e.seg.generic_string()},
                   {"split", e.split}};
            if (e.boundary) j["boundary"] = e.boundary->generic_string();
            out << j.dump() << "\n";
        }
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace fakemix::pipeline
