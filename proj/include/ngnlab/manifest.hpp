#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "ngnlab/errors.hpp"

namespace ngnlab {

struct ManifestEntry {
    std::string image_path;  // resolved (root-relative entries are joined with root)
    int label = 0;           // {0, 1}
    std::optional<std::string> mask_path;
};

// One line per entry: `relative/path.png,label[,mask.png]`; '#' starts a comment.
struct DatasetManifest {
    std::string name;
    std::string root;
    std::vector<ManifestEntry> entries;
};

inline DatasetManifest load_manifest(const std::string& path) {
    namespace fs = std::filesystem;
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path);

    DatasetManifest m;
    const fs::path root = fs::path(path).parent_path();
    m.root = root.string();
    m.name = fs::path(path).stem().string();

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);

        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const auto comma = line.find(',', pos);
            fields.push_back(line.substr(pos, comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (fields.size() < 2 || fields.size() > 3)
            throw ManifestError(path + ":" + std::to_string(lineno) + ": expected 2 or 3 fields");

        ManifestEntry entry;
        entry.image_path = (root / fields[0]).string();
        if (fields[1] != "0" && fields[1] != "1")
            throw ManifestError(path + ":" + std::to_string(lineno) + ": label must be 0 or 1");
        entry.label = fields[1] == "1" ? 1 : 0;
        if (fields.size() == 3 && !fields[2].empty())
            entry.mask_path = (root / fields[2]).string();

        if (!fs::exists(entry.image_path))
            throw ManifestError(path + ":" + std::to_string(lineno) + ": missing image " +
                                entry.image_path);
        m.entries.push_back(std::move(entry));
    }
    return m;
}

}  // namespace ngnlab
