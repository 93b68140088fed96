#pragma once
// Deterministic structured reports: named sections of key/value entries,
// rendered as text or JSON with byte-stable output.

#include <string>
#include <vector>

namespace spintower {

struct Report {
    struct Section {
        std::string name;
        std::vector<std::pair<std::string, std::string>> entries;
    };

    std::string version;
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;  // echo, insertion order
    std::vector<Section> sections;

    Section& section(const std::string& name);
    void add(const std::string& section_name, const std::string& key, const std::string& value);

    // true when any entry value is "FAIL" or starts with "FAIL:"
    bool any_fail() const;

    std::string text() const;
    std::string json() const;
    // inverse of json(); throws std::runtime_error on malformed input
    static Report from_json(const std::string& bytes);
};

}  // namespace spintower
