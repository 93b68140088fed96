#include "spintower/report.hpp"

#include <json.hpp>
#include <sstream>

namespace spintower {

using ordered_json = nlohmann::ordered_json;

Report::Section& Report::section(const std::string& name) {
    for (auto& s : sections)
        if (s.name == name) return s;
    sections.push_back({name, {}});
    return sections.back();
}

void Report::add(const std::string& section_name, const std::string& key,
                 const std::string& value) {
    section(section_name).entries.emplace_back(key, value);
}

bool Report::any_fail() const {
    auto is_fail = [](const std::string& v) { return v == "FAIL" || v.rfind("FAIL:", 0) == 0; };
    for (const auto& s : sections)
        for (const auto& [k, v] : s.entries) {
            (void)k;
            if (is_fail(v)) return true;
        }
    return false;
}

std::string Report::text() const {
    std::ostringstream os;
    os << "# " << version << " " << command << "\n";
    if (!config.empty()) {
        os << "[config]\n";
        for (const auto& [k, v] : config) os << k << " = " << v << "\n";
    }
    for (const auto& s : sections) {
        os << "[" << s.name << "]\n";
        for (const auto& [k, v] : s.entries) {
            if (v.find('\n') == std::string::npos) {
                os << k << " = " << v << "\n";
            } else {
                os << k << ":\n";
                std::istringstream lines(v);
                std::string line;
                while (std::getline(lines, line)) os << "  " << line << "\n";
            }
        }
    }
    return os.str();
}

std::string Report::json() const {
    ordered_json j;
    j["version"] = version;
    j["command"] = command;
    ordered_json cfg = ordered_json::array();
    for (const auto& [k, v] : config) cfg.push_back({{"key", k}, {"value", v}});
    j["config"] = std::move(cfg);
    ordered_json secs = ordered_json::array();
    for (const auto& s : sections) {
        ordered_json entries = ordered_json::array();
        for (const auto& [k, v] : s.entries) entries.push_back({{"key", k}, {"value", v}});
        secs.push_back({{"name", s.name}, {"entries", std::move(entries)}});
    }
    j["sections"] = std::move(secs);
    return j.dump(2) + "\n";
}

Report Report::from_json(const std::string& bytes) {
    ordered_json j = ordered_json::parse(bytes);
    Report r;
    r.version = j.at("version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    for (const auto& e : j.at("config"))
        r.config.emplace_back(e.at("key").get<std::string>(), e.at("value").get<std::string>());
    for (const auto& s : j.at("sections")) {
        Section sec;
        sec.name = s.at("name").get<std::string>();
        for (const auto& e : s.at("entries"))
            sec.entries.emplace_back(e.at("key").get<std::string>(),
                                     e.at("value").get<std::string>());
        r.sections.push_back(std::move(sec));
    }
    return r;
}

}  // namespace spintower
