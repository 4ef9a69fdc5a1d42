#include "navsim/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "navsim/errors.hpp"

namespace navsim {

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

}  // namespace

RunManifest::RunManifest(std::string command, std::string out_dir)
    : command_(std::move(command)), out_dir_(std::move(out_dir)) {
    path_ = out_dir_ + "/manifest.json";
}

void RunManifest::set_input(const std::string& key, const std::string& value) {
    inputs_.emplace_back(key, value);
}

void RunManifest::set_seed(std::uint64_t seed) {
    seed_ = seed;
    has_seed_ = true;
}

void RunManifest::add_output(const std::string& path) { outputs_.push_back(path); }

void RunManifest::begin() {
    std::filesystem::create_directories(out_dir_);
    started_ = utc_now();
    write("running", false);
}

void RunManifest::finish(bool success) { write(success ? "done" : "failed", true); }

void RunManifest::write(const std::string& status, bool with_end) const {
    nlohmann::json doc;
    doc["version"] = kVersion;
    doc["command"] = command_;
    doc["status"] = status;
    doc["out_dir"] = out_dir_;
    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [k, v] : inputs_) inputs[k] = v;
    doc["inputs"] = inputs;
    if (has_seed_) doc["seed"] = seed_;
    doc["started_utc"] = started_;
    if (with_end) doc["finished_utc"] = utc_now();
    doc["outputs"] = outputs_;

    std::ofstream out(path_, std::ios::trunc);
    if (!out) throw InputError("cannot write manifest: " + path_);
    out << doc.dump(2) << '\n';
}

}  // namespace navsim
