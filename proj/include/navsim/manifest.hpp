#pragma once

#include <string>
#include <vector>

namespace navsim {

inline constexpr const char* kVersion = "navsim 0.1.0";

// Every command writes a manifest into its output directory before doing any
// work, then finalizes it with the produced files on success. Timestamps make
// the manifest the one output that is not byte-reproducible.
class RunManifest {
public:
    RunManifest(std::string command, std::string out_dir);

    void set_input(const std::string& key, const std::string& value);
    void set_seed(std::uint64_t seed);
    void add_output(const std::string& path);

    // Write the initial manifest (status "running").
    void begin();
    // Rewrite with outputs and end timestamp (status "done" / "failed").
    void finish(bool success);

    const std::string& path() const { return path_; }
    const std::vector<std::string>& outputs() const { return outputs_; }

private:
    void write(const std::string& status, bool with_end) const;

    std::string command_;
    std::string out_dir_;
    std::string path_;
    std::string started_;
    std::vector<std::pair<std::string, std::string>> inputs_;
    std::uint64_t seed_ = 0;
    bool has_seed_ = false;
    std::vector<std::string> outputs_;
};

}  // namespace navsim
