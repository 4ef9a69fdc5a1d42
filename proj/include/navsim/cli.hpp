#pragma once

#include <optional>
#include <string>

namespace navsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;       // bad config/scenario/params
inline constexpr int kExitDiverged = 3;    // training loss went non-finite
inline constexpr int kExitMismatch = 4;    // checkpoint/scenario dimensions differ
inline constexpr int kExitValidation = 5;  // maneuver acceptance failed

struct Options {
    std::string config;
    std::string params;
    std::string scenario;
    std::string checkpoint;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> episodes;
    std::optional<int> steps;
    int action = 2;  // rollout fixed-action policy; 2 is rudder amidships
};

// Flag beats NAVSIM_SEED beats the default of 1.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag);

int cmd_train(const Options& opts);
int cmd_eval(const Options& opts);
int cmd_rollout(const Options& opts);
int cmd_validate(const Options& opts);
int cmd_risk(const Options& opts);

}  // namespace navsim::cli
