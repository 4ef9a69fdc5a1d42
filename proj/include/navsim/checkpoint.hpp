#pragma once

#include <string>

#include "navsim/qnet.hpp"

namespace navsim {

// A checkpoint is a single-line JSON header followed by raw little-endian
// 64-bit float parameter blocks, layer by layer, weights before biases,
// row-major. Round-trips are bit-exact.
struct Checkpoint {
    QNetwork net;
    long long train_step = 0;
    std::string config_echo;  // training config JSON, verbatim
    std::string rng_state;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace navsim
