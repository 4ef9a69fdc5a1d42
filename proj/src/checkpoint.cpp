#include "navsim/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "navsim/errors.hpp"

namespace navsim {

namespace {

using nlohmann::json;

static_assert(sizeof(double) == 8, "checkpoint format assumes 64-bit doubles");

void write_doubles_le(std::ofstream& out, const std::vector<double>& values) {
    for (double d : values) {
        std::uint64_t bits;
        std::memcpy(&bits, &d, 8);
        if constexpr (std::endian::native == std::endian::big) {
            bits = __builtin_bswap64(bits);
        }
        char buf[8];
        std::memcpy(buf, &bits, 8);
        out.write(buf, 8);
    }
}

void read_doubles_le(std::ifstream& in, std::vector<double>& values) {
    for (double& d : values) {
        char buf[8];
        in.read(buf, 8);
        if (!in) throw InputError("checkpoint truncated");
        std::uint64_t bits;
        std::memcpy(&bits, buf, 8);
        if constexpr (std::endian::native == std::endian::big) {
            bits = __builtin_bswap64(bits);
        }
        std::memcpy(&d, &bits, 8);
    }
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    json header;
    header["schema_version"] = 1;
    header["format"] = "navsim-checkpoint";
    header["widths"] = ckpt.net.widths();
    header["activation"] = "tanh";
    header["train_step"] = ckpt.train_step;
    header["config"] =
        ckpt.config_echo.empty() ? json(nullptr) : json::parse(ckpt.config_echo);
    header["rng_state"] = ckpt.rng_state;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write checkpoint: " + path);
    out << header.dump() << '\n';
    for (const QNetwork::Layer& layer : ckpt.net.layers()) {
        write_doubles_le(out, layer.weights);
        write_doubles_le(out, layer.biases);
    }
    if (!out) throw InputError("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open checkpoint: " + path);

    std::string header_line;
    if (!std::getline(in, header_line)) throw InputError("checkpoint header missing");

    json header;
    try {
        header = json::parse(header_line);
    } catch (const json::exception& e) {
        throw InputError(std::string("checkpoint header is not valid JSON: ") + e.what());
    }
    if (header.value("format", "") != "navsim-checkpoint" ||
        header.value("schema_version", 0) != 1) {
        throw InputError("not a navsim checkpoint: " + path);
    }

    Checkpoint ckpt;
    ckpt.net = QNetwork(header.at("widths").get<std::vector<int>>());
    ckpt.train_step = header.value("train_step", 0LL);
    if (header.contains("config") && !header["config"].is_null()) {
        ckpt.config_echo = header["config"].dump();
    }
    ckpt.rng_state = header.value("rng_state", "");

    for (QNetwork::Layer& layer : ckpt.net.layers()) {
        read_doubles_le(in, layer.weights);
        read_doubles_le(in, layer.biases);
    }
    return ckpt;
}

}  // namespace navsim
