#pragma once

#include <cstddef>
#include <vector>

#include "navsim/rng.hpp"

namespace navsim {

struct Transition {
    std::vector<double> state;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_state;
    bool done = false;
};

// Fixed-capacity circular store; oldest entries are overwritten first.
// Sampling is uniform with replacement over the current contents.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        storage_.reserve(capacity);
    }

    void push(Transition t) {
        if (storage_.size() < capacity_) {
            storage_.push_back(std::move(t));
        } else {
            storage_[head_] = std::move(t);
        }
        head_ = (head_ + 1) % capacity_;
    }

    std::size_t size() const { return storage_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t i) const { return storage_[i]; }

    std::vector<const Transition*> sample(std::size_t batch, Rng& rng) const {
        std::vector<const Transition*> out;
        out.reserve(batch);
        for (std::size_t i = 0; i < batch; ++i) {
            out.push_back(&storage_[rng.uniform_int(storage_.size())]);
        }
        return out;
    }

private:
    std::size_t capacity_;
    std::size_t head_ = 0;
    std::vector<Transition> storage_;
};

}  // namespace navsim
