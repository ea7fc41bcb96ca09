#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "repsim/types.hpp"

namespace repsim::net {

/**
 * Time-ordered event queue. Equal timestamps pop in push order, so a run's
 * event sequence is a pure function of what was pushed, never of heap layout.
 */
template <class T>
class EventQueue {
public:
    struct Item {
        Clock time;
        int64_t seq;
        T payload;
    };

    int64_t push(Clock time, T payload) {
        const int64_t seq = next_seq_++;
        heap_.push(Item{time, seq, std::move(payload)});
        return seq;
    }

    Item pop() {
        if (heap_.empty()) throw Error("event queue: pop on empty queue");
        Item top = heap_.top();
        heap_.pop();
        return top;
    }

    const Item& peek() const {
        if (heap_.empty()) throw Error("event queue: peek on empty queue");
        return heap_.top();
    }

    bool empty() const { return heap_.empty(); }
    size_t size() const { return heap_.size(); }

private:
    struct Later {
        bool operator()(const Item& a, const Item& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Item, std::vector<Item>, Later> heap_;
    int64_t next_seq_ = 0;
};

} // namespace repsim::net
