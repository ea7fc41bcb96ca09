#pragma once

#include <map>
#include <vector>

#include "repsim/types.hpp"

namespace repsim::net {

/** Wire time of one packet: every packet is padded to a fixed size. */
inline double transmit_latency(int packet_bytes, double bandwidth_bps) {
    return static_cast<double>(packet_bytes) * 8.0 / bandwidth_bps;
}

/** True when `to` sits strictly inside `from`'s radio circle. */
inline bool in_range(const Vec2& from_pos, double from_range, const Vec2& to_pos) {
    return dist(from_pos, to_pos) < from_range;
}

/**
 * Downlink neighbor set N(i): every j the node can transmit to. Ranges differ
 * per node, so N is directed; the uplink set U(i) = {j : i in N(j)} is the
 * reverse view.
 */
std::vector<NodeId> downlink_neighbors(NodeId i, const std::vector<Vec2>& pos,
                                       const std::vector<double>& range);
std::vector<NodeId> uplink_neighbors(NodeId i, const std::vector<Vec2>& pos,
                                     const std::vector<double>& range);

/** One archived beacon: who sent it, when, and from where. */
struct HelloRecord {
    NodeId sender = NO_NODE;
    Clock time = 0.0;
    Vec2 pos;

    bool operator==(const HelloRecord&) const = default;
};

/** Append-only beacon archive, queryable per sender over a half-open time window. */
class HelloArchive {
public:
    void add(const HelloRecord& r) { by_sender_[r.sender].push_back(r); }

    /** Records from `sender` with time in [t0, t1), in arrival order. */
    std::vector<HelloRecord> query(NodeId sender, Clock t0, Clock t1) const;

    size_t total() const;

private:
    std::map<NodeId, std::vector<HelloRecord>> by_sender_;
};

/** Sampled position history; lookups return the last sample at or before t. */
class PositionLog {
public:
    void add(Clock t, const Vec2& p) { samples_.push_back({t, p}); }
    Vec2 at(Clock t) const;
    bool empty() const { return samples_.empty(); }

private:
    struct Sample {
        Clock t;
        Vec2 pos;
    };
    std::vector<Sample> samples_;
};

} // namespace repsim::net
