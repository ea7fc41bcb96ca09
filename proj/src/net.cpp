#include "repsim/net.hpp"

#include <algorithm>

namespace repsim::net {

std::vector<NodeId> downlink_neighbors(NodeId i, const std::vector<Vec2>& pos,
                                       const std::vector<double>& range) {
    std::vector<NodeId> out;
    for (NodeId j = 0; j < static_cast<NodeId>(pos.size()); ++j) {
        if (j == i) continue;
        if (in_range(pos[i], range[i], pos[j])) out.push_back(j);
    }
    return out;
}

std::vector<NodeId> uplink_neighbors(NodeId i, const std::vector<Vec2>& pos,
                                     const std::vector<double>& range) {
    std::vector<NodeId> out;
    for (NodeId j = 0; j < static_cast<NodeId>(pos.size()); ++j) {
        if (j == i) continue;
        if (in_range(pos[j], range[j], pos[i])) out.push_back(j);
    }
    return out;
}

std::vector<HelloRecord> HelloArchive::query(NodeId sender, Clock t0, Clock t1) const {
    std::vector<HelloRecord> out;
    auto it = by_sender_.find(sender);
    if (it == by_sender_.end()) return out;
    for (const HelloRecord& r : it->second) {
        if (r.time >= t0 && r.time < t1) out.push_back(r);
    }
    return out;
}

size_t HelloArchive::total() const {
    size_t n = 0;
    for (const auto& [sender, records] : by_sender_) n += records.size();
    return n;
}

Vec2 PositionLog::at(Clock t) const {
    if (samples_.empty()) throw Error("position log: empty");
    auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                               [](Clock v, const Sample& s) { return v < s.t; });
    if (it == samples_.begin()) return samples_.front().pos;
    return std::prev(it)->pos;
}

} // namespace repsim::net
