#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "repsim/types.hpp"

namespace repsim::rep {

/** Reward magnitudes shared by every node. alpha must exceed 1, phi_size must exceed 3. */
struct RewardSchedule {
    double alpha = 2.0;
    int phi_size = 4;

    void validate() const;
    double alpha_sq() const { return alpha * alpha; }
    /** Score cap |phi|: scores live in [-cap, +cap]. */
    double cap() const { return static_cast<double>(phi_size); }
};

enum class RepEvent {
    AckConfirmedForward,   // +alpha: successor's forward confirmed by an acknowledgement
    GeneratorDebit,        // -alpha^2: charged to a message's originator at each router
    DetectionReward,       // +alpha^2: cooperating in a detection
    SupportiveSet,         // set to alpha*|phi| clamped to |phi|: volunteered a witness copy
    SetMax,                // set to +|phi|: vindicated by a verified allegation
    LocalBlacklist,        // flag only: this node stops assigning work to the subject
    NetworkBlacklist,      // flag + score -|phi|; absorbing
};

struct PeerRecord {
    double score = 0.0;
    int link_break_count = 0;
    int delay_count = 0;
    int64_t traffic_generated = 0;   // packets the peer originated that reached this node
    int64_t traffic_forwarded = 0;   // packets this node forwarded for the peer
    bool local_blacklist = false;
    bool network_blacklist = false;
};

struct QueueEntry {
    MsgId msg = 0;
    NodeId source = NO_NODE;
    int64_t arrival = 0;   // monotone arrival index, breaks score ties first-come-first-served
};

/**
 * One node's view of everyone it has interacted with: scores, suspicion
 * counters, blacklists and the running score extremes. Scores are clamped to
 * [-|phi|, +|phi|]; an additive update that would fall below the floor clamps
 * and marks the subject locally blacklisted. A network-blacklisted subject
 * ignores every further event except renewed blacklisting.
 */
class ReputationLedger {
public:
    /** Ensures the subject exists with a zero score. Idempotent. */
    void init_peer(NodeId j);
    bool known(NodeId j) const { return peers_.count(j) != 0; }

    double score(NodeId j) const;
    const PeerRecord& record(NodeId j) const;

    /** Applies one reputation event and returns the subject's resulting score. */
    double apply(NodeId j, RepEvent ev, const RewardSchedule& sched);

    /** Direct score write (penalty decider output). Still clamped and extreme-tracked. */
    double set_score(NodeId j, double value, const RewardSchedule& sched);

    /** Comparative reputation (R - r_min) / (r_max - r_min + 1). Errors on unknown subjects. */
    double comparative(NodeId j) const;

    /** Served-vs-generated expectation F / (T + 1). Errors on unknown subjects. */
    double expectation(NodeId j) const;

    int note_link_break_suspicion(NodeId j);
    int note_delay_suspicion(NodeId j);
    void record_generated(NodeId j);
    void record_forwarded(NodeId j);

    bool locally_blacklisted(NodeId j) const;
    bool network_blacklisted(NodeId j) const;

    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }
    const std::map<NodeId, PeerRecord>& peers() const { return peers_; }

    /**
     * Priority order for a message queue: descending source score, ties kept
     * first-come-first-served by arrival index. Entries whose source is
     * network-blacklisted are dropped. Unknown sources count as score zero.
     */
    std::vector<QueueEntry> order_queue(const std::vector<QueueEntry>& entries) const;

private:
    PeerRecord& fetch(NodeId j);
    double write_score(PeerRecord& r, double value, double cap);

    std::map<NodeId, PeerRecord> peers_;
    double r_min_ = 0.0;   // widen-only extremes over every score ever held
    double r_max_ = 0.0;
};

} // namespace repsim::rep
