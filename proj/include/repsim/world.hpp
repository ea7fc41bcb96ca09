#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "repsim/behaviors.hpp"
#include "repsim/config.hpp"
#include "repsim/events.hpp"
#include "repsim/message.hpp"
#include "repsim/metrics.hpp"
#include "repsim/mobility.hpp"
#include "repsim/net.hpp"
#include "repsim/protocol.hpp"
#include "repsim/reputation.hpp"
#include "repsim/rng.hpp"
#include "repsim/types.hpp"

namespace repsim::sim {

/** Fixed node placement for scenario tests: position, radio, beacon interval, disposition. */
struct ScenarioNode {
    Vec2 pos;
    double radio = 100.0;
    int tau_hello = 6;
    strategy::Strategy strat = strategy::Strategy::SelfishSupportive;
};

struct RunResult {
    metrics::RunTallies tallies;
    metrics::RunMetrics metrics;
};

/**
 * One simulated network: nodes, their ledgers and queues, and the global
 * event loop. Given the same configuration and seed, every event, score and
 * trace line replays identically.
 */
class World {
public:
    /** Random layout: waypoint positions, radio ranges and beacon intervals drawn per node. */
    World(const SimConfig& cfg, uint64_t seed);

    /** Pinned layout for scenario tests. Nodes stay where they are put (no waypoint motion). */
    World(const SimConfig& cfg, const std::vector<ScenarioNode>& nodes, uint64_t seed);

    void enable_trace() { trace_on_ = true; }

    /** Processes events through the configured horizon. */
    void run() { run_until(cfg_.sim_time); }

    /** Processes events with time <= t (and <= the horizon). Callable repeatedly. */
    void run_until(Clock t);

    RunResult harvest() const;

    const std::vector<std::string>& trace() const { return trace_lines_; }
    uint64_t trace_hash() const { return trace_hash_; }
    Clock now() const { return now_; }

    // test inspection and drivers
    double score_at(NodeId holder, NodeId subject) const;
    bool network_blacklisted_at(NodeId holder, NodeId subject) const;
    bool locally_blacklisted_at(NodeId holder, NodeId subject) const;
    int64_t allegation_count() const { return allegations_; }
    int64_t delivered_count() const { return delivered_; }
    int64_t generated_count() const { return generated_; }
    Vec2 position(NodeId id) const;

    /** Schedules one data transfer attempt from src to dst at the given time. */
    void inject_data(NodeId src, NodeId dst, Clock at);

    /** Seeds a concealment pact directly: concealer hides the protected node's beacon history. */
    void force_pact(NodeId concealer, NodeId protect);

private:
    struct HeldInfo {
        proto::Message msg;
        NodeId from = NO_NODE;
        Clock received_at = 0.0;
    };

    struct Node {
        NodeId id = 0;
        strategy::Strategy strat = strategy::Strategy::SelfishSupportive;
        double radio = 100.0;
        int tau_hello = 6;
        net::WaypointState wp;
        Rng rng{1};
        rep::ReputationLedger ledger;
        net::HelloArchive archive;
        net::PositionLog poslog;
        std::vector<rep::QueueEntry> queue;
        bool serving = false;
        int64_t arrivals = 0;
        std::map<MsgId, HeldInfo> held;
        std::map<MsgId, proto::ForwardState> pending;
        std::map<MsgId, proto::HopRecord> own_record;
        std::set<MsgId> seen;
        std::map<NodeId, proto::RreqLimiter> limiters;
        std::map<NodeId, int> no_route_strikes;
        std::set<NodeId> pact;
        double energy = 0.0;
        double wasted = 0.0;
        std::map<MsgId, double> spend_log;   // data-plane spend per message, for attack attribution
        bool acted = false;
    };

    struct Investigation {
        NodeId investigator = NO_NODE;
        NodeId suspect = NO_NODE;
        MsgId msg = 0;
        Clock t0 = 0.0;
        Clock t1 = 0.0;
        std::vector<std::pair<NodeId, std::vector<proto::ReplyRecord>>> replies;
    };

    struct EvMobility {};
    struct EvHello { NodeId node; };
    struct EvDeliver { NodeId from; NodeId to; proto::Message msg; };
    struct EvQueueDone { NodeId node; };
    struct EvHopCheck { NodeId node; MsgId msg; int checkpoint; };
    struct EvGammaCheck { NodeId node; MsgId msg; };
    struct EvInquiryClose { NodeId node; int64_t inv; };
    struct EvTraffic { NodeId node; };
    struct EvAttackTick { NodeId node; };
    struct EvDelayedRelease { NodeId node; MsgId msg; };
    struct EvAltVerify { NodeId node; MsgId msg; NodeId subject; bool confirmed; };
    struct EvInject { NodeId src; NodeId dst; };

    using Event = std::variant<EvMobility, EvHello, EvDeliver, EvQueueDone, EvHopCheck,
                               EvGammaCheck, EvInquiryClose, EvTraffic, EvAttackTick,
                               EvDelayedRelease, EvAltVerify, EvInject>;

    void init_common(const SimConfig& cfg);
    void schedule_initial();

    void dispatch(const Event& ev);
    void on_mobility();
    void on_hello(NodeId n);
    void on_deliver(NodeId from, NodeId to, const proto::Message& msg);
    void on_queue_done(NodeId n);
    void on_hop_check(NodeId n, MsgId m, int checkpoint);
    void on_gamma_check(NodeId n, MsgId m);
    void on_inquiry_close(NodeId n, int64_t inv);
    void on_traffic(NodeId n);
    void on_attack_tick(NodeId n);
    void on_delayed_release(NodeId n, MsgId m);
    void on_alt_verify(NodeId n, MsgId m, NodeId subject, bool confirmed);

    // receipt handlers
    void receive_data(Node& r, NodeId from, const proto::Message& msg);
    void receive_ack(Node& r, NodeId from, const proto::Message& msg);
    void receive_rreq(Node& r, const proto::Message& msg);
    void receive_copy_return(Node& r, const proto::Message& msg);
    void receive_departure(Node& r, const proto::Message& msg);
    void receive_collusion_request(Node& r, const proto::Message& msg);
    void receive_allegation(Node& r, const proto::Message& msg);

    // actions
    void initiate_transfer(NodeId src, NodeId dst);
    void launch_hop(Node& n, const proto::Message& msg);
    void service_data(Node& n, MsgId m);
    void service_ack(Node& n, MsgId m);
    void enqueue_packet(Node& n, MsgId m, NodeId source);
    void send_direct_ack(Node& n, const proto::Message& data, NodeId to);
    void start_investigation(Node& i, proto::ForwardState& st);
    void broadcast_allegation(Node& accuser, proto::AllegationPacket packet, bool attack_action);
    void scan_departures();

    // reputation choke points: every score move funnels through these two
    double rep_apply(Node& holder, NodeId subject, rep::RepEvent ev);
    double rep_set(Node& holder, NodeId subject, double value);
    void note_network_blacklist(Node& holder, NodeId subject);

    // plumbing
    Node& node(NodeId id) { return nodes_[static_cast<size_t>(id)]; }
    const Node& node(NodeId id) const { return nodes_[static_cast<size_t>(id)]; }
    bool reaches(const Node& from, const Node& to) const;
    std::vector<NodeId> neighbors_of(NodeId id) const;
    std::vector<NodeId> route(NodeId src, NodeId dst, NodeId exclude,
                              const rep::ReputationLedger& view) const;
    std::vector<std::pair<NodeId, int>> broadcast_layers(NodeId origin) const;
    void transmit(Node& from, NodeId to, const proto::Message& msg, MsgId spend_key);
    void charge(Node& n, double amount, MsgId spend_key, bool attacker_waste = false);
    void taint(MsgId m);
    void push(Clock t, Event ev);
    void note_event(const std::string& line);
    NodeId partner_of(NodeId colluder) const;

    SimConfig cfg_;
    proto::ProtocolParams params_;
    rep::RewardSchedule sched_;
    net::Arena arena_;
    bool pinned_ = false;

    std::vector<Node> nodes_;
    net::EventQueue<Event> queue_;
    Clock now_ = 0.0;
    MsgId next_msg_id_ = 1;
    int64_t next_inv_id_ = 1;
    std::map<int64_t, Investigation> investigations_;
    std::map<NodeId, NodeId> pact_partner_;   // colluder pairing, fixed at construction

    std::set<MsgId> tainted_;
    std::set<NodeId> condemned_;   // subjects network-blacklisted anywhere, first-verdict order
    std::vector<double> rep_lost_;
    std::vector<bool> acted_;

    int64_t allegations_ = 0;
    int64_t generated_ = 0;
    int64_t delivered_ = 0;
    int64_t events_ = 0;

    bool trace_on_ = false;
    std::vector<std::string> trace_lines_;
    uint64_t trace_hash_ = 0;
};

RunResult run_simulation(const SimConfig& cfg, uint64_t run_seed, bool trace = false);

struct SweepResult {
    std::vector<metrics::RunMetrics> rows;   // one aggregated row per malicious count
    uint64_t trace_hash = 0;                 // combined across every run, for replay checks
};

/** Runs cfg.runs seeded runs per malicious count and aggregates each count's metrics. */
SweepResult run_sweep(const SimConfig& base, const std::vector<int>& malicious_counts);

} // namespace repsim::sim
