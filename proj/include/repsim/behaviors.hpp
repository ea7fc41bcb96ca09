#pragma once

#include <string>

#include "repsim/rng.hpp"
#include "repsim/types.hpp"

namespace repsim::strategy {

/**
 * Node dispositions. Selfish nodes cooperate to maximize their own standing;
 * malicious nodes each run one attack style and do not care about standing.
 */
enum class Strategy {
    SelfishSupportive,        // cooperates and volunteers witness copies
    SelfishInterruptDriven,   // cooperates only when obliged, never volunteers
    MaliciousLinkBreak,       // accepts forwarding tasks, then stays silent
    MaliciousDelay,           // forwards, but far beyond the justifiable delay
    MaliciousFlood,           // saturates neighbors with route requests
    MaliciousCollude,         // recruits neighbors to conceal beacon history
    MaliciousSlander,         // broadcasts proofless allegations against honest nodes
};

constexpr int MALICIOUS_KINDS = 5;

bool is_malicious(Strategy s);
bool is_selfish(Strategy s);

const char* strategy_name(Strategy s);
Strategy parse_strategy(const std::string& name);

enum class ForwardAction { Forward, Silent, Delay };

/** What the node does with a forwarding task it has accepted. */
ForwardAction decide_forward_action(Strategy s);

/** Whether an eligible bystander volunteers its overheard copy. */
bool decide_witness_action(Strategy s, bool eligible);

enum class HelloReplyAction { Full, Conceal, Refuse };

/** Response to a beacon-history enquiry. Concealment requires an active pact covering the accused. */
HelloReplyAction decide_hello_reply(Strategy s, bool pact_covers_accused);

/** Per-source packet generation: exponential spacing at the given rate. */
double next_traffic_gap(Rng& rng, double rate);

/** Uniform destination among the other nodes. */
NodeId pick_destination(Rng& rng, int node_count, NodeId self);

/** Uniform draw over the five malicious kinds. */
Strategy pick_malicious_strategy(Rng& rng);

/** Tunables for the attack styles; zeros select protocol-derived defaults. */
struct AttackParams {
    double delay_extra = 0.0;         // seconds a delayer sits on each packet
    double flood_rate = 0.0;          // route requests per second
    double collusion_interval = 30.0; // seconds between recruitment rounds
};

} // namespace repsim::strategy
