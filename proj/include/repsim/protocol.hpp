#pragma once

#include <vector>

#include "repsim/message.hpp"
#include "repsim/types.hpp"

namespace repsim::proto {

enum class BlacklistRule {
    Pseudocode,   // supporting count lands on ceil((t2-t1)/tau_hello) or one less
    Prose,        // x' = x'' = y exactly
};

enum class DelayRule {
    Prose,        // forward delay beyond (m-1)*tau + 3*tau_prime
    Pseudocode,   // forward time minus last retransmission beyond (m-1)*tau
};

struct ProtocolParams {
    double tau = 0.05;
    double tau_prime = 10.0;
    int eta = 5;
    BlacklistRule blacklist_rule = BlacklistRule::Pseudocode;
    DelayRule delay_rule = DelayRule::Prose;
};

/** Beacon budget y: how many HELLOs fit into the three retransmission windows. */
int hello_budget(double tau_prime, int tau_hello);

/** Expected beacon count z over an arbitrary window, rounded up. */
int hello_expected(Clock t0, Clock t1, int tau_hello);

/** Longest forwarding delay an honest node can justify: (m-1)*tau + 3*tau_prime. */
double delay_threshold(int queue_size, double tau, double tau_prime);

bool blacklist_verdict(BlacklistRule rule, int x2, int x1, int y, int z);

bool delay_attack(DelayRule rule, Clock t_first, Clock t_last, Clock t_forward,
                  int queue_size, double tau, double tau_prime);

/**
 * Source wait for the destination ACK over a path with the given router queue
 * sizes: (lambda+1)*tau + (tau + 3*tau_prime)*lambda + sum (m_i - 2)*tau.
 */
double compute_gamma(const std::vector<int>& router_queue_sizes, double tau, double tau_prime);

/** Replays an allegation's proof. True means the accused is guilty. */
bool allegation_guilty(const AllegationPacket& a, const ProtocolParams& p);

/**
 * Per-requester route-request budget at one observer: eta requests per
 * one-second window. The request that exceeds the budget returns the stored
 * burst as proof and resets the window.
 */
class RreqLimiter {
public:
    struct Outcome {
        bool flood = false;
        std::vector<Clock> bundle;   // eta+1 request times when flood is set
    };

    Outcome note_request(Clock now, int eta);

private:
    bool open_ = false;
    Clock window_start_ = 0.0;
    std::vector<Clock> stored_;
};

/** Progress of one hop transfer awaiting confirmation at the predecessor. */
struct ForwardState {
    MsgId msg = 0;
    NodeId successor = NO_NODE;
    Clock first_send = 0.0;
    Clock last_send = 0.0;
    int attempts = 1;           // transmissions so far, capped at 3
    bool confirmed = false;     // any forward evidence arrived
    bool excused = false;       // departure notice or returned copy: never complain
    bool reward_paid = false;   // +alpha granted once per hop
    bool investigated = false;
    bool gamma_checked = false;
};

} // namespace repsim::proto
