#include "repsim/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "repsim/net.hpp"

namespace repsim::proto {

const char* code_name(MsgCode c) {
    switch (c) {
        case MsgCode::Data: return "data";
        case MsgCode::Ack: return "ack";
        case MsgCode::Hello: return "hello";
        case MsgCode::HelloAck: return "hello_ack";
        case MsgCode::RouteRequest: return "rreq";
        case MsgCode::RouteReply: return "rrep";
        case MsgCode::HelloEnquiry: return "hello_enq";
        case MsgCode::HelloReply: return "hello_reply";
        case MsgCode::AllegationLink: return "allege_link";
        case MsgCode::AllegationDelay: return "allege_delay";
        case MsgCode::AllegationFlood: return "allege_flood";
        case MsgCode::AllegationCollusion: return "allege_collusion";
        case MsgCode::CollusionRequest: return "collusion_req";
        case MsgCode::BicastCopyReturn: return "copy_return";
        case MsgCode::DepartureNotice: return "departure";
    }
    return "unknown";
}

int PathRecord::q_of(NodeId router) const {
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] == router) return static_cast<int>(i);
    }
    throw Error("path record: node " + std::to_string(router) + " not on path");
}

NodeId PathRecord::next_after(NodeId n) const {
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (nodes[i] == n) return nodes[i + 1];
    }
    return NO_NODE;
}

NodeId PathRecord::prev_before(NodeId n) const {
    for (size_t i = 1; i < nodes.size(); ++i) {
        if (nodes[i] == n) return nodes[i - 1];
    }
    return NO_NODE;
}

bool PathRecord::contains(NodeId n) const {
    return std::find(nodes.begin(), nodes.end(), n) != nodes.end();
}

int hello_budget(double tau_prime, int tau_hello) {
    if (tau_hello < 1) throw Error("hello_budget: beacon interval must be positive");
    return static_cast<int>(std::floor(3.0 * tau_prime / tau_hello));
}

int hello_expected(Clock t0, Clock t1, int tau_hello) {
    if (tau_hello < 1) throw Error("hello_expected: beacon interval must be positive");
    if (t1 < t0) throw Error("hello_expected: window ends before it starts");
    return static_cast<int>(std::ceil((t1 - t0) / tau_hello));
}

double delay_threshold(int queue_size, double tau, double tau_prime) {
    if (queue_size < 1) throw Error("delay_threshold: queue size must be positive");
    return (queue_size - 1) * tau + 3.0 * tau_prime;
}

bool blacklist_verdict(BlacklistRule rule, int x2, int x1, int y, int z) {
    if (rule == BlacklistRule::Pseudocode) {
        return x2 == z || x2 == z - 1;
    }
    return x1 == x2 && x2 == y;
}

bool delay_attack(DelayRule rule, Clock t_first, Clock t_last, Clock t_forward,
                  int queue_size, double tau, double tau_prime) {
    if (rule == DelayRule::Prose) {
        return t_forward - t_first > delay_threshold(queue_size, tau, tau_prime);
    }
    return t_forward - t_last > (queue_size - 1) * tau;
}

double compute_gamma(const std::vector<int>& router_queue_sizes, double tau, double tau_prime) {
    const double lambda = static_cast<double>(router_queue_sizes.size());
    double gamma = (lambda + 1.0) * tau + (tau + 3.0 * tau_prime) * lambda;
    for (int m : router_queue_sizes) {
        if (m < 2) throw Error("compute_gamma: router queue size below 2");
        gamma += (m - 2) * tau;
    }
    return gamma;
}

namespace {

struct GuiltyCheck {
    const AllegationPacket& a;
    const ProtocolParams& p;

    bool operator()(const std::monostate&) const { return false; }

    bool operator()(const RreqBundle& b) const {
        if (b.origin != a.accused) return false;
        if (static_cast<int>(b.times.size()) < p.eta + 1) return false;
        const auto [lo, hi] = std::minmax_element(b.times.begin(), b.times.end());
        return *hi - *lo <= 1.0;
    }

    bool operator()(const BicastCopyPair& b) const {
        return delay_attack(p.delay_rule, b.t_first, b.t_last, b.t_forward,
                            b.queue_size, p.tau, p.tau_prime);
    }

    bool operator()(const HelloHistoryBundle& b) const {
        if (b.tau_hello < 1 || b.t1 < b.t0) return false;
        std::set<Clock> times;
        int x2 = 0;
        for (const HelloEvidence& e : b.records) {
            if (e.time < b.t0 || e.time >= b.t1) continue;
            if (!times.insert(e.time).second) continue;
            if (net::in_range(e.investigator_pos, b.investigator_range, e.suspect_pos)) ++x2;
        }
        const int x1 = static_cast<int>(times.size());
        const int y = hello_budget(p.tau_prime, b.tau_hello);
        const int z = hello_expected(b.t0, b.t1, b.tau_hello);
        return blacklist_verdict(p.blacklist_rule, x2, x1, y, z);
    }

    bool operator()(const ConcealmentEvidence& e) const {
        std::set<Clock> seen;
        int should_have = 0;
        for (const ConcealRecord& r : e.union_records) {
            if (!seen.insert(r.time).second) continue;
            if (net::in_range(r.suspect_pos, e.suspect_range, r.responder_pos)) ++should_have;
        }
        return e.provided < should_have;
    }

    bool operator()(const CollusionRequestCopy& c) const {
        return c.origin == a.accused && c.code == static_cast<int>(MsgCode::CollusionRequest);
    }
};

} // namespace

bool allegation_guilty(const AllegationPacket& a, const ProtocolParams& p) {
    return std::visit(GuiltyCheck{a, p}, a.proof);
}

RreqLimiter::Outcome RreqLimiter::note_request(Clock now, int eta) {
    if (eta < 1) throw Error("rreq limiter: eta must be positive");
    if (!open_ || now - window_start_ > 1.0) {
        open_ = true;
        window_start_ = now;
        stored_.assign(1, now);
        return {};
    }
    stored_.push_back(now);
    if (static_cast<int>(stored_.size()) >= eta + 1) {
        Outcome out{true, stored_};
        open_ = false;
        stored_.clear();
        return out;
    }
    return {};
}

} // namespace repsim::proto
