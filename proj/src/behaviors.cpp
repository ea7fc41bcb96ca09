#include "repsim/behaviors.hpp"

namespace repsim::strategy {

bool is_malicious(Strategy s) {
    return s != Strategy::SelfishSupportive && s != Strategy::SelfishInterruptDriven;
}

bool is_selfish(Strategy s) {
    return !is_malicious(s);
}

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::SelfishSupportive: return "SelfishSupportive";
        case Strategy::SelfishInterruptDriven: return "SelfishInterruptDriven";
        case Strategy::MaliciousLinkBreak: return "MaliciousLinkBreak";
        case Strategy::MaliciousDelay: return "MaliciousDelay";
        case Strategy::MaliciousFlood: return "MaliciousFlood";
        case Strategy::MaliciousCollude: return "MaliciousCollude";
        case Strategy::MaliciousSlander: return "MaliciousSlander";
    }
    return "unknown";
}

Strategy parse_strategy(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(Strategy::MaliciousSlander); ++i) {
        const Strategy s = static_cast<Strategy>(i);
        if (name == strategy_name(s)) return s;
    }
    throw Error("unknown strategy: " + name);
}

ForwardAction decide_forward_action(Strategy s) {
    switch (s) {
        case Strategy::MaliciousLinkBreak: return ForwardAction::Silent;
        case Strategy::MaliciousDelay: return ForwardAction::Delay;
        default: return ForwardAction::Forward;
    }
}

bool decide_witness_action(Strategy s, bool eligible) {
    return eligible && s == Strategy::SelfishSupportive;
}

HelloReplyAction decide_hello_reply(Strategy s, bool pact_covers_accused) {
    if (s == Strategy::MaliciousCollude && pact_covers_accused) return HelloReplyAction::Conceal;
    return HelloReplyAction::Full;
}

double next_traffic_gap(Rng& rng, double rate) {
    if (rate <= 0.0) throw Error("traffic profile: rate must be positive");
    return rng.exponential(rate);
}

NodeId pick_destination(Rng& rng, int node_count, NodeId self) {
    if (node_count < 2) throw Error("pick_destination: need at least two nodes");
    NodeId d = static_cast<NodeId>(rng.uniform_int(0, node_count - 2));
    if (d >= self) ++d;
    return d;
}

Strategy pick_malicious_strategy(Rng& rng) {
    const int first = static_cast<int>(Strategy::MaliciousLinkBreak);
    return static_cast<Strategy>(first + static_cast<int>(rng.uniform_int(0, MALICIOUS_KINDS - 1)));
}

} // namespace repsim::strategy
