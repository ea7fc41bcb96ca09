#include "repsim/reputation.hpp"

#include <algorithm>

namespace repsim::rep {

void RewardSchedule::validate() const {
    if (!(alpha > 1.0)) throw Error("reward schedule: alpha must exceed 1");
    if (phi_size <= 3) throw Error("reward schedule: network size must exceed 3");
}

void ReputationLedger::init_peer(NodeId j) {
    auto [it, inserted] = peers_.try_emplace(j);
    if (inserted) {
        r_min_ = std::min(r_min_, it->second.score);
        r_max_ = std::max(r_max_, it->second.score);
    }
}

PeerRecord& ReputationLedger::fetch(NodeId j) {
    init_peer(j);
    return peers_.at(j);
}

double ReputationLedger::score(NodeId j) const {
    return record(j).score;
}

const PeerRecord& ReputationLedger::record(NodeId j) const {
    auto it = peers_.find(j);
    if (it == peers_.end()) throw Error("ledger: unknown subject " + std::to_string(j));
    return it->second;
}

double ReputationLedger::write_score(PeerRecord& r, double value, double cap) {
    if (value < -cap) {
        // crossing the floor is itself disqualifying
        value = -cap;
        r.local_blacklist = true;
    } else if (value > cap) {
        value = cap;
    }
    r.score = value;
    r_min_ = std::min(r_min_, value);
    r_max_ = std::max(r_max_, value);
    return value;
}

double ReputationLedger::apply(NodeId j, RepEvent ev, const RewardSchedule& sched) {
    PeerRecord& r = fetch(j);
    const double cap = sched.cap();
    if (r.network_blacklist && ev != RepEvent::NetworkBlacklist && ev != RepEvent::LocalBlacklist) {
        return r.score;   // absorbing: a condemned node's standing never recovers
    }
    switch (ev) {
        case RepEvent::AckConfirmedForward:
            return write_score(r, r.score + sched.alpha, cap);
        case RepEvent::GeneratorDebit:
            return write_score(r, r.score - sched.alpha_sq(), cap);
        case RepEvent::DetectionReward:
            return write_score(r, r.score + sched.alpha_sq(), cap);
        case RepEvent::SupportiveSet:
            return write_score(r, std::min(sched.alpha * cap, cap), cap);
        case RepEvent::SetMax:
            return write_score(r, cap, cap);
        case RepEvent::LocalBlacklist:
            r.local_blacklist = true;
            return r.score;
        case RepEvent::NetworkBlacklist:
            r.network_blacklist = true;
            r.local_blacklist = true;
            return write_score(r, -cap, cap);
    }
    return r.score;
}

double ReputationLedger::set_score(NodeId j, double value, const RewardSchedule& sched) {
    PeerRecord& r = fetch(j);
    if (r.network_blacklist) return r.score;
    return write_score(r, value, sched.cap());
}

double ReputationLedger::comparative(NodeId j) const {
    const PeerRecord& r = record(j);
    return (r.score - r_min_) / (r_max_ - r_min_ + 1.0);
}

double ReputationLedger::expectation(NodeId j) const {
    const PeerRecord& r = record(j);
    return static_cast<double>(r.traffic_forwarded) / (static_cast<double>(r.traffic_generated) + 1.0);
}

int ReputationLedger::note_link_break_suspicion(NodeId j) {
    return ++fetch(j).link_break_count;
}

int ReputationLedger::note_delay_suspicion(NodeId j) {
    return ++fetch(j).delay_count;
}

void ReputationLedger::record_generated(NodeId j) {
    ++fetch(j).traffic_generated;
}

void ReputationLedger::record_forwarded(NodeId j) {
    ++fetch(j).traffic_forwarded;
}

bool ReputationLedger::locally_blacklisted(NodeId j) const {
    auto it = peers_.find(j);
    return it != peers_.end() && it->second.local_blacklist;
}

bool ReputationLedger::network_blacklisted(NodeId j) const {
    auto it = peers_.find(j);
    return it != peers_.end() && it->second.network_blacklist;
}

std::vector<QueueEntry> ReputationLedger::order_queue(const std::vector<QueueEntry>& entries) const {
    std::vector<QueueEntry> out;
    out.reserve(entries.size());
    for (const QueueEntry& e : entries) {
        if (!network_blacklisted(e.source)) out.push_back(e);
    }
    auto score_of = [this](NodeId n) {
        auto it = peers_.find(n);
        return it == peers_.end() ? 0.0 : it->second.score;
    };
    std::sort(out.begin(), out.end(), [&](const QueueEntry& a, const QueueEntry& b) {
        const double sa = score_of(a.source);
        const double sb = score_of(b.source);
        if (sa != sb) return sa > sb;
        return a.arrival < b.arrival;
    });
    return out;
}

} // namespace repsim::rep
