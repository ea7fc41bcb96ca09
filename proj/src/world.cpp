#include "repsim/world.hpp"

#include <algorithm>
#include <cstdarg>
#include <cstdio>
#include <deque>

#include "repsim/report.hpp"

namespace repsim::sim {

namespace {

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return std::string(buf);
}

} // namespace

// ---------------------------------------------------------------------------
// construction

World::World(const SimConfig& cfg, uint64_t seed) {
    init_common(cfg);
    Rng wrng(derive_seed(seed, 0x5EED, 2));

    std::set<NodeId> malicious;
    while (static_cast<int>(malicious.size()) < cfg_.malicious_count) {
        malicious.insert(static_cast<NodeId>(wrng.uniform_int(0, cfg_.node_count - 1)));
    }
    const bool mixed = cfg_.malicious_strategy == "mixed";
    strategy::Strategy pinned_kind = strategy::Strategy::MaliciousLinkBreak;
    if (!mixed) {
        pinned_kind = strategy::parse_strategy(cfg_.malicious_strategy);
        if (!strategy::is_malicious(pinned_kind)) {
            throw Error("malicious_strategy must name a malicious kind or 'mixed'");
        }
    }

    nodes_.resize(static_cast<size_t>(cfg_.node_count));
    for (NodeId id = 0; id < cfg_.node_count; ++id) {
        Node& n = nodes_[static_cast<size_t>(id)];
        n.id = id;
        n.rng = Rng(derive_seed(seed, static_cast<uint64_t>(id), 1));
        n.wp = net::init_waypoint(n.rng, arena_);
        n.radio = n.rng.uniform(cfg_.radio_min, cfg_.max_radio);
        n.tau_hello = static_cast<int>(n.rng.uniform_int(cfg_.hello_min, cfg_.hello_max));
        n.poslog.add(0.0, n.wp.pos);
        if (malicious.count(id)) {
            n.strat = mixed ? strategy::pick_malicious_strategy(wrng) : pinned_kind;
        } else {
            n.strat = wrng.uniform01() < cfg_.supportive_fraction
                          ? strategy::Strategy::SelfishSupportive
                          : strategy::Strategy::SelfishInterruptDriven;
        }
    }
    schedule_initial();
}

World::World(const SimConfig& cfg, const std::vector<ScenarioNode>& layout, uint64_t seed) {
    SimConfig pinned_cfg = cfg;
    pinned_cfg.node_count = static_cast<int>(layout.size());
    pinned_cfg.malicious_count = 0;
    for (const ScenarioNode& s : layout) {
        if (strategy::is_malicious(s.strat)) ++pinned_cfg.malicious_count;
    }
    init_common(pinned_cfg);
    pinned_ = true;

    nodes_.resize(layout.size());
    for (NodeId id = 0; id < cfg_.node_count; ++id) {
        Node& n = nodes_[static_cast<size_t>(id)];
        const ScenarioNode& s = layout[static_cast<size_t>(id)];
        n.id = id;
        n.rng = Rng(derive_seed(seed, static_cast<uint64_t>(id), 1));
        n.wp = net::WaypointState{s.pos, s.pos, 0.0, 1e18};
        n.radio = s.radio;
        n.tau_hello = s.tau_hello;
        n.strat = s.strat;
        n.poslog.add(0.0, n.wp.pos);
    }
    schedule_initial();
}

void World::init_common(const SimConfig& cfg) {
    cfg_ = cfg;
    cfg_.validate();
    params_ = cfg_.protocol();
    sched_ = rep::RewardSchedule{cfg_.alpha, cfg_.node_count};
    sched_.validate();
    arena_ = net::Arena{cfg_.area_width, cfg_.area_height, cfg_.v_max, cfg_.pause_max};
    rep_lost_.assign(static_cast<size_t>(cfg_.node_count), 0.0);
    acted_.assign(static_cast<size_t>(cfg_.node_count), false);
    trace_hash_ = FNV_OFFSET;
}

void World::schedule_initial() {
    // colluders pair up in id order; an unpaired straggler recruits nobody
    std::vector<NodeId> colluders;
    for (const Node& n : nodes_) {
        if (n.strat == strategy::Strategy::MaliciousCollude) colluders.push_back(n.id);
    }
    for (size_t i = 0; i + 1 < colluders.size(); i += 2) {
        pact_partner_[colluders[i]] = colluders[i + 1];
        pact_partner_[colluders[i + 1]] = colluders[i];
    }

    push(cfg_.mobility_dt, EvMobility{});
    for (Node& n : nodes_) {
        push(0.25, EvHello{n.id});
        switch (n.strat) {
            case strategy::Strategy::SelfishSupportive:
            case strategy::Strategy::SelfishInterruptDriven:
                if (cfg_.traffic_rate > 0.0) {
                    push(strategy::next_traffic_gap(n.rng, cfg_.traffic_rate), EvTraffic{n.id});
                }
                break;
            case strategy::Strategy::MaliciousFlood:
                push(0.05, EvAttackTick{n.id});
                break;
            case strategy::Strategy::MaliciousCollude:
            case strategy::Strategy::MaliciousSlander:
                push(cfg_.collusion_interval, EvAttackTick{n.id});
                break;
            default:
                break;   // link-break and delay act on received traffic
        }
    }
}

// ---------------------------------------------------------------------------
// event loop

void World::push(Clock t, Event ev) { queue_.push(t, std::move(ev)); }

void World::note_event(const std::string& line) {
    trace_hash_ = hash_line(trace_hash_, line);
    if (trace_on_) trace_lines_.push_back(line);
}

void World::run_until(Clock t) {
    const Clock horizon = std::min(t, cfg_.sim_time);
    while (!queue_.empty() && queue_.peek().time <= horizon) {
        auto item = queue_.pop();
        now_ = item.time;
        ++events_;
        dispatch(item.payload);
    }
    if (now_ < horizon) now_ = horizon;
}

void World::dispatch(const Event& ev) {
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, EvMobility>) {
                note_event(fmt("t=%.6f mobility", now_));
                on_mobility();
            } else if constexpr (std::is_same_v<T, EvHello>) {
                note_event(fmt("t=%.6f hello n=%d", now_, e.node));
                on_hello(e.node);
            } else if constexpr (std::is_same_v<T, EvDeliver>) {
                note_event(fmt("t=%.6f deliver code=%d from=%d to=%d id=%lld", now_,
                               static_cast<int>(e.msg.code()), e.from, e.to,
                               static_cast<long long>(e.msg.id())));
                on_deliver(e.from, e.to, e.msg);
            } else if constexpr (std::is_same_v<T, EvQueueDone>) {
                note_event(fmt("t=%.6f queue n=%d", now_, e.node));
                on_queue_done(e.node);
            } else if constexpr (std::is_same_v<T, EvHopCheck>) {
                note_event(fmt("t=%.6f hopcheck n=%d id=%lld k=%d", now_, e.node,
                               static_cast<long long>(e.msg), e.checkpoint));
                on_hop_check(e.node, e.msg, e.checkpoint);
            } else if constexpr (std::is_same_v<T, EvGammaCheck>) {
                note_event(fmt("t=%.6f gamma n=%d id=%lld", now_, e.node,
                               static_cast<long long>(e.msg)));
                on_gamma_check(e.node, e.msg);
            } else if constexpr (std::is_same_v<T, EvInquiryClose>) {
                note_event(fmt("t=%.6f inquiry n=%d inv=%lld", now_, e.node,
                               static_cast<long long>(e.inv)));
                on_inquiry_close(e.node, e.inv);
            } else if constexpr (std::is_same_v<T, EvTraffic>) {
                note_event(fmt("t=%.6f traffic n=%d", now_, e.node));
                on_traffic(e.node);
            } else if constexpr (std::is_same_v<T, EvAttackTick>) {
                note_event(fmt("t=%.6f attack n=%d", now_, e.node));
                on_attack_tick(e.node);
            } else if constexpr (std::is_same_v<T, EvDelayedRelease>) {
                note_event(fmt("t=%.6f release n=%d id=%lld", now_, e.node,
                               static_cast<long long>(e.msg)));
                on_delayed_release(e.node, e.msg);
            } else if constexpr (std::is_same_v<T, EvAltVerify>) {
                note_event(fmt("t=%.6f verify n=%d id=%lld subj=%d ok=%d", now_, e.node,
                               static_cast<long long>(e.msg), e.subject, e.confirmed ? 1 : 0));
                on_alt_verify(e.node, e.msg, e.subject, e.confirmed);
            } else if constexpr (std::is_same_v<T, EvInject>) {
                note_event(fmt("t=%.6f inject src=%d dst=%d", now_, e.src, e.dst));
                initiate_transfer(e.src, e.dst);
            }
        },
        ev);
}

// ---------------------------------------------------------------------------
// plumbing

bool World::reaches(const Node& from, const Node& to) const {
    return net::in_range(from.wp.pos, from.radio, to.wp.pos);
}

std::vector<NodeId> World::neighbors_of(NodeId id) const {
    std::vector<NodeId> out;
    const Node& n = node(id);
    for (const Node& other : nodes_) {
        if (other.id != id && reaches(n, other)) out.push_back(other.id);
    }
    return out;
}

std::vector<NodeId> World::route(NodeId src, NodeId dst, NodeId exclude,
                                 const rep::ReputationLedger& view) const {
    if (src == dst) return {src};
    std::vector<NodeId> parent(nodes_.size(), NO_NODE);
    std::vector<int> depth(nodes_.size(), -1);
    std::deque<NodeId> frontier{src};
    depth[static_cast<size_t>(src)] = 0;
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop_front();
        if (depth[static_cast<size_t>(u)] >= cfg_.hop_limit) continue;
        for (NodeId v = 0; v < cfg_.node_count; ++v) {
            if (v == u || v == exclude || depth[static_cast<size_t>(v)] >= 0) continue;
            // usable links are bidirectional: acknowledgements must travel back
            if (!reaches(node(u), node(v)) || !reaches(node(v), node(u))) continue;
            if (v != dst && view.known(v) &&
                (view.locally_blacklisted(v) || view.network_blacklisted(v))) {
                continue;   // the requester assigns no work to nodes it distrusts
            }
            depth[static_cast<size_t>(v)] = depth[static_cast<size_t>(u)] + 1;
            parent[static_cast<size_t>(v)] = u;
            if (v == dst) {
                std::vector<NodeId> path{dst};
                for (NodeId w = dst; w != src; w = parent[static_cast<size_t>(w)]) {
                    path.push_back(parent[static_cast<size_t>(w)]);
                }
                std::reverse(path.begin(), path.end());
                return path;
            }
            frontier.push_back(v);
        }
    }
    return {};
}

std::vector<std::pair<NodeId, int>> World::broadcast_layers(NodeId origin) const {
    std::vector<int> depth(nodes_.size(), -1);
    depth[static_cast<size_t>(origin)] = 0;
    std::deque<NodeId> frontier{origin};
    std::vector<std::pair<NodeId, int>> out;
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop_front();
        for (NodeId v = 0; v < cfg_.node_count; ++v) {
            if (depth[static_cast<size_t>(v)] >= 0 || !reaches(node(u), node(v))) continue;
            depth[static_cast<size_t>(v)] = depth[static_cast<size_t>(u)] + 1;
            out.emplace_back(v, depth[static_cast<size_t>(v)]);
            frontier.push_back(v);
        }
    }
    return out;
}

void World::charge(Node& n, double amount, MsgId spend_key, bool attacker_waste) {
    n.energy += amount;
    if (spend_key != 0) {
        n.spend_log[spend_key] += amount;
        if (tainted_.count(spend_key)) n.wasted += amount;
    }
    if (attacker_waste) n.wasted += amount;
}

void World::taint(MsgId m) {
    if (!tainted_.insert(m).second) return;
    for (Node& n : nodes_) {
        auto it = n.spend_log.find(m);
        if (it != n.spend_log.end()) n.wasted += it->second;
    }
}

void World::transmit(Node& from, NodeId to, const proto::Message& msg, MsgId spend_key) {
    charge(from, cfg_.sigma, spend_key);
    if (reaches(from, node(to))) {
        push(now_ + net::transmit_latency(cfg_.packet_size, cfg_.bandwidth),
             EvDeliver{from.id, to, msg});
    }
}

NodeId World::partner_of(NodeId colluder) const {
    auto it = pact_partner_.find(colluder);
    return it == pact_partner_.end() ? NO_NODE : it->second;
}

// ---------------------------------------------------------------------------
// reputation choke points

double World::rep_apply(Node& holder, NodeId subject, rep::RepEvent ev) {
    if (subject == holder.id) return 0.0;
    holder.ledger.init_peer(subject);
    const double before = holder.ledger.score(subject);
    const double after = holder.ledger.apply(subject, ev, sched_);
    if (after < before && acted_[static_cast<size_t>(subject)]) {
        rep_lost_[static_cast<size_t>(subject)] += before - after;
    }
    return after;
}

double World::rep_set(Node& holder, NodeId subject, double value) {
    if (subject == holder.id) return 0.0;
    holder.ledger.init_peer(subject);
    const double before = holder.ledger.score(subject);
    const double after = holder.ledger.set_score(subject, value, sched_);
    if (after < before && acted_[static_cast<size_t>(subject)]) {
        rep_lost_[static_cast<size_t>(subject)] += before - after;
    }
    return after;
}

void World::note_network_blacklist(Node& holder, NodeId subject) {
    rep_apply(holder, subject, rep::RepEvent::NetworkBlacklist);
    condemned_.insert(subject);
}

// ---------------------------------------------------------------------------
// mobility and beacons

void World::on_mobility() {
    if (!pinned_) {
        for (Node& n : nodes_) {
            net::step_waypoint(n.wp, cfg_.mobility_dt, n.rng, arena_);
        }
    }
    for (Node& n : nodes_) n.poslog.add(now_, n.wp.pos);
    scan_departures();
    push(now_ + cfg_.mobility_dt, EvMobility{});
}

void World::scan_departures() {
    for (Node& n : nodes_) {
        // a selfish carrier about to drift away from its predecessor excuses itself
        if (strategy::is_selfish(n.strat)) {
            std::vector<MsgId> leaving;
            for (const auto& [m, held] : n.held) {
                if (held.from == NO_NODE || held.msg.code() != proto::MsgCode::Data) continue;
                if (n.own_record.count(m)) continue;   // already serviced
                if (dist(n.wp.pos, node(held.from).wp.pos) > 0.9 * n.radio) leaving.push_back(m);
            }
            for (MsgId m : leaving) {
                proto::Message notice =
                    proto::Message::originate(next_msg_id_++, n.id, proto::MsgCode::DepartureNotice, now_);
                notice.payload = proto::DeparturePayload{m};
                transmit(n, n.held.at(m).from, notice, 0);
                n.queue.erase(std::remove_if(n.queue.begin(), n.queue.end(),
                                             [m](const rep::QueueEntry& e) { return e.msg == m; }),
                              n.queue.end());
                n.held.erase(m);
            }
        }
        // a predecessor stops blaming a successor once either direction of the
        // link is physically gone: no retransmission can land, no reply can return
        for (auto& [m, st] : n.pending) {
            if (st.confirmed || st.excused || st.investigated) continue;
            const Node& succ = node(st.successor);
            if (dist(n.wp.pos, succ.wp.pos) > std::min(n.radio, succ.radio)) st.excused = true;
        }
    }
}

void World::on_hello(NodeId id) {
    Node& n = node(id);
    charge(n, cfg_.sigma, 0);
    const net::HelloRecord rec{n.id, now_, n.wp.pos};
    for (Node& other : nodes_) {
        if (other.id != n.id && reaches(n, other)) other.archive.add(rec);
    }
    push(now_ + n.tau_hello, EvHello{n.id});
}

// ---------------------------------------------------------------------------
// traffic generation and routing

void World::on_traffic(NodeId id) {
    Node& n = node(id);
    initiate_transfer(id, strategy::pick_destination(n.rng, cfg_.node_count, id));
    push(now_ + strategy::next_traffic_gap(n.rng, cfg_.traffic_rate), EvTraffic{id});
}

void World::inject_data(NodeId src, NodeId dst, Clock at) {
    push(at, EvInject{src, dst});
}

void World::force_pact(NodeId concealer, NodeId protect) {
    node(concealer).pact.insert(protect);
}

void World::initiate_transfer(NodeId src, NodeId dst) {
    Node& s = node(src);
    // one route-request broadcast; neighbors meter it against the per-source budget
    proto::Message rreq =
        proto::Message::originate(next_msg_id_++, src, proto::MsgCode::RouteRequest, now_);
    rreq.payload = proto::RreqPayload{dst, NO_NODE};
    charge(s, cfg_.sigma, 0);
    for (const Node& other : nodes_) {
        if (other.id != src && reaches(s, other)) {
            push(now_ + net::transmit_latency(cfg_.packet_size, cfg_.bandwidth),
                 EvDeliver{src, other.id, rreq});
        }
    }

    const std::vector<NodeId> path = route(src, dst, NO_NODE, s.ledger);
    if (path.size() < 2) return;

    proto::Message msg = proto::Message::originate(next_msg_id_++, src, proto::MsgCode::Data, now_);
    msg.payload = proto::DataPayload{proto::PathRecord{path}};
    ++generated_;
    s.seen.insert(msg.id());
    s.held.emplace(msg.id(), HeldInfo{msg, NO_NODE, now_});
    launch_hop(s, msg);
}

void World::launch_hop(Node& n, const proto::Message& msg) {
    const auto& path = std::get<proto::DataPayload>(msg.payload).path;
    const NodeId succ = path.next_after(n.id);
    if (succ == NO_NODE) return;
    transmit(n, succ, msg, msg.id());

    proto::ForwardState st;
    st.msg = msg.id();
    st.successor = succ;
    st.first_send = now_;
    st.last_send = now_;
    st.attempts = 1;
    n.pending[msg.id()] = st;

    for (int k = 1; k <= 3; ++k) {
        push(now_ + k * cfg_.tau_prime, EvHopCheck{n.id, msg.id(), k});
    }
    int downstream = 0;
    for (size_t q = 0; q + 1 < path.nodes.size(); ++q) {
        if (path.nodes[q] == n.id) {
            downstream = static_cast<int>(path.nodes.size()) - 2 - static_cast<int>(q);
            break;
        }
    }
    const std::vector<int> queues(static_cast<size_t>(std::max(downstream, 0)), cfg_.queue_size);
    const double gamma = proto::compute_gamma(queues, cfg_.tau, cfg_.tau_prime);
    push(now_ + gamma + 1.0, EvGammaCheck{n.id, msg.id()});
}

// ---------------------------------------------------------------------------
// queue service

void World::enqueue_packet(Node& n, MsgId m, NodeId source) {
    n.queue.push_back(rep::QueueEntry{m, source, n.arrivals++});
    if (!n.serving) {
        n.serving = true;
        push(now_ + cfg_.tau, EvQueueDone{n.id});
    }
}

void World::on_queue_done(NodeId id) {
    Node& n = node(id);
    std::vector<rep::QueueEntry> ordered = n.ledger.order_queue(n.queue);
    if (ordered.empty()) {
        n.queue.clear();
        n.serving = false;
        return;
    }
    const rep::QueueEntry e = ordered.front();
    n.queue.assign(ordered.begin() + 1, ordered.end());

    auto it = n.held.find(e.msg);
    if (it != n.held.end()) {
        switch (it->second.msg.code()) {
            case proto::MsgCode::Data: service_data(n, e.msg); break;
            case proto::MsgCode::Ack: service_ack(n, e.msg); break;
            default: break;
        }
    }
    if (!n.queue.empty()) {
        push(now_ + cfg_.tau, EvQueueDone{n.id});
    } else {
        n.serving = false;
    }
}

void World::service_data(Node& n, MsgId m) {
    const HeldInfo& held = n.held.at(m);
    const proto::Message msg = held.msg;
    const auto& path = std::get<proto::DataPayload>(msg.payload).path;
    const NodeId succ = path.next_after(n.id);
    if (succ == NO_NODE) return;

    n.own_record[m] = proto::HopRecord{n.id, now_, cfg_.queue_size};
    n.ledger.init_peer(msg.origin());
    n.ledger.record_forwarded(msg.origin());
    rep_apply(n, msg.origin(), rep::RepEvent::GeneratorDebit);
    launch_hop(n, msg);

    // the predecessor overhears this transmission, or nearby volunteers cover for it
    const NodeId pred = held.from;
    if (pred == NO_NODE) return;
    Node& p = node(pred);
    auto pit = p.pending.find(m);
    if (reaches(n, p)) {
        if (pit != p.pending.end()) pit->second.confirmed = true;
        return;
    }
    for (Node& w : nodes_) {
        if (w.id == pred || w.id == n.id || w.id == succ) continue;
        const bool eligible = reaches(n, w) && reaches(w, n) && reaches(w, p);
        if (strategy::decide_witness_action(w.strat, eligible)) {
            transmit(w, pred, msg, m);
        }
    }
}

void World::service_ack(Node& n, MsgId m) {
    proto::Message msg = n.held.at(m).msg;
    auto& ap = std::get<proto::AckPayload>(msg.payload);
    auto rec = n.own_record.find(ap.data_id);
    if (rec != n.own_record.end()) ap.hops.push_back(rec->second);
    const NodeId target = ap.path.prev_before(n.id);
    n.held.erase(m);
    if (target == NO_NODE) return;
    transmit(n, target, msg, ap.data_id);
}

// ---------------------------------------------------------------------------
// deliveries

void World::on_deliver(NodeId from, NodeId to, const proto::Message& msg) {
    Node& r = node(to);
    switch (msg.code()) {
        case proto::MsgCode::Data: receive_data(r, from, msg); break;
        case proto::MsgCode::Ack: receive_ack(r, from, msg); break;
        case proto::MsgCode::RouteRequest: receive_rreq(r, msg); break;
        case proto::MsgCode::BicastCopyReturn: receive_copy_return(r, msg); break;
        case proto::MsgCode::DepartureNotice: receive_departure(r, msg); break;
        case proto::MsgCode::CollusionRequest: receive_collusion_request(r, msg); break;
        case proto::MsgCode::AllegationLink:
        case proto::MsgCode::AllegationDelay:
        case proto::MsgCode::AllegationFlood:
        case proto::MsgCode::AllegationCollusion: receive_allegation(r, msg); break;
        default: break;
    }
}

void World::receive_data(Node& r, NodeId from, const proto::Message& msg) {
    const MsgId m = msg.id();
    // a copy arriving from off the path is witness evidence for our own pending hop
    auto pit = r.pending.find(m);
    if (pit != r.pending.end() && from != pit->second.successor) {
        pit->second.confirmed = true;
        rep_apply(r, from, rep::RepEvent::SupportiveSet);
        return;
    }

    r.ledger.init_peer(msg.origin());
    if (r.ledger.network_blacklisted(msg.origin())) return;

    const auto& path = std::get<proto::DataPayload>(msg.payload).path;
    if (r.seen.count(m)) {
        // duplicate retransmission: answer with a direct single-hop receipt if we served it
        if (r.own_record.count(m)) send_direct_ack(r, msg, from);
        return;
    }

    r.seen.insert(m);
    if (path.nodes.back() == r.id) {
        ++delivered_;
        r.own_record[m] = proto::HopRecord{r.id, now_, cfg_.queue_size};
        proto::Message ack =
            proto::Message::originate(next_msg_id_++, r.id, proto::MsgCode::Ack, now_);
        ack.payload = proto::AckPayload{m, path, {r.own_record[m]}, false};
        r.held.emplace(ack.id(), HeldInfo{ack, from, now_});
        enqueue_packet(r, ack.id(), r.id);
        return;
    }

    r.held.emplace(m, HeldInfo{msg, from, now_});
    r.ledger.record_generated(msg.origin());
    switch (strategy::decide_forward_action(r.strat)) {
        case strategy::ForwardAction::Forward:
            enqueue_packet(r, m, msg.origin());
            break;
        case strategy::ForwardAction::Silent:
            r.acted = true;
            acted_[static_cast<size_t>(r.id)] = true;
            taint(m);
            break;
        case strategy::ForwardAction::Delay:
            r.acted = true;
            acted_[static_cast<size_t>(r.id)] = true;
            taint(m);
            push(now_ + cfg_.effective_delay_extra(), EvDelayedRelease{r.id, m});
            break;
    }
}

void World::send_direct_ack(Node& n, const proto::Message& data, NodeId to) {
    const auto& path = std::get<proto::DataPayload>(data.payload).path;
    proto::Message ack = proto::Message::originate(next_msg_id_++, n.id, proto::MsgCode::Ack, now_);
    ack.payload = proto::AckPayload{data.id(), path, {n.own_record.at(data.id())}, true};
    transmit(n, to, ack, data.id());
}

void World::receive_ack(Node& r, NodeId /*from*/, const proto::Message& msg) {
    const auto& ap = std::get<proto::AckPayload>(msg.payload);
    auto pit = r.pending.find(ap.data_id);
    if (pit != r.pending.end()) {
        proto::ForwardState& st = pit->second;
        const NodeId u = st.successor;
        const proto::HopRecord* urec = nullptr;
        for (const proto::HopRecord& h : ap.hops) {
            if (h.node == u) urec = &h;
        }
        st.confirmed = true;
        if (!ap.direct && !st.reward_paid) {
            st.reward_paid = true;
            rep_apply(r, u, rep::RepEvent::AckConfirmedForward);
        }
        // only retried hops with a tardy claimed forward time face the delay rule
        if (urec && st.attempts >= 2 && urec->forward_time - st.first_send > cfg_.tau_prime) {
            if (proto::delay_attack(params_.delay_rule, st.first_send, st.last_send,
                                    urec->forward_time, urec->queue_size, cfg_.tau,
                                    cfg_.tau_prime)) {
                proto::AllegationPacket packet;
                packet.kind = proto::AllegationKind::Delay;
                packet.accuser = r.id;
                packet.accused = u;
                packet.proof = proto::BicastCopyPair{ap.data_id, st.first_send, st.last_send,
                                                     urec->forward_time, urec->queue_size};
                note_network_blacklist(r, u);
                broadcast_allegation(r, packet, false);
            } else {
                r.ledger.init_peer(u);
                const int count = r.ledger.note_delay_suspicion(u);
                const fuzzy::ApdInputs in{
                    r.ledger.comparative(u), r.ledger.expectation(u),
                    fuzzy::correctness_delay(urec->forward_time - st.first_send,
                                             urec->queue_size, cfg_.tau, cfg_.tau_prime),
                    std::nullopt};
                const auto bd =
                    fuzzy::apd_update(r.ledger.score(u), in, cfg_.node_count, cfg_.hop_limit,
                                      count, cfg_.suspicion_limit, cfg_.penalty_mode);
                rep_set(r, u, bd.new_score);
                if (count >= cfg_.suspicion_limit) rep_apply(r, u, rep::RepEvent::LocalBlacklist);
            }
        }
    }
    if (ap.path.nodes.empty() || ap.path.nodes.front() == r.id) return;   // source: done
    if (ap.direct) return;                                                // direct receipts never relay
    proto::Message copy = msg;
    r.held.emplace(copy.id(), HeldInfo{copy, NO_NODE, now_});
    enqueue_packet(r, copy.id(), copy.origin());
}

void World::receive_rreq(Node& r, const proto::Message& msg) {
    r.ledger.init_peer(msg.origin());
    if (r.ledger.network_blacklisted(msg.origin())) return;
    const auto out = r.limiters[msg.origin()].note_request(now_, cfg_.eta);
    if (!out.flood) return;
    proto::AllegationPacket packet;
    packet.kind = proto::AllegationKind::Flood;
    packet.accuser = r.id;
    packet.accused = msg.origin();
    packet.proof = proto::RreqBundle{msg.origin(), out.bundle};
    note_network_blacklist(r, msg.origin());
    broadcast_allegation(r, packet, false);
}

void World::receive_copy_return(Node& r, const proto::Message& msg) {
    const auto& cp = std::get<proto::CopyReturnPayload>(msg.payload);
    auto pit = r.pending.find(cp.data_id);
    if (pit != r.pending.end()) {
        pit->second.confirmed = true;
        pit->second.excused = true;
    }
}

void World::receive_departure(Node& r, const proto::Message& msg) {
    const auto& dp = std::get<proto::DeparturePayload>(msg.payload);
    auto pit = r.pending.find(dp.data_id);
    if (pit != r.pending.end()) pit->second.excused = true;
}

void World::receive_collusion_request(Node& r, const proto::Message& msg) {
    const NodeId origin = msg.origin();
    r.ledger.init_peer(origin);
    if (r.ledger.network_blacklisted(origin)) return;
    if (r.strat == strategy::Strategy::MaliciousCollude) {
        if (partner_of(origin) == r.id) r.pact.insert(origin);
        return;
    }
    if (!strategy::is_selfish(r.strat)) return;
    proto::AllegationPacket packet;
    packet.kind = proto::AllegationKind::Collusion;
    packet.accuser = r.id;
    packet.accused = origin;
    packet.proof =
        proto::CollusionRequestCopy{origin, static_cast<int>(proto::MsgCode::CollusionRequest)};
    note_network_blacklist(r, origin);
    broadcast_allegation(r, packet, false);
}

void World::receive_allegation(Node& r, const proto::Message& msg) {
    charge(r, cfg_.sigma, 0);   // every reached node spends a rebroadcast
    const auto& ap = std::get<proto::AllegationPacket>(msg.payload);
    r.ledger.init_peer(ap.accuser);
    if (r.ledger.network_blacklisted(ap.accuser)) return;
    if (ap.accused == r.id) return;   // a node knows its own innocence
    r.ledger.init_peer(ap.accused);
    if (r.ledger.network_blacklisted(ap.accused)) return;   // verdict already in force

    if (proto::allegation_guilty(ap, params_)) {
        note_network_blacklist(r, ap.accused);
    } else {
        note_network_blacklist(r, ap.accuser);
    }
}

// ---------------------------------------------------------------------------
// retransmission checkpoints and investigation

void World::on_hop_check(NodeId id, MsgId m, int checkpoint) {
    Node& n = node(id);
    auto pit = n.pending.find(m);
    if (pit == n.pending.end()) return;
    proto::ForwardState& st = pit->second;
    if (st.confirmed || st.excused || st.investigated) return;
    auto hit = n.held.find(m);

    // a stuck router shows its own forwarding record upstream so the
    // predecessor stops its clock well before the investigation deadline
    if (hit != n.held.end() && hit->second.from != NO_NODE && n.own_record.count(m)) {
        proto::Message ret =
            proto::Message::originate(next_msg_id_++, n.id, proto::MsgCode::BicastCopyReturn, now_);
        ret.payload = proto::CopyReturnPayload{m};
        transmit(n, hit->second.from, ret, 0);
    }

    if (checkpoint < 3) {
        if (hit == n.held.end()) return;
        transmit(n, st.successor, hit->second.msg, m);
        st.attempts = std::min(st.attempts + 1, 3);
        st.last_send = now_;
        return;
    }
    start_investigation(n, st);
}

void World::start_investigation(Node& i, proto::ForwardState& st) {
    st.investigated = true;
    const NodeId j = st.successor;
    if (i.ledger.network_blacklisted(j)) return;
    const Node& suspect = node(j);

    Investigation rec;
    rec.investigator = i.id;
    rec.suspect = j;
    rec.msg = st.msg;
    rec.t0 = st.first_send;
    rec.t1 = now_;

    for (Node& l : nodes_) {
        if (l.id == i.id || l.id == j) continue;
        if (!reaches(suspect, l)) continue;                  // enquiries go to the suspect's neighbors
        if (i.ledger.known(l.id) && i.ledger.network_blacklisted(l.id)) continue;
        const std::vector<NodeId> out = route(i.id, l.id, j, i.ledger);
        if (out.size() < 2) continue;
        for (size_t h = 0; h + 1 < out.size(); ++h) charge(node(out[h]), cfg_.sigma, 0);

        std::vector<proto::ReplyRecord> records;
        const auto reply = strategy::decide_hello_reply(l.strat, l.pact.count(j) != 0);
        if (reply == strategy::HelloReplyAction::Full) {
            for (const net::HelloRecord& hr : l.archive.query(j, rec.t0, rec.t1)) {
                records.push_back(proto::ReplyRecord{hr.time, hr.pos, l.poslog.at(hr.time)});
            }
        }
        const std::vector<NodeId> back = route(l.id, i.id, j, l.ledger);
        if (back.size() < 2) continue;
        for (size_t h = 0; h + 1 < back.size(); ++h) charge(node(back[h]), cfg_.sigma, 0);
        rec.replies.emplace_back(l.id, std::move(records));
    }

    const int64_t inv = next_inv_id_++;
    investigations_.emplace(inv, std::move(rec));
    push(now_ + 1.0, EvInquiryClose{i.id, inv});
}

void World::on_inquiry_close(NodeId id, int64_t inv) {
    auto iit = investigations_.find(inv);
    if (iit == investigations_.end()) return;
    const Investigation rec = std::move(iit->second);
    investigations_.erase(iit);

    Node& i = node(id);
    const NodeId j = rec.suspect;
    const Node& suspect = node(j);
    if (i.ledger.network_blacklisted(j)) return;
    auto pit = i.pending.find(rec.msg);
    if (pit != i.pending.end() && (pit->second.confirmed || pit->second.excused)) return;

    // merge replies with the investigator's own archive into a unique-by-time history
    std::map<Clock, Vec2> merged;
    for (const net::HelloRecord& hr : i.archive.query(j, rec.t0, rec.t1)) {
        merged.emplace(hr.time, hr.pos);
    }
    for (const auto& [l, records] : rec.replies) {
        for (const proto::ReplyRecord& r : records) merged.emplace(r.time, r.suspect_pos);
    }

    // cross-check each responder against what the union says it must have heard
    for (const auto& [l, records] : rec.replies) {
        const Node& responder = node(l);
        proto::ConcealmentEvidence ev;
        ev.provided = static_cast<int>(records.size());
        ev.suspect_range = suspect.radio;
        for (const auto& [t, pos] : merged) {
            ev.union_records.push_back(proto::ConcealRecord{t, pos, responder.poslog.at(t)});
        }
        proto::AllegationPacket packet;
        packet.kind = proto::AllegationKind::LinkBreak;
        packet.accuser = i.id;
        packet.accused = l;
        packet.proof = std::move(ev);
        if (proto::allegation_guilty(packet, params_)) {
            note_network_blacklist(i, l);
            broadcast_allegation(i, packet, false);
        }
    }

    const int x1 = static_cast<int>(merged.size());
    int x2 = 0;
    for (const auto& [t, pos] : merged) {
        if (net::in_range(i.poslog.at(t), i.radio, pos)) ++x2;
    }
    const int y = proto::hello_budget(cfg_.tau_prime, suspect.tau_hello);
    const int z = proto::hello_expected(rec.t0, rec.t1, suspect.tau_hello);

    std::vector<NodeId> contributors;
    for (const auto& [l, records] : rec.replies) {
        if (!records.empty()) contributors.push_back(l);
    }

    if (proto::blacklist_verdict(params_.blacklist_rule, x2, x1, y, z)) {
        proto::HelloHistoryBundle bundle;
        bundle.t0 = rec.t0;
        bundle.t1 = rec.t1;
        bundle.tau_hello = suspect.tau_hello;
        bundle.investigator_range = i.radio;
        for (const auto& [t, pos] : merged) {
            bundle.records.push_back(proto::HelloEvidence{t, pos, i.poslog.at(t)});
        }
        proto::AllegationPacket packet;
        packet.kind = proto::AllegationKind::LinkBreak;
        packet.accuser = i.id;
        packet.accused = j;
        packet.proof = std::move(bundle);
        packet.witnesses = contributors;
        note_network_blacklist(i, j);
        for (NodeId w : contributors) rep_apply(i, w, rep::RepEvent::DetectionReward);
        broadcast_allegation(i, packet, false);
        return;
    }

    i.ledger.init_peer(j);
    const int count = i.ledger.note_link_break_suspicion(j);
    double pf = 1.0 / cfg_.hop_limit;
    if (pit != i.pending.end()) {
        auto hit = i.held.find(rec.msg);
        if (hit != i.held.end()) {
            const auto& path = std::get<proto::DataPayload>(hit->second.msg.payload).path;
            if (path.contains(j)) {
                pf = std::max(fuzzy::path_fraction(path.q_of(j), path.p()), 1.0 / cfg_.hop_limit);
            }
        }
    }
    const fuzzy::ApdInputs in{i.ledger.comparative(j), i.ledger.expectation(j),
                              fuzzy::correctness_link(std::min(x2, y), std::min(x1, y), y), pf};
    const auto bd = fuzzy::apd_update(i.ledger.score(j), in, cfg_.node_count, cfg_.hop_limit,
                                      count, cfg_.suspicion_limit, cfg_.penalty_mode);
    rep_set(i, j, bd.new_score);
    if (count >= cfg_.suspicion_limit) rep_apply(i, j, rep::RepEvent::LocalBlacklist);
    for (NodeId l : contributors) rep_apply(i, l, rep::RepEvent::DetectionReward);
}

// ---------------------------------------------------------------------------
// final wait window

void World::on_gamma_check(NodeId id, MsgId m) {
    Node& n = node(id);
    auto pit = n.pending.find(m);
    if (pit == n.pending.end()) return;
    proto::ForwardState& st = pit->second;
    st.gamma_checked = true;
    if (st.confirmed || st.excused || st.investigated) return;

    const NodeId u = st.successor;
    auto hit = n.held.find(m);
    if (hit == n.held.end()) return;
    const auto& path = std::get<proto::DataPayload>(hit->second.msg.payload).path;
    const NodeId w = path.next_after(u);
    if (w == NO_NODE) return;
    const std::vector<NodeId> out = route(n.id, w, u, n.ledger);
    if (out.size() < 2) {
        const int strikes = ++n.no_route_strikes[u];
        if (strikes >= cfg_.suspicion_limit) {
            rep_set(n, u, -sched_.cap());
            rep_apply(n, u, rep::RepEvent::LocalBlacklist);
        }
        return;
    }
    for (size_t h = 0; h + 1 < out.size(); ++h) charge(node(out[h]), cfg_.sigma, 0);
    const std::vector<NodeId> back = route(w, n.id, u, node(w).ledger);
    if (back.size() >= 2) {
        for (size_t h = 0; h + 1 < back.size(); ++h) charge(node(back[h]), cfg_.sigma, 0);
    }
    const bool confirmed = node(w).seen.count(m) != 0;
    const double leg = net::transmit_latency(cfg_.packet_size, cfg_.bandwidth) *
                       static_cast<double>(out.size() - 1);
    push(now_ + 2.0 * leg, EvAltVerify{n.id, m, u, confirmed});
}

void World::on_alt_verify(NodeId id, MsgId m, NodeId subject, bool confirmed) {
    Node& n = node(id);
    auto pit = n.pending.find(m);
    if (pit == n.pending.end()) return;
    proto::ForwardState& st = pit->second;
    if (st.confirmed || st.excused) return;
    if (confirmed) {
        st.confirmed = true;
        if (!st.reward_paid) {
            st.reward_paid = true;
            rep_apply(n, subject, rep::RepEvent::AckConfirmedForward);
        }
        return;
    }
    rep_set(n, subject, -sched_.cap());
    rep_apply(n, subject, rep::RepEvent::LocalBlacklist);
}

// ---------------------------------------------------------------------------
// attacks

void World::on_delayed_release(NodeId id, MsgId m) {
    Node& n = node(id);
    auto hit = n.held.find(m);
    if (hit == n.held.end()) return;
    enqueue_packet(n, m, hit->second.msg.origin());
}

void World::on_attack_tick(NodeId id) {
    Node& n = node(id);
    const double latency = net::transmit_latency(cfg_.packet_size, cfg_.bandwidth);
    switch (n.strat) {
        case strategy::Strategy::MaliciousFlood: {
            n.acted = true;
            acted_[static_cast<size_t>(id)] = true;
            proto::Message rreq =
                proto::Message::originate(next_msg_id_++, id, proto::MsgCode::RouteRequest, now_);
            rreq.payload =
                proto::RreqPayload{strategy::pick_destination(n.rng, cfg_.node_count, id), NO_NODE};
            charge(n, cfg_.sigma, 0, true);
            for (const Node& other : nodes_) {
                if (other.id != id && reaches(n, other)) {
                    push(now_ + latency, EvDeliver{id, other.id, rreq});
                }
            }
            push(now_ + 1.0 / cfg_.effective_flood_rate(), EvAttackTick{id});
            return;
        }
        case strategy::Strategy::MaliciousCollude: {
            n.acted = true;
            acted_[static_cast<size_t>(id)] = true;
            proto::Message creq =
                proto::Message::originate(next_msg_id_++, id, proto::MsgCode::CollusionRequest, now_);
            creq.payload = proto::CollusionPayload{id};
            charge(n, cfg_.sigma, 0, true);
            for (const Node& other : nodes_) {
                if (other.id != id && reaches(n, other)) {
                    push(now_ + latency, EvDeliver{id, other.id, creq});
                }
            }
            push(now_ + cfg_.collusion_interval, EvAttackTick{id});
            return;
        }
        case strategy::Strategy::MaliciousSlander: {
            std::vector<NodeId> victims;
            for (const Node& other : nodes_) {
                if (strategy::is_selfish(other.strat)) victims.push_back(other.id);
            }
            if (victims.empty()) return;
            n.acted = true;
            acted_[static_cast<size_t>(id)] = true;
            proto::AllegationPacket packet;
            packet.kind = proto::AllegationKind::LinkBreak;
            packet.accuser = id;
            packet.accused =
                victims[static_cast<size_t>(n.rng.uniform_int(0, static_cast<int64_t>(victims.size()) - 1))];
            broadcast_allegation(n, packet, true);
            push(now_ + cfg_.collusion_interval, EvAttackTick{id});
            return;
        }
        default:
            return;
    }
}

void World::broadcast_allegation(Node& accuser, proto::AllegationPacket packet, bool attack_action) {
    ++allegations_;
    proto::MsgCode code = proto::MsgCode::AllegationLink;
    switch (packet.kind) {
        case proto::AllegationKind::LinkBreak: code = proto::MsgCode::AllegationLink; break;
        case proto::AllegationKind::Delay: code = proto::MsgCode::AllegationDelay; break;
        case proto::AllegationKind::Flood: code = proto::MsgCode::AllegationFlood; break;
        case proto::AllegationKind::Collusion: code = proto::MsgCode::AllegationCollusion; break;
    }
    proto::Message msg = proto::Message::originate(next_msg_id_++, accuser.id, code, now_);
    msg.payload = std::move(packet);
    charge(accuser, cfg_.sigma, 0, attack_action);
    const double latency = net::transmit_latency(cfg_.packet_size, cfg_.bandwidth);
    for (const auto& [id, depth] : broadcast_layers(accuser.id)) {
        push(now_ + depth * latency, EvDeliver{accuser.id, id, msg});
    }
}

// ---------------------------------------------------------------------------
// inspection and harvest

double World::score_at(NodeId holder, NodeId subject) const {
    const Node& h = node(holder);
    return h.ledger.known(subject) ? h.ledger.score(subject) : 0.0;
}

bool World::network_blacklisted_at(NodeId holder, NodeId subject) const {
    const Node& h = node(holder);
    return h.ledger.known(subject) && h.ledger.network_blacklisted(subject);
}

bool World::locally_blacklisted_at(NodeId holder, NodeId subject) const {
    const Node& h = node(holder);
    return h.ledger.known(subject) && h.ledger.locally_blacklisted(subject);
}

Vec2 World::position(NodeId id) const { return node(id).wp.pos; }

RunResult World::harvest() const {
    metrics::RunTallies t;
    t.nodes.resize(nodes_.size());
    for (const Node& n : nodes_) {
        metrics::NodeTally& tally = t.nodes[static_cast<size_t>(n.id)];
        tally.malicious = strategy::is_malicious(n.strat);
        tally.acted = acted_[static_cast<size_t>(n.id)];
        tally.detected = condemned_.count(n.id) != 0;
        tally.rep_lost = rep_lost_[static_cast<size_t>(n.id)];
        tally.energy_spent = n.energy;
        tally.energy_wasted = n.wasted;
        for (const Node& h : nodes_) {
            if (h.id != n.id && h.ledger.known(n.id)) tally.standing += h.ledger.score(n.id);
        }
    }
    for (const Node& h : nodes_) {
        for (const auto& [peer, rec] : h.ledger.peers()) {
            if (rec.local_blacklist) ++t.local_blacklists;
        }
    }
    t.network_blacklists = static_cast<int64_t>(condemned_.size());
    t.allegations = allegations_;
    t.generated = generated_;
    t.delivered = delivered_;
    t.events = events_;
    t.trace_hash = trace_hash_;
    return RunResult{t, metrics::compute_metrics(t)};
}

// ---------------------------------------------------------------------------
// entry points

RunResult run_simulation(const SimConfig& cfg, uint64_t run_seed, bool trace) {
    World w(cfg, run_seed);
    if (trace) w.enable_trace();
    w.run();
    return w.harvest();
}

SweepResult run_sweep(const SimConfig& base, const std::vector<int>& malicious_counts) {
    SweepResult sweep;
    sweep.trace_hash = FNV_OFFSET;
    for (int count : malicious_counts) {
        SimConfig cfg = base;
        cfg.malicious_count = count;
        std::vector<metrics::RunMetrics> per_run;
        for (int r = 0; r < base.runs; ++r) {
            const uint64_t run_seed =
                derive_seed(base.seed, static_cast<uint64_t>(count), static_cast<uint64_t>(r));
            const RunResult res = run_simulation(cfg, run_seed);
            per_run.push_back(res.metrics);
            sweep.trace_hash =
                hash_line(sweep.trace_hash, fmt("%llu", static_cast<unsigned long long>(
                                                                    res.tallies.trace_hash)));
        }
        sweep.rows.push_back(metrics::aggregate_metrics(per_run));
    }
    return sweep;
}

} // namespace repsim::sim
