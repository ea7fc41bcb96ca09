#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "repsim/types.hpp"

namespace repsim::proto {

/** Wire message codes. Every packet is padded to PACKET_BYTES on the air. */
enum class MsgCode : int {
    Data = 0,
    Ack = 1,
    Hello = 2,
    HelloAck = 3,
    RouteRequest = 4,
    RouteReply = 5,
    HelloEnquiry = 6,
    HelloReply = 7,
    AllegationLink = 8,
    AllegationDelay = 9,
    AllegationFlood = 10,
    AllegationCollusion = 11,
    CollusionRequest = 12,
    BicastCopyReturn = 13,
    DepartureNotice = 14,
};

constexpr int PACKET_BYTES = 512;

const char* code_name(MsgCode c);

/** Full node list of a route, source first, destination last. */
struct PathRecord {
    std::vector<NodeId> nodes;

    int p() const { return static_cast<int>(nodes.size()); }
    /** Count of nodes strictly before the given router (its 1-based position minus one... equals its index). */
    int q_of(NodeId router) const;
    NodeId next_after(NodeId n) const;   // NO_NODE when n is last or absent
    NodeId prev_before(NodeId n) const;  // NO_NODE when n is first or absent
    bool contains(NodeId n) const;
};

struct DataPayload {
    PathRecord path;
};

/** One router's self-reported forwarding record, accumulated on the returning ACK. */
struct HopRecord {
    NodeId node = NO_NODE;
    Clock forward_time = 0.0;
    int queue_size = 0;
};

struct AckPayload {
    MsgId data_id = 0;
    PathRecord path;
    std::vector<HopRecord> hops;
    bool direct = false;   // true: single-hop answer to a retransmitted duplicate
};

struct HelloPayload {
    Vec2 pos;
};

struct EnquiryPayload {
    int64_t investigation = 0;
    NodeId suspect = NO_NODE;
    Clock t0 = 0.0;
    Clock t1 = 0.0;
};

struct ReplyRecord {
    Clock time = 0.0;
    Vec2 suspect_pos;     // where the suspect said it was when it beaconed
    Vec2 responder_pos;   // where the responder was at that moment
};

struct HelloReplyPayload {
    int64_t investigation = 0;
    NodeId suspect = NO_NODE;
    std::vector<ReplyRecord> records;
};

struct RreqPayload {
    NodeId target = NO_NODE;
    NodeId exclude = NO_NODE;
};

struct CopyReturnPayload {
    MsgId data_id = 0;
};

struct DeparturePayload {
    MsgId data_id = 0;
};

struct CollusionPayload {
    NodeId protect = NO_NODE;   // whose records the sender wants concealed
};

// ---- allegation proofs ----

enum class AllegationKind { LinkBreak, Delay, Flood, Collusion };

/** Stored burst of route requests: eta+1 of them inside one second convicts. */
struct RreqBundle {
    NodeId origin = NO_NODE;
    std::vector<Clock> times;
};

/** The sender's own bicast copy plus the suspect's reply; timestamps replay the delay. */
struct BicastCopyPair {
    MsgId data_id = 0;
    Clock t_first = 0.0;    // predecessor's first transmission
    Clock t_last = 0.0;     // predecessor's latest retransmission
    Clock t_forward = 0.0;  // suspect's claimed forward time
    int queue_size = 0;     // suspect's queue size
};

struct HelloEvidence {
    Clock time = 0.0;
    Vec2 suspect_pos;
    Vec2 investigator_pos;
};

/** Collected beacon history over the investigation window; receivers replay the count rule. */
struct HelloHistoryBundle {
    Clock t0 = 0.0;
    Clock t1 = 0.0;
    int tau_hello = 1;             // suspect's beacon interval, seconds
    double investigator_range = 0.0;
    std::vector<HelloEvidence> records;   // unique, merged across responders
};

struct ConcealRecord {
    Clock time = 0.0;
    Vec2 suspect_pos;
    Vec2 responder_pos;
};

/** Cross-responder evidence that a responder omitted beacons it must have heard. */
struct ConcealmentEvidence {
    int provided = 0;                    // records the responder actually returned
    double suspect_range = 0.0;
    std::vector<ConcealRecord> union_records;
};

struct CollusionRequestCopy {
    NodeId origin = NO_NODE;
    int code = 0;   // wire code of the captured request
};

using Proof = std::variant<std::monostate, RreqBundle, BicastCopyPair, HelloHistoryBundle,
                           ConcealmentEvidence, CollusionRequestCopy>;

struct AllegationPacket {
    AllegationKind kind = AllegationKind::LinkBreak;
    NodeId accuser = NO_NODE;
    NodeId accused = NO_NODE;
    Proof proof;
    std::vector<NodeId> witnesses;   // cooperating detectors named for reward
};

using Payload = std::variant<std::monostate, DataPayload, AckPayload, HelloPayload,
                             EnquiryPayload, HelloReplyPayload, RreqPayload, CopyReturnPayload,
                             DeparturePayload, CollusionPayload, AllegationPacket>;

/**
 * A simulated packet. Origin and creation time are stamped once at
 * construction and have no setters: a node cannot mask itself as another
 * originator. Everything else is per-hop state.
 */
class Message {
public:
    static Message originate(MsgId id, NodeId origin, MsgCode code, Clock now) {
        return Message(id, origin, code, now);
    }

    MsgId id() const { return id_; }
    NodeId origin() const { return origin_; }
    Clock created_at() const { return created_at_; }
    MsgCode code() const { return code_; }

    Payload payload;
    uint64_t sender_attrs = 0;   // encoded attribute block of the current transmitter

private:
    Message(MsgId id, NodeId origin, MsgCode code, Clock now)
        : id_(id), origin_(origin), created_at_(now), code_(code) {}

    MsgId id_;
    NodeId origin_;
    Clock created_at_;
    MsgCode code_;
};

} // namespace repsim::proto
