#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "repsim/message.hpp"
#include "repsim/protocol.hpp"
#include "repsim/types.hpp"

using namespace repsim;
using proto::AllegationKind;
using proto::AllegationPacket;
using proto::BlacklistRule;
using proto::DelayRule;
using proto::ProtocolParams;

namespace {
ProtocolParams slow() {
  ProtocolParams p;
  p.tau = 1.0;
  p.tau_prime = 10.0;
  p.eta = 5;
  return p;
}
} // namespace

TEST_CASE("beacon budget and expectation") {
  CHECK(proto::hello_budget(10.0, 6) == 5);
  CHECK(proto::hello_budget(10.0, 7) == 4);
  CHECK(proto::hello_expected(100.0, 130.0, 6) == 5);
  CHECK(proto::hello_expected(100.0, 130.0, 7) == 5); // 30/7 rounds up
  CHECK(proto::hello_expected(50.0, 50.0, 6) == 0);
  CHECK_THROWS_AS(proto::hello_budget(10.0, 0), Error);
  CHECK_THROWS_AS(proto::hello_expected(10.0, 5.0, 6), Error);
}

TEST_CASE("delay threshold and source wait") {
  CHECK(proto::delay_threshold(5, 1.0, 10.0) == doctest::Approx(34.0));
  CHECK(proto::compute_gamma({5, 5}, 1.0, 10.0) == doctest::Approx(71.0));
  CHECK(proto::compute_gamma({}, 1.0, 10.0) == doctest::Approx(1.0));
  CHECK(proto::compute_gamma({2}, 1.0, 10.0) == doctest::Approx(33.0));
  CHECK_THROWS_AS(proto::compute_gamma({1}, 1.0, 10.0), Error);
}

TEST_CASE("blacklist verdict under both rules") {
  // supporting in-range count x2 versus expected count z
  CHECK(proto::blacklist_verdict(BlacklistRule::Pseudocode, 5, 5, 5, 5));
  CHECK(proto::blacklist_verdict(BlacklistRule::Pseudocode, 4, 5, 5, 5));
  CHECK_FALSE(proto::blacklist_verdict(BlacklistRule::Pseudocode, 3, 5, 5, 5));
  // unanimous full history x1 = x2 = y
  CHECK(proto::blacklist_verdict(BlacklistRule::Prose, 5, 5, 5, 5));
  CHECK_FALSE(proto::blacklist_verdict(BlacklistRule::Prose, 4, 5, 5, 5));
  CHECK_FALSE(proto::blacklist_verdict(BlacklistRule::Prose, 4, 4, 5, 5));
}

TEST_CASE("delay attack predicate under both rules") {
  CHECK(proto::delay_attack(DelayRule::Prose, 0.0, 20.0, 34.1, 5, 1.0, 10.0));
  CHECK_FALSE(proto::delay_attack(DelayRule::Prose, 0.0, 20.0, 34.0, 5, 1.0, 10.0));
  CHECK(proto::delay_attack(DelayRule::Pseudocode, 0.0, 20.0, 24.1, 5, 1.0, 10.0));
  CHECK_FALSE(proto::delay_attack(DelayRule::Pseudocode, 0.0, 20.0, 24.0, 5, 1.0, 10.0));
}

TEST_CASE("route request limiter trips on the burst that exceeds the budget") {
  proto::RreqLimiter lim;
  for (double t : {0.0, 0.2, 0.4, 0.6, 0.8}) {
    CHECK_FALSE(lim.note_request(t, 5).flood);
  }
  const auto out = lim.note_request(0.9, 5);
  CHECK(out.flood);
  REQUIRE(out.bundle.size() == 6);
  CHECK(out.bundle.front() == doctest::Approx(0.0));
  CHECK(out.bundle.back() == doctest::Approx(0.9));
  // the tripped window is closed; the next request opens a fresh one
  CHECK_FALSE(lim.note_request(0.95, 5).flood);
}

TEST_CASE("route request limiter resets after a quiet second") {
  proto::RreqLimiter lim;
  for (double t : {0.0, 0.2, 0.4, 0.6, 0.8}) lim.note_request(t, 5);
  CHECK_FALSE(lim.note_request(1.1, 5).flood); // window restarted at 1.1
  // refill the new window: four more inside a second trip it
  for (double t : {1.3, 1.5, 1.7, 1.9}) CHECK_FALSE(lim.note_request(t, 5).flood);
  CHECK(lim.note_request(2.0, 5).flood);
}

TEST_CASE("a burst closing exactly one second after it opened still counts") {
  proto::RreqLimiter lim;
  for (double t : {0.0, 0.2, 0.4, 0.6, 0.8}) lim.note_request(t, 5);
  CHECK(lim.note_request(1.0, 5).flood);
}

TEST_CASE("path records expose positions and neighbors") {
  proto::PathRecord path{{10, 11, 12, 13}};
  CHECK(path.p() == 4);
  CHECK(path.q_of(10) == 0);
  CHECK(path.q_of(12) == 2);
  CHECK_THROWS_AS(path.q_of(99), Error);
  CHECK(path.next_after(12) == 13);
  CHECK(path.next_after(13) == NO_NODE);
  CHECK(path.prev_before(10) == NO_NODE);
  CHECK(path.prev_before(11) == 10);
  CHECK(path.contains(13));
  CHECK_FALSE(path.contains(14));
}

TEST_CASE("messages pin their originator at construction") {
  auto m = proto::Message::originate(7, 3, proto::MsgCode::Data, 1.5);
  CHECK(m.id() == 7);
  CHECK(m.origin() == 3);
  CHECK(m.created_at() == doctest::Approx(1.5));
  CHECK(m.code() == proto::MsgCode::Data);
}

TEST_CASE("an allegation without proof convicts nobody") {
  AllegationPacket a{AllegationKind::LinkBreak, 1, 2, std::monostate{}, {}};
  CHECK_FALSE(proto::allegation_guilty(a, slow()));
}

TEST_CASE("request-burst proof convicts only a matching oversized burst") {
  const auto p = slow();
  proto::RreqBundle b{2, {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}};
  AllegationPacket a{AllegationKind::Flood, 1, 2, b, {}};
  CHECK(proto::allegation_guilty(a, p));

  proto::RreqBundle wrong_origin{3, b.times};
  CHECK_FALSE(proto::allegation_guilty(
      {AllegationKind::Flood, 1, 2, wrong_origin, {}}, p));

  proto::RreqBundle small{2, {0.0, 0.1, 0.2, 0.3, 0.4}};
  CHECK_FALSE(proto::allegation_guilty({AllegationKind::Flood, 1, 2, small, {}}, p));

  proto::RreqBundle spread{2, {0.0, 0.3, 0.6, 0.9, 1.2, 1.5}};
  CHECK_FALSE(proto::allegation_guilty({AllegationKind::Flood, 1, 2, spread, {}}, p));
}

TEST_CASE("bicast copy proof replays the delay rule") {
  const auto p = slow();
  proto::BicastCopyPair late{9, 0.0, 20.0, 40.0, 5};
  CHECK(proto::allegation_guilty({AllegationKind::Delay, 1, 2, late, {}}, p));
  proto::BicastCopyPair on_time{9, 0.0, 20.0, 30.0, 5};
  CHECK_FALSE(proto::allegation_guilty({AllegationKind::Delay, 1, 2, on_time, {}}, p));
}

TEST_CASE("beacon history proof replays the count rules") {
  auto p = slow();
  proto::HelloHistoryBundle b;
  b.t0 = 100.0;
  b.t1 = 130.0;
  b.tau_hello = 6;
  b.investigator_range = 100.0;
  const Vec2 inv{0, 0};
  for (double t : {102.0, 108.0, 114.0, 120.0, 126.0}) {
    b.records.push_back({t, {50, 0}, inv});
  }
  // full in-range history: x2 = x1 = y = z = 5, guilty under both rules
  CHECK(proto::allegation_guilty({AllegationKind::LinkBreak, 1, 2, b, {}}, p));
  p.blacklist_rule = BlacklistRule::Prose;
  CHECK(proto::allegation_guilty({AllegationKind::LinkBreak, 1, 2, b, {}}, p));

  // push one beacon out of the investigator's radio: x2 = 4 = z - 1
  auto one_far = b;
  one_far.records[4].suspect_pos = {150, 0};
  CHECK_FALSE(proto::allegation_guilty({AllegationKind::LinkBreak, 1, 2, one_far, {}}, p));
  p.blacklist_rule = BlacklistRule::Pseudocode;
  CHECK(proto::allegation_guilty({AllegationKind::LinkBreak, 1, 2, one_far, {}}, p));

  // two out of range clears the suspect
  auto two_far = one_far;
  two_far.records[3].suspect_pos = {150, 0};
  CHECK_FALSE(proto::allegation_guilty({AllegationKind::LinkBreak, 1, 2, two_far, {}}, p));

  // duplicate times collapse and out-of-window records are ignored
  auto noisy = b;
  noisy.records.push_back({102.0, {50, 0}, inv});
  noisy.records.push_back({99.9, {50, 0}, inv});
  noisy.records.push_back({130.0, {50, 0}, inv});
  CHECK(proto::allegation_guilty({AllegationKind::LinkBreak, 1, 2, noisy, {}}, p));
}

TEST_CASE("concealment proof compares returned records with the audible union") {
  const auto p = slow();
  proto::ConcealmentEvidence e;
  e.suspect_range = 100.0;
  for (double t : {1.0, 2.0, 3.0, 4.0, 5.0}) {
    e.union_records.push_back({t, {0, 0}, {50, 0}});
  }
  e.provided = 4;
  CHECK(proto::allegation_guilty({AllegationKind::LinkBreak, 1, 2, e, {}}, p));
  e.provided = 5;
  CHECK_FALSE(proto::allegation_guilty({AllegationKind::LinkBreak, 1, 2, e, {}}, p));

  // beacons the responder could never have heard do not convict it
  proto::ConcealmentEvidence far;
  far.suspect_range = 100.0;
  far.provided = 0;
  for (double t : {1.0, 2.0, 3.0}) far.union_records.push_back({t, {0, 0}, {200, 0}});
  CHECK_FALSE(proto::allegation_guilty({AllegationKind::LinkBreak, 1, 2, far, {}}, p));
}

TEST_CASE("captured collusion requests convict their sender alone") {
  const auto p = slow();
  proto::CollusionRequestCopy c{2, static_cast<int>(proto::MsgCode::CollusionRequest)};
  CHECK(proto::allegation_guilty({AllegationKind::Collusion, 1, 2, c, {}}, p));
  proto::CollusionRequestCopy other{3, c.code};
  CHECK_FALSE(proto::allegation_guilty({AllegationKind::Collusion, 1, 2, other, {}}, p));
  proto::CollusionRequestCopy benign{2, static_cast<int>(proto::MsgCode::Data)};
  CHECK_FALSE(proto::allegation_guilty({AllegationKind::Collusion, 1, 2, benign, {}}, p));
}

TEST_CASE("forward state defaults") {
  proto::ForwardState f;
  CHECK(f.attempts == 1);
  CHECK_FALSE(f.confirmed);
  CHECK_FALSE(f.excused);
  CHECK_FALSE(f.reward_paid);
  CHECK_FALSE(f.investigated);
  CHECK_FALSE(f.gamma_checked);
}
