#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <string>
#include <vector>

#include "repsim/config.hpp"
#include "repsim/metrics.hpp"
#include "repsim/report.hpp"
#include "repsim/world.hpp"

using namespace repsim;
using sim::ScenarioNode;
using sim::SimConfig;
using sim::World;
using strategy::Strategy;

namespace {

/** Pinned-layout runs want no organic traffic; the rate must stay positive. */
SimConfig scenario_config() {
  SimConfig cfg;
  cfg.sim_time = 240.0;
  cfg.traffic_rate = 1e-9;
  return cfg;
}

} // namespace

// ---------------------------------------------------------------------------
// configuration

TEST_CASE("empty config text yields the defaults") {
  const SimConfig c = sim::parse_config("");
  CHECK(c.node_count == 60);
  CHECK(c.malicious_count == 0);
  CHECK(c.area_width == doctest::Approx(600.0));
  CHECK(c.area_height == doctest::Approx(300.0));
  CHECK(c.radio_min == doctest::Approx(100.0));
  CHECK(c.max_radio == doctest::Approx(150.0));
  CHECK(c.v_max == doctest::Approx(10.0));
  CHECK(c.hello_min == 6);
  CHECK(c.hello_max == 10);
  CHECK(c.tau_prime == doctest::Approx(10.0));
  CHECK(c.eta == 5);
  CHECK(c.sim_time == doctest::Approx(600.0));
  CHECK(c.runs == 1);
  CHECK(c.seed == 1);
  CHECK(c.alpha == doctest::Approx(2.0));
  CHECK(c.suspicion_limit == 5);
  CHECK(c.queue_size == 5);
  CHECK(c.hop_limit == 10);
  CHECK(c.blacklist_rule == proto::BlacklistRule::Pseudocode);
  CHECK(c.delay_rule == proto::DelayRule::Prose);
  CHECK(c.penalty_mode == fuzzy::PenaltyMode::Literal);
  CHECK(c.malicious_strategy == "mixed");
  CHECK(c.effective_delay_extra() == doctest::Approx(60.4));
  CHECK(c.effective_flood_rate() == doctest::Approx(10.0));
}

TEST_CASE("every key parses and lands in its field") {
  const std::string text =
      "# overrides for a short desk run\n"
      "\n"
      "node_count = 40\n"
      "malicious_count = 4\n"
      "area_width = 500\n"
      "area_height = 250\n"
      "max_radio = 120\n"
      "radio_min = 80\n"
      "v_max = 5\n"
      "pause_max = 10\n"
      "hello_min = 7\n"
      "hello_max = 9\n"
      "tau_prime = 8\n"
      "eta = 4\n"
      "packet_size = 256\n"
      "bandwidth = 2e6\n"
      "sim_time = 120\n"
      "runs = 2\n"
      "seed = 99\n"
      "alpha = 3\n"
      "suspicion_limit = 4\n"
      "tau = 0.1\n"
      "queue_size = 6\n"
      "hop_limit = 8\n"
      "sigma = 2\n"
      "blacklist_rule = prose\n"
      "delay_rule = pseudocode\n"
      "penalty_mode = magnitude\n"
      "traffic_rate = 0.2\n"
      "supportive_fraction = 0.25\n"
      "malicious_strategy = MaliciousDelay\n"
      "delay_extra = 12\n"
      "flood_rate = 7\n"
      "collusion_interval = 45\n"
      "mobility_dt = 0.5\n";
  const SimConfig c = sim::parse_config(text);
  CHECK(c.node_count == 40);
  CHECK(c.malicious_count == 4);
  CHECK(c.area_width == doctest::Approx(500.0));
  CHECK(c.area_height == doctest::Approx(250.0));
  CHECK(c.max_radio == doctest::Approx(120.0));
  CHECK(c.radio_min == doctest::Approx(80.0));
  CHECK(c.v_max == doctest::Approx(5.0));
  CHECK(c.pause_max == doctest::Approx(10.0));
  CHECK(c.hello_min == 7);
  CHECK(c.hello_max == 9);
  CHECK(c.tau_prime == doctest::Approx(8.0));
  CHECK(c.eta == 4);
  CHECK(c.packet_size == 256);
  CHECK(c.bandwidth == doctest::Approx(2e6));
  CHECK(c.sim_time == doctest::Approx(120.0));
  CHECK(c.runs == 2);
  CHECK(c.seed == 99);
  CHECK(c.alpha == doctest::Approx(3.0));
  CHECK(c.suspicion_limit == 4);
  CHECK(c.tau == doctest::Approx(0.1));
  CHECK(c.queue_size == 6);
  CHECK(c.hop_limit == 8);
  CHECK(c.sigma == doctest::Approx(2.0));
  CHECK(c.blacklist_rule == proto::BlacklistRule::Prose);
  CHECK(c.delay_rule == proto::DelayRule::Pseudocode);
  CHECK(c.penalty_mode == fuzzy::PenaltyMode::Magnitude);
  CHECK(c.traffic_rate == doctest::Approx(0.2));
  CHECK(c.supportive_fraction == doctest::Approx(0.25));
  CHECK(c.malicious_strategy == "MaliciousDelay");
  CHECK(c.effective_delay_extra() == doctest::Approx(12.0));
  CHECK(c.effective_flood_rate() == doctest::Approx(7.0));
  CHECK(c.collusion_interval == doctest::Approx(45.0));
  CHECK(c.mobility_dt == doctest::Approx(0.5));
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS_AS((void)sim::parse_config("node_count\n"), Error);
  CHECK_THROWS_AS((void)sim::parse_config("voltage = 3\n"), Error);
  CHECK_THROWS_AS((void)sim::parse_config("node_count = many\n"), Error);
  CHECK_THROWS_AS((void)sim::parse_config("eta = 4\neta = 5\n"), Error);
  CHECK_THROWS_AS((void)sim::parse_config("node_count = 3\n"), Error);
  CHECK_THROWS_AS((void)sim::parse_config("alpha = 1\n"), Error);
  CHECK_THROWS_AS((void)sim::parse_config("queue_size = 1\n"), Error);
  CHECK_THROWS_AS((void)sim::parse_config("blacklist_rule = maybe\n"), Error);
  CHECK_THROWS_AS((void)sim::parse_config("malicious_strategy = SelfishSupportive\n"), Error);
  CHECK_NOTHROW((void)sim::parse_config("malicious_strategy = MaliciousFlood\n"));
}

TEST_CASE("full-scale profile pins its parameters") {
  const SimConfig c = sim::parse_config("paper_profile = true\n");
  CHECK(c.paper_profile);
  CHECK(c.node_count == 500);
  CHECK(c.area_width == doctest::Approx(2000.0));
  CHECK(c.max_radio == doctest::Approx(250.0));
  CHECK(c.v_max == doctest::Approx(50.0));
  CHECK(c.sim_time == doctest::Approx(3600.0));
  CHECK(c.runs == 6);
  // explicit overrides land on top of the profile when they stay legal
  const SimConfig d = sim::parse_config("paper_profile = true\nnode_count = 800\n");
  CHECK(d.node_count == 800);
  CHECK_THROWS_AS((void)sim::parse_config("paper_profile = true\nsim_time = 600\n"), Error);
}

// ---------------------------------------------------------------------------
// metric folding

TEST_CASE("run metrics summarize node tallies") {
  metrics::RunTallies t;
  metrics::NodeTally a;
  a.standing = 6.0;
  a.rep_lost = 1.0;
  a.energy_wasted = 2.0;
  metrics::NodeTally b;
  b.standing = 4.0;
  metrics::NodeTally bad;
  bad.malicious = true;
  bad.acted = true;
  bad.detected = true;
  bad.rep_lost = 3.0;
  bad.energy_wasted = 4.0;
  t.nodes = {a, b, bad};
  const metrics::RunMetrics m = metrics::compute_metrics(t);
  CHECK(m.malicious_count == 1);
  CHECK(m.rep_efficiency == doctest::Approx(5.0));
  CHECK(m.dmg_selfish == doctest::Approx(1.5));
  CHECK(m.dmg_selfish_energy == doctest::Approx(1.0));
  CHECK(m.dmg_malicious == doctest::Approx(7.0));
  CHECK(m.dmg_malicious_energy == doctest::Approx(4.0));
  REQUIRE(m.detection_rate_pct.has_value());
  CHECK(*m.detection_rate_pct == doctest::Approx(100.0));
  CHECK(*m.undetected_pct == doctest::Approx(0.0));
}

TEST_CASE("detection rate counts only attackers that acted") {
  metrics::RunTallies t;
  for (int i = 0; i < 5; ++i) {
    metrics::NodeTally n;
    n.malicious = true;
    n.acted = true;
    n.detected = i < 4;
    t.nodes.push_back(n);
  }
  metrics::NodeTally idle;
  idle.malicious = true;
  t.nodes.push_back(idle);
  const metrics::RunMetrics m = metrics::compute_metrics(t);
  REQUIRE(m.detection_rate_pct.has_value());
  CHECK(*m.detection_rate_pct == doctest::Approx(80.0));
  CHECK(*m.undetected_pct == doctest::Approx(20.0));
}

TEST_CASE("detection rate stays blank when no attacker acted") {
  metrics::RunTallies t;
  metrics::NodeTally idle;
  idle.malicious = true;
  metrics::NodeTally honest;
  t.nodes = {idle, honest};
  const metrics::RunMetrics m = metrics::compute_metrics(t);
  CHECK_FALSE(m.detection_rate_pct.has_value());
  CHECK_FALSE(m.undetected_pct.has_value());
}

TEST_CASE("aggregation averages runs and skips blank detection entries") {
  metrics::RunMetrics a;
  a.malicious_count = 2;
  a.rep_efficiency = 10.0;
  a.dmg_selfish = 1.0;
  a.detection_rate_pct = 50.0;
  a.undetected_pct = 50.0;
  metrics::RunMetrics b;
  b.malicious_count = 2;
  b.rep_efficiency = 20.0;
  b.dmg_selfish = 3.0;
  const metrics::RunMetrics agg = metrics::aggregate_metrics({a, b});
  CHECK(agg.malicious_count == 2);
  CHECK(agg.rep_efficiency == doctest::Approx(15.0));
  CHECK(agg.dmg_selfish == doctest::Approx(2.0));
  REQUIRE(agg.detection_rate_pct.has_value());
  CHECK(*agg.detection_rate_pct == doctest::Approx(50.0));
  CHECK(*agg.undetected_pct == doctest::Approx(50.0));
}

TEST_CASE("rank correlation handles ties and constants") {
  CHECK(metrics::spearman({1, 2, 3}, {6, 5, 4}) == doctest::Approx(-1.0));
  CHECK(metrics::spearman({1, 2, 3}, {4, 5, 6}) == doctest::Approx(1.0));
  CHECK(metrics::spearman({1, 2, 3, 4}, {1, 1, 2, 2}) > 0.0);
  CHECK(metrics::spearman({1, 2, 3}, {7, 7, 7}) == doctest::Approx(0.0));
}

TEST_CASE("deviation payoffs match their closed forms") {
  const metrics::PropositionReport c = metrics::collusion_gains(2.0, 4);
  CHECK(c.honest_gain == doctest::Approx(8.0));
  CHECK(c.dishonest_gain == doctest::Approx(4.0));
  CHECK(c.margin == doctest::Approx(4.0));
  CHECK(c.margin == doctest::Approx(c.closed_margin));
  const metrics::PropositionReport l = metrics::link_break_gains(0.5, 0.5, 2.0, 4);
  CHECK(l.honest_gain == doctest::Approx(3.0));
  CHECK(l.dishonest_gain == doctest::Approx(2.0));
  CHECK(l.margin == doctest::Approx(1.0));
  CHECK(l.margin == doctest::Approx(l.closed_margin));
  CHECK(metrics::damage_bound(10, 5, 1.0, 60) == doctest::Approx(2950.0));
}

// ---------------------------------------------------------------------------
// report schemas

TEST_CASE("csv schemas stay pinned") {
  metrics::RunMetrics row;
  row.malicious_count = 4;
  row.rep_efficiency = 1.5;
  row.detection_rate_pct = 75.0;
  row.undetected_pct = 25.0;
  const std::string sweep = sim::sweep_csv({row});
  CHECK(sweep.rfind("malicious_count,rep_efficiency,dmg_selfish,dmg_malicious,"
                    "detection_rate_pct,paper_literal_pct\n",
                    0) == 0);
  CHECK(sweep.find("\r") == std::string::npos);
  CHECK(sweep.find("75.000000,25.000000") != std::string::npos);

  metrics::RunMetrics blank;
  blank.malicious_count = 0;
  const std::string sweep2 = sim::sweep_csv({blank});
  CHECK(sweep2.find(",,") != std::string::npos);   // undefined detection stays empty

  const std::string run = sim::run_csv({row}, row);
  CHECK(run.rfind("run,malicious_count,rep_efficiency,dmg_selfish,dmg_selfish_energy,"
                  "dmg_malicious,dmg_malicious_energy,detection_rate_pct,undetected_pct\n",
                  0) == 0);
  CHECK(run.find("\nmean,") != std::string::npos);
}

// ---------------------------------------------------------------------------
// whole-run behavior

TEST_CASE("identical configuration and seed replay identically") {
  SimConfig cfg;
  cfg.node_count = 20;
  cfg.malicious_count = 2;
  cfg.sim_time = 60.0;
  cfg.validate();
  const sim::RunResult a = sim::run_simulation(cfg, 7, true);
  const sim::RunResult b = sim::run_simulation(cfg, 7, true);
  CHECK(a.tallies.trace_hash == b.tallies.trace_hash);
  CHECK(a.tallies.events == b.tallies.events);
  CHECK(a.tallies.delivered == b.tallies.delivered);
  CHECK(a.metrics.rep_efficiency == doctest::Approx(b.metrics.rep_efficiency));
  const sim::RunResult c = sim::run_simulation(cfg, 8, true);
  CHECK(a.tallies.trace_hash != c.tallies.trace_hash);
}

TEST_CASE("trace emits one line per processed event") {
  SimConfig cfg;
  cfg.node_count = 12;
  cfg.sim_time = 30.0;
  cfg.validate();
  World w(cfg, 5);
  w.enable_trace();
  w.run();
  const sim::RunResult res = w.harvest();
  CHECK(static_cast<int64_t>(w.trace().size()) == res.tallies.events);
  CHECK(res.tallies.events > 0);
  uint64_t h = sim::FNV_OFFSET;
  for (const std::string& line : w.trace()) h = sim::hash_line(h, line);
  CHECK(h == w.trace_hash());
  CHECK(w.trace_hash() == res.tallies.trace_hash);
}

TEST_CASE("honest network raises no allegations") {
  SimConfig cfg;
  cfg.node_count = 30;
  cfg.sim_time = 120.0;
  cfg.traffic_rate = 0.05;
  cfg.validate();
  const sim::RunResult res = sim::run_simulation(cfg, 3);
  CHECK(res.tallies.allegations == 0);
  CHECK(res.tallies.network_blacklists == 0);
  CHECK(res.tallies.delivered > 0);
}

// ---------------------------------------------------------------------------
// pinned scenarios
//
// Shared layout for the next two cases (coordinates in meters, all radios 100):
//
//   A(0,50) -- B(80,50) -- C(160,50) -- D(240,50)     C drops the data
//                           |    \
//                        E(160,0)  G(160,100)  F(240,100)
//
// A's message to D dies at C; B retries twice, then opens an investigation
// whose window holds exactly five of C's beacons.

TEST_CASE("silent router is convicted by beacon archives") {
  SimConfig cfg = scenario_config();
  std::vector<ScenarioNode> layout = {
      {{0, 50}},   {{80, 50}},  {{160, 50}}, {{240, 50}},
      {{160, 0}},  {{160, 100}}, {{240, 100}},
  };
  layout[2].strat = Strategy::MaliciousLinkBreak;
  World w(cfg, layout, 11);
  w.inject_data(0, 3, 1.0);
  w.run_until(35.0);

  CHECK(w.generated_count() == 1);
  CHECK(w.delivered_count() == 0);
  CHECK(w.allegation_count() == 1);
  CHECK(w.network_blacklisted_at(0, 2));
  CHECK(w.network_blacklisted_at(1, 2));
  CHECK(w.network_blacklisted_at(3, 2));
  CHECK(w.network_blacklisted_at(5, 2));
  CHECK(w.score_at(1, 2) == doctest::Approx(-7.0));   // blacklist floor at -|phi|
  CHECK(w.score_at(1, 0) == doctest::Approx(-4.0));   // generator debit at the router
  CHECK(w.score_at(0, 1) == doctest::Approx(0.0));    // no proof of delivery, no reward
  // every responder returned records, so the investigator pays each one
  CHECK(w.score_at(1, 3) == doctest::Approx(4.0));
  CHECK(w.score_at(1, 4) == doctest::Approx(4.0));
  CHECK(w.score_at(1, 5) == doctest::Approx(4.0));
  CHECK(w.score_at(1, 6) == doctest::Approx(4.0));

  const sim::RunResult res = w.harvest();
  CHECK(res.tallies.nodes[2].acted);
  CHECK(res.tallies.nodes[2].detected);
  CHECK(res.tallies.nodes[1].energy_wasted >= 3.0);   // three doomed data sends
  CHECK(res.tallies.nodes[3].energy_wasted == doctest::Approx(0.0));
}

TEST_CASE("concealing responder is convicted before the accused") {
  SimConfig cfg = scenario_config();
  cfg.collusion_interval = 1000.0;   // pact partner never recruits on its own
  std::vector<ScenarioNode> layout = {
      {{0, 50}},   {{80, 50}},  {{160, 50}}, {{240, 50}},
      {{160, 0}},  {{160, 100}}, {{240, 100}},
  };
  layout[2].strat = Strategy::MaliciousLinkBreak;
  layout[5].strat = Strategy::MaliciousCollude;
  World w(cfg, layout, 11);
  w.force_pact(5, 2);
  w.inject_data(0, 3, 1.0);
  w.run_until(35.0);

  // the empty reply contradicts the investigator's own archive: two verdicts
  CHECK(w.allegation_count() == 2);
  CHECK(w.network_blacklisted_at(0, 5));
  CHECK(w.network_blacklisted_at(0, 2));
  CHECK(w.score_at(1, 5) == doctest::Approx(-7.0));
  CHECK(w.score_at(1, 2) == doctest::Approx(-7.0));
  // the truthful responders still collect the vindication reward
  CHECK(w.score_at(1, 3) == doctest::Approx(4.0));
  CHECK(w.score_at(1, 4) == doctest::Approx(4.0));
  CHECK(w.score_at(1, 6) == doctest::Approx(4.0));
}

TEST_CASE("held-back forwarding trips the strict delay rule") {
  SimConfig cfg = scenario_config();
  cfg.delay_extra = 15.0;
  cfg.delay_rule = proto::DelayRule::Pseudocode;
  std::vector<ScenarioNode> layout = {
      {{0, 0}}, {{80, 0}}, {{160, 0}}, {{240, 0}},
  };
  layout[2].strat = Strategy::MaliciousDelay;
  World w(cfg, layout, 11);
  w.inject_data(0, 3, 1.0);
  w.run_until(30.0);

  CHECK(w.delivered_count() == 1);   // the message arrives, just late
  CHECK(w.allegation_count() == 1);
  CHECK(w.network_blacklisted_at(0, 2));
  CHECK(w.network_blacklisted_at(1, 2));
  CHECK(w.network_blacklisted_at(3, 2));
  CHECK(w.score_at(1, 2) == doctest::Approx(-4.0));   // -|phi| in the four-node world
  CHECK(w.score_at(2, 3) == doctest::Approx(2.0));    // the laggard still pays its successor
  CHECK(w.score_at(0, 1) == doctest::Approx(2.0));    // ack proof reached the source
  CHECK(w.score_at(1, 0) == doctest::Approx(-4.0));
  CHECK(w.score_at(3, 0) == doctest::Approx(0.0));

  const sim::RunResult res = w.harvest();
  CHECK(res.tallies.nodes[2].rep_lost == doctest::Approx(14.0));
  CHECK(res.tallies.nodes[0].energy_wasted == doctest::Approx(1.0));
  CHECK(res.tallies.nodes[1].energy_wasted == doctest::Approx(3.0));
}

TEST_CASE("lenient delay rule only records a suspicion") {
  SimConfig cfg = scenario_config();
  cfg.delay_extra = 15.0;   // under the lenient threshold of 30.2 s
  std::vector<ScenarioNode> layout = {
      {{0, 0}}, {{80, 0}}, {{160, 0}}, {{240, 0}},
  };
  layout[2].strat = Strategy::MaliciousDelay;
  World w(cfg, layout, 11);
  w.inject_data(0, 3, 1.0);
  w.run_until(30.0);

  CHECK(w.delivered_count() == 1);
  CHECK(w.allegation_count() == 0);
  CHECK_FALSE(w.network_blacklisted_at(0, 2));
  CHECK_FALSE(w.network_blacklisted_at(1, 2));
}

TEST_CASE("request flooder is cut off by every neighbor") {
  SimConfig cfg = scenario_config();
  std::vector<ScenarioNode> layout = {
      {{50, 50}}, {{100, 50}}, {{50, 100}}, {{0, 0}},
  };
  layout[0].strat = Strategy::MaliciousFlood;
  World w(cfg, layout, 11);
  w.run_until(2.0);

  // the sixth request inside one second trips each neighbor independently
  CHECK(w.allegation_count() == 3);
  CHECK(w.network_blacklisted_at(1, 0));
  CHECK(w.network_blacklisted_at(2, 0));
  CHECK(w.network_blacklisted_at(3, 0));

  const sim::RunResult res = w.harvest();
  CHECK(res.tallies.nodes[0].acted);
  CHECK(res.tallies.nodes[0].detected);
  CHECK(res.tallies.nodes[0].energy_wasted == doctest::Approx(20.0));   // one burst per tick
}
