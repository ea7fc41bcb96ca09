#pragma once

#include <string>

#include "repsim/fuzzy.hpp"
#include "repsim/protocol.hpp"
#include "repsim/types.hpp"

namespace repsim::sim {

/**
 * One run's parameters. Defaults are the desk-scale profile; paper_profile
 * switches arena, radio, speed and horizon to the full-scale field values.
 */
struct SimConfig {
    int node_count = 60;
    int malicious_count = 0;
    double area_width = 600.0;
    double area_height = 300.0;
    double max_radio = 150.0;      // per-node range drawn uniformly in [radio_min, max_radio]
    double radio_min = 100.0;
    double v_max = 10.0;           // m/s
    double pause_max = 20.0;       // s
    int hello_min = 6;             // beacon interval bounds, whole seconds
    int hello_max = 10;
    double tau_prime = 10.0;       // retransmission spacing, s
    int eta = 5;                   // route-request budget per second
    int packet_size = 512;         // bytes on the wire, every packet
    double bandwidth = 1.0e6;      // bits per second
    double sim_time = 600.0;       // s
    int runs = 1;
    uint64_t seed = 1;

    double alpha = 2.0;            // base reward; alpha^2 derived
    int suspicion_limit = 5;       // M: suspicions tolerated before collapse
    double tau = 0.05;             // queue service time, s
    int queue_size = 5;            // advertised m_i, uniform
    int hop_limit = 10;            // H
    double sigma = 1.0;            // energy per transmission

    proto::BlacklistRule blacklist_rule = proto::BlacklistRule::Pseudocode;
    proto::DelayRule delay_rule = proto::DelayRule::Prose;
    fuzzy::PenaltyMode penalty_mode = fuzzy::PenaltyMode::Literal;
    bool paper_profile = false;

    double traffic_rate = 0.1;         // packets/s per selfish source
    double supportive_fraction = 0.5;  // share of selfish nodes that volunteer as witnesses
    std::string malicious_strategy = "mixed";   // or one strategy name pinning all attackers
    double delay_extra = 0.0;          // 0 selects 2 * ((m-1)*tau + 3*tau_prime)
    double flood_rate = 0.0;           // 0 selects 2 * eta
    double collusion_interval = 30.0;
    double mobility_dt = 1.0;

    double effective_delay_extra() const;
    double effective_flood_rate() const;
    proto::ProtocolParams protocol() const;
    void validate() const;
};

/** Parses flat key=value text ('#' comments and blank lines allowed). Unknown keys are rejected. */
SimConfig parse_config(const std::string& text);

SimConfig load_config(const std::string& path);

} // namespace repsim::sim
