#pragma once

#include <optional>
#include <vector>

#include "repsim/types.hpp"

namespace repsim::metrics {

/** Attacker-vs-honest payoff comparison for one deviation game. */
struct PropositionReport {
    double honest_gain = 0.0;      // payoff for reporting the attack
    double dishonest_gain = 0.0;   // payoff for going along with it
    double margin = 0.0;           // honest_gain - dishonest_gain
    double closed_margin = 0.0;    // the closed-form expression for the same margin
};

/**
 * Payoffs for a bystander asked to back a fabricated link-break story:
 * honest = psi1*(psi2*alpha^2*(n-2) + (1-psi2)*alpha^2), dishonest = psi1*alpha^2,
 * margin closed form psi1*psi2*alpha^2*(n-3).
 */
PropositionReport link_break_gains(double psi1, double psi2, double alpha, int phi_size);

/**
 * Payoffs for a node receiving a collusion request: honest = alpha^2*(n-2),
 * dishonest = alpha^2, margin closed form alpha^2*(n-3).
 */
PropositionReport collusion_gains(double alpha, int phi_size);

/** Energy ceiling one silent attacker can waste before it is starved: H*M*sigma*(n-1). */
double damage_bound(int hop_limit, int suspicion_limit, double sigma, int phi_size);

/** Raw per-node tallies produced by one simulation run. */
struct NodeTally {
    bool malicious = false;
    double standing = 0.0;        // final score summed over every other node's ledger
    double rep_lost = 0.0;        // attack-attributed downward score moves, summed over observers
    double energy_spent = 0.0;
    double energy_wasted = 0.0;   // share of energy_spent serving attack-attributed traffic
    bool acted = false;           // performed at least one attack action
    bool detected = false;        // condemned network-wide by a verified allegation
};

struct RunTallies {
    std::vector<NodeTally> nodes;
    int64_t allegations = 0;
    int64_t local_blacklists = 0;    // locally blacklisted (observer, subject) pairs
    int64_t network_blacklists = 0;  // subjects condemned network-wide
    int64_t generated = 0;
    int64_t delivered = 0;
    int64_t events = 0;
    uint64_t trace_hash = 0;
};

struct RunMetrics {
    int malicious_count = 0;
    double rep_efficiency = 0.0;       // mean selfish standing
    double dmg_selfish = 0.0;          // mean attack damage per selfish node: reputation lost plus wasted energy
    double dmg_malicious = 0.0;        // mean attack damage per malicious node, same blend
    double dmg_selfish_energy = 0.0;   // mean wasted energy per selfish node
    double dmg_malicious_energy = 0.0; // mean wasted energy per malicious node
    std::optional<double> detection_rate_pct;   // blank when no malicious node acted
    std::optional<double> undetected_pct;       // complement of the detection rate
};

RunMetrics compute_metrics(const RunTallies& t);

/** Arithmetic mean of per-run metrics; detection fields average only defined entries. */
RunMetrics aggregate_metrics(const std::vector<RunMetrics>& runs);

/** Spearman rank correlation with average ranks for ties. */
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace repsim::metrics
