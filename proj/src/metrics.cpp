#include "repsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace repsim::metrics {

namespace {

void check_game_inputs(double alpha, int phi_size) {
    if (phi_size <= 3) throw Error("payoff analysis needs a network larger than 3");
    if (!(alpha > 1.0)) throw Error("payoff analysis needs alpha above 1");
}

} // namespace

PropositionReport link_break_gains(double psi1, double psi2, double alpha, int phi_size) {
    check_game_inputs(alpha, phi_size);
    if (psi1 < 0.0 || psi1 > 1.0 || psi2 < 0.0 || psi2 > 1.0) {
        throw Error("probabilities psi1/psi2 must lie in [0, 1]");
    }
    const double a2 = alpha * alpha;
    const double n = static_cast<double>(phi_size);
    PropositionReport r;
    r.honest_gain = psi1 * (psi2 * a2 * (n - 2.0) + (1.0 - psi2) * a2);
    r.dishonest_gain = psi1 * a2;
    r.margin = r.honest_gain - r.dishonest_gain;
    r.closed_margin = psi1 * psi2 * a2 * (n - 3.0);
    return r;
}

PropositionReport collusion_gains(double alpha, int phi_size) {
    check_game_inputs(alpha, phi_size);
    const double a2 = alpha * alpha;
    const double n = static_cast<double>(phi_size);
    PropositionReport r;
    r.honest_gain = a2 * (n - 2.0);
    r.dishonest_gain = a2;
    r.margin = r.honest_gain - r.dishonest_gain;
    r.closed_margin = a2 * (n - 3.0);
    return r;
}

double damage_bound(int hop_limit, int suspicion_limit, double sigma, int phi_size) {
    if (hop_limit < 1 || suspicion_limit < 1) throw Error("damage_bound: limits must be positive");
    if (sigma <= 0.0) throw Error("damage_bound: sigma must be positive");
    if (phi_size < 2) throw Error("damage_bound: need at least two nodes");
    return hop_limit * suspicion_limit * sigma * (phi_size - 1.0);
}

RunMetrics compute_metrics(const RunTallies& t) {
    RunMetrics m;
    int selfish = 0;
    int malicious = 0;
    int acted = 0;
    int detected = 0;
    for (const NodeTally& n : t.nodes) {
        if (n.malicious) {
            ++malicious;
            m.dmg_malicious += n.rep_lost + n.energy_wasted;
            m.dmg_malicious_energy += n.energy_wasted;
            if (n.acted) ++acted;
            if (n.detected && n.acted) ++detected;
        } else {
            ++selfish;
            m.rep_efficiency += n.standing;
            m.dmg_selfish += n.rep_lost + n.energy_wasted;
            m.dmg_selfish_energy += n.energy_wasted;
        }
    }
    m.malicious_count = malicious;
    if (selfish > 0) {
        m.rep_efficiency /= selfish;
        m.dmg_selfish /= selfish;
        m.dmg_selfish_energy /= selfish;
    }
    if (malicious > 0) {
        m.dmg_malicious /= malicious;
        m.dmg_malicious_energy /= malicious;
    }
    if (acted > 0) {
        m.detection_rate_pct = 100.0 * detected / acted;
        m.undetected_pct = 100.0 - *m.detection_rate_pct;
    }
    return m;
}

RunMetrics aggregate_metrics(const std::vector<RunMetrics>& runs) {
    if (runs.empty()) throw Error("aggregate_metrics: no runs");
    RunMetrics agg;
    agg.malicious_count = runs.front().malicious_count;
    int detected_defined = 0;
    double det_sum = 0.0;
    for (const RunMetrics& r : runs) {
        agg.rep_efficiency += r.rep_efficiency;
        agg.dmg_selfish += r.dmg_selfish;
        agg.dmg_malicious += r.dmg_malicious;
        agg.dmg_selfish_energy += r.dmg_selfish_energy;
        agg.dmg_malicious_energy += r.dmg_malicious_energy;
        if (r.detection_rate_pct) {
            ++detected_defined;
            det_sum += *r.detection_rate_pct;
        }
    }
    const double n = static_cast<double>(runs.size());
    agg.rep_efficiency /= n;
    agg.dmg_selfish /= n;
    agg.dmg_malicious /= n;
    agg.dmg_selfish_energy /= n;
    agg.dmg_malicious_energy /= n;
    if (detected_defined > 0) {
        agg.detection_rate_pct = det_sum / detected_defined;
        agg.undetected_pct = 100.0 - *agg.detection_rate_pct;
    }
    return agg;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

} // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw Error("spearman: need two equal-length series");
    const std::vector<double> rx = average_ranks(xs);
    const std::vector<double> ry = average_ranks(ys);
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double num = 0.0, dx = 0.0, dy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    if (dx == 0.0 || dy == 0.0) return 0.0;
    return num / std::sqrt(dx * dy);
}

} // namespace repsim::metrics
