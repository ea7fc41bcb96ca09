#include "repsim/fuzzy.hpp"

#include <algorithm>
#include <cmath>

namespace repsim::fuzzy {

namespace {

constexpr Grade A = Grade::A;
constexpr Grade B = Grade::B;
constexpr Grade C = Grade::C;
constexpr Grade D = Grade::D;

// stage 1: row = expectation grade, column = comparative grade
constexpr Grade ROUTE_QUALITY[4][4] = {
    {B, B, A, A},
    {C, B, B, B},
    {D, C, C, C},
    {D, D, D, D},
};

// stage 2: row = rho1, column = correctness grade
constexpr Grade COMBINED_QUALITY[4][4] = {
    {A, B, B, C},
    {A, B, C, C},
    {A, B, C, D},
    {B, C, D, D},
};

// stage 3: row = rho2, column = path-fraction grade
constexpr Grade ANSWER_QUALITY[4][4] = {
    {B, A, A, A},
    {C, B, B, B},
    {D, C, C, C},
    {D, D, D, D},
};

int idx(Grade g) { return static_cast<int>(g); }

} // namespace

Grade fuzzify(double value, const GradeBounds& r) {
    if (!(value >= r.lo) || !(value <= r.hi)) {
        throw Error("fuzzify: value " + std::to_string(value) + " outside domain [" +
                    std::to_string(r.lo) + ", " + std::to_string(r.hi) + "]");
    }
    if (value < r.b1) return Grade::A;
    if (value < r.b2) return Grade::B;
    if (value < r.b3) return Grade::C;
    return Grade::D;   // [b3, hi], top interval closed
}

GradeBounds quarter_bounds() {
    return {0.0, 0.25, 0.50, 0.75, 1.00};
}

double comparative_fraction(int phi_size) {
    if (phi_size < 1) throw Error("comparative_fraction: network size must be positive");
    const double n = static_cast<double>(phi_size);
    return 2.0 * n / (2.0 * n + 1.0);
}

GradeBounds comparative_bounds(int phi_size) {
    const double f = comparative_fraction(phi_size);
    return {0.0, f / 4.0, f / 2.0, 3.0 * f / 4.0, 1.00};
}

GradeBounds link_correctness_bounds() {
    return {0.0, 0.50, 0.65, 0.85, 1.00};
}

GradeBounds path_fraction_bounds(int hop_limit) {
    if (hop_limit < 2) throw Error("path_fraction_bounds: hop limit must be at least 2");
    const double h = static_cast<double>(hop_limit);
    return {1.0 / h, (1.0 + 3.0 / h) / 4.0, (1.0 + 1.0 / h) / 2.0, (3.0 + 1.0 / h) / 4.0, 1.00};
}

Grade route_quality(Grade expectation, Grade comparative) {
    return ROUTE_QUALITY[idx(expectation)][idx(comparative)];
}

Grade combined_quality(Grade rho1, Grade correctness) {
    return COMBINED_QUALITY[idx(rho1)][idx(correctness)];
}

Grade answer_quality(Grade rho2, Grade path_fraction) {
    return ANSWER_QUALITY[idx(rho2)][idx(path_fraction)];
}

double kappa(Grade g) {
    return 0.125 + 0.25 * idx(g);
}

double correctness_link(int x2, int x1, int y) {
    if (y < 0 || x1 < 0 || x2 < 0 || x2 > x1 || x1 > y) {
        throw Error("correctness_link: need 0 <= x'' <= x' <= y");
    }
    const double a = 1.0 - static_cast<double>(x2) / (x1 + 1.0);
    const double b = 1.0 - static_cast<double>(x1) / (y + 1.0);
    return 1.0 - a * b;
}

double correctness_delay(double elapsed, int queue_size, double tau, double tau_prime) {
    // elapsed comes from a peer-reported forward time and may be forged either
    // way, so it clamps instead of erroring
    if (queue_size < 1) throw Error("correctness_delay: queue size must be positive");
    const double limit = (queue_size - 1) * tau + 3.0 * tau_prime;
    if (limit <= 0.0) throw Error("correctness_delay: nonpositive delay limit");
    return std::clamp(elapsed / limit, 0.0, 1.0);
}

double path_fraction(int q, int p) {
    if (q < 1 || p < q) throw Error("path_fraction: need 1 <= q <= p");
    return static_cast<double>(q) / static_cast<double>(p);
}

ApdBreakdown apd_update(double old_score, const ApdInputs& in, int phi_size, int hop_limit,
                        int suspicion_count, int suspicion_limit, PenaltyMode mode) {
    if (phi_size <= 3) throw Error("apd_update: network size must exceed 3");

    ApdBreakdown out{};
    out.comparative = fuzzify(in.comparative, comparative_bounds(phi_size));
    out.expectation = fuzzify(in.expectation, quarter_bounds());
    if (in.path_fraction) {
        out.correctness = fuzzify(in.correctness, link_correctness_bounds());
        out.path_fraction = fuzzify(*in.path_fraction, path_fraction_bounds(hop_limit));
    } else {
        out.correctness = fuzzify(in.correctness, quarter_bounds());
    }

    out.rho1 = route_quality(out.expectation, out.comparative);
    out.rho2 = combined_quality(out.rho1, out.correctness);
    out.answer = in.path_fraction ? answer_quality(out.rho2, *out.path_fraction) : out.rho2;
    out.kappa = kappa(out.answer);

    const double floor = -static_cast<double>(phi_size);
    if (suspicion_count >= suspicion_limit) {
        out.new_score = floor;
        return out;
    }
    if (old_score < 0.0 && mode == PenaltyMode::Magnitude) {
        out.new_score = std::max(floor, old_score / out.kappa);
    } else {
        out.new_score = old_score * out.kappa;
    }
    return out;
}

const char* grade_name(Grade g) {
    switch (g) {
        case Grade::A: return "a";
        case Grade::B: return "b";
        case Grade::C: return "c";
        default: return "d";
    }
}

} // namespace repsim::fuzzy
