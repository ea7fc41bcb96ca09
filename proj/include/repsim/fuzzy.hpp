#pragma once

#include <optional>

#include "repsim/types.hpp"

namespace repsim::fuzzy {

/** Linguistic grade. Order matters: a is best, d is worst. */
enum class Grade : int { A = 0, B = 1, C = 2, D = 3 };

/** Crisp partition of a closed domain into four half-open grade intervals (top one closed). */
struct GradeBounds {
    double lo;
    double b1;
    double b2;
    double b3;
    double hi;
};

/** Maps a crisp value to its grade. Errors if value lies outside [lo, hi]. */
Grade fuzzify(double value, const GradeBounds& bounds);

GradeBounds quarter_bounds();                     // 0 / .25 / .50 / .75 / 1
GradeBounds comparative_bounds(int phi_size);     // 0 / f/4 / f/2 / 3f/4 / 1, f = 2n/(2n+1)
GradeBounds link_correctness_bounds();            // 0 / .50 / .65 / .85 / 1
GradeBounds path_fraction_bounds(int hop_limit);  // 1/H / (1+3/H)/4 / (1+1/H)/2 / (3+1/H)/4 / 1

/** Top fraction of the comparative-reputation domain: 2n/(2n+1). */
double comparative_fraction(int phi_size);

// rule lookups, one per inference stage
Grade route_quality(Grade expectation, Grade comparative);     // rho1
Grade combined_quality(Grade rho1, Grade correctness);         // rho2
Grade answer_quality(Grade rho2, Grade path_fraction);         // RAQ

/** Defuzzified multiplier: midpoint of the grade's quarter, {0.125, 0.375, 0.625, 0.875}. */
double kappa(Grade g);

/** How a negative score reacts to the multiplicative penalty. */
enum class PenaltyMode {
    Literal,    // new = old * kappa; negative scores decay toward zero
    Magnitude,  // negative scores divide by kappa instead, floored at -phi_size
};

/** Link-correctness score: 1 - (1 - x2/(x1+1)) * (1 - x1/(y+1)). Requires 0 <= x2 <= x1 <= y. */
double correctness_link(int x2, int x1, int y);

/** Delay-correctness score: elapsed / ((m-1)*tau + 3*tau_prime), clamped to [0, 1]. */
double correctness_delay(double elapsed, int queue_size, double tau, double tau_prime);

/** Fraction of the path already traversed: q/p. Requires 1 <= q <= p. */
double path_fraction(int q, int p);

/** Crisp inputs for one penalty decision. path_fraction absent selects the delay variant (RAQ = rho2). */
struct ApdInputs {
    double comparative;
    double expectation;
    double correctness;
    std::optional<double> path_fraction;
};

struct ApdBreakdown {
    Grade comparative;
    Grade expectation;
    Grade correctness;
    std::optional<Grade> path_fraction;
    Grade rho1;
    Grade rho2;
    Grade answer;      // RAQ
    double kappa;
    double new_score;
};

/**
 * Adaptive penalty: grades the inputs, walks the three rule stages and scales
 * the old score by kappa(RAQ). Once suspicion_count reaches the limit the
 * score collapses to -phi_size instead.
 */
ApdBreakdown apd_update(double old_score, const ApdInputs& in, int phi_size, int hop_limit,
                        int suspicion_count, int suspicion_limit,
                        PenaltyMode mode = PenaltyMode::Literal);

const char* grade_name(Grade g);

} // namespace repsim::fuzzy
