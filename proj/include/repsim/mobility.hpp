#pragma once

#include "repsim/rng.hpp"
#include "repsim/types.hpp"

namespace repsim::net {

/** Random-waypoint walker: heads to target at speed, pauses on arrival, repeats. */
struct WaypointState {
    Vec2 pos;
    Vec2 target;
    double speed = 0.0;            // m/s, in (0, v_max]
    double pause_remaining = 0.0;  // seconds left standing still
};

struct Arena {
    double width = 0.0;
    double height = 0.0;
    double v_max = 0.0;
    double pause_max = 0.0;
};

/** Uniform position, uniform target, speed in (0, v_max]. v_max of 0 pins the node in place. */
WaypointState init_waypoint(Rng& rng, const Arena& a);

/**
 * Advances dt seconds. Paused nodes burn pause time without moving; moving
 * nodes travel toward the target, and on arrival draw pause, then target,
 * then speed (leftover dt within the step is dropped).
 */
void step_waypoint(WaypointState& w, double dt, Rng& rng, const Arena& a);

} // namespace repsim::net
