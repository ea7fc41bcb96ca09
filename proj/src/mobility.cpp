#include "repsim/mobility.hpp"

#include <algorithm>
#include <cmath>

namespace repsim::net {

WaypointState init_waypoint(Rng& rng, const Arena& a) {
    WaypointState w;
    w.pos = {rng.uniform(0.0, a.width), rng.uniform(0.0, a.height)};
    if (a.v_max <= 0.0) {
        w.target = w.pos;
        w.speed = 0.0;
        return w;
    }
    w.target = {rng.uniform(0.0, a.width), rng.uniform(0.0, a.height)};
    w.speed = rng.uniform_pos(0.0, a.v_max);
    return w;
}

void step_waypoint(WaypointState& w, double dt, Rng& rng, const Arena& a) {
    if (a.v_max <= 0.0) return;
    if (w.pause_remaining > 0.0) {
        w.pause_remaining = std::max(0.0, w.pause_remaining - dt);
        return;
    }
    const double dx = w.target.x - w.pos.x;
    const double dy = w.target.y - w.pos.y;
    const double d = std::sqrt(dx * dx + dy * dy);
    const double travel = w.speed * dt;
    if (travel < d) {
        w.pos.x += dx / d * travel;
        w.pos.y += dy / d * travel;
        return;
    }
    w.pos = w.target;
    w.pause_remaining = rng.uniform(0.0, a.pause_max);
    w.target = {rng.uniform(0.0, a.width), rng.uniform(0.0, a.height)};
    w.speed = rng.uniform_pos(0.0, a.v_max);
}

} // namespace repsim::net
