#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace repsim {

using NodeId = int32_t;
using MsgId = int64_t;
using Clock = double;   // simulated seconds

constexpr NodeId NO_NODE = -1;

/** Thrown on contract violations: bad config values, out-of-range inputs, unknown subjects. */
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double dist(const Vec2& a, const Vec2& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    // hypot is slower and the extra range is never needed inside a bounded arena
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace repsim
