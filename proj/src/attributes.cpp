#include "repsim/attributes.hpp"

namespace repsim::net {

namespace {

struct Field {
    const char* name;
    int width;
    int max_exclusive;
};

// big-endian packing order
constexpr Field FIELDS[6] = {
    {"node_id", 13, 5000},
    {"lat", 11, 2001},
    {"lon", 10, 1001},
    {"radio", 8, 251},
    {"velocity", 6, 51},
    {"hello_code", 5, 30},
};

void check(const Field& f, int v) {
    if (v < 0 || v >= f.max_exclusive) {
        throw Error(std::string("attribute ") + f.name + " out of range: " + std::to_string(v));
    }
}

} // namespace

uint64_t encode_attributes(const AttributeBlock& a) {
    const int values[6] = {a.node_id, a.lat, a.lon, a.radio, a.velocity, a.hello_code};
    uint64_t bits = 0;
    for (int i = 0; i < 6; ++i) {
        check(FIELDS[i], values[i]);
        bits = (bits << FIELDS[i].width) | static_cast<uint64_t>(values[i]);
    }
    return bits;
}

AttributeBlock decode_attributes(uint64_t bits) {
    if (bits >> ATTRIBUTE_BITS) {
        throw Error("attribute block has bits above position 53");
    }
    int values[6];
    for (int i = 5; i >= 0; --i) {
        values[i] = static_cast<int>(bits & ((1ULL << FIELDS[i].width) - 1));
        bits >>= FIELDS[i].width;
    }
    AttributeBlock a{values[0], values[1], values[2], values[3], values[4], values[5]};
    for (int i = 0; i < 6; ++i) check(FIELDS[i], values[i]);
    return a;
}

} // namespace repsim::net
