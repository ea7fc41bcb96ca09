#pragma once

#include <cstdint>

#include "repsim/types.hpp"

namespace repsim::net {

/**
 * The six announced node attributes, pre-quantized to their wire units
 * (meters, meters/second, whole seconds). Packs into 53 bits.
 */
struct AttributeBlock {
    int node_id = 0;      // 13 bits, must stay below 5000
    int lat = 0;          // 11 bits, meters, at most 2000
    int lon = 0;          // 10 bits, meters, at most 1000
    int radio = 0;        //  8 bits, meters, at most 250
    int velocity = 0;     //  6 bits, meters/second, at most 50
    int hello_code = 0;   //  5 bits, hello interval in seconds, below 30

    bool operator==(const AttributeBlock&) const = default;
};

constexpr int ATTRIBUTE_BITS = 53;

/** Packs the block big-endian (node_id in the most significant bits). Errors on out-of-range fields. */
uint64_t encode_attributes(const AttributeBlock& a);

/** Inverse of encode_attributes. Errors if bits above the 53rd are set. */
AttributeBlock decode_attributes(uint64_t bits);

} // namespace repsim::net
