#pragma once

#include <cstdint>
#include <random>

namespace modal {

//! Identifies one reproducible random stream: a run seed plus a per-replicate
//! substream id. Identical SeedSpecs produce identical draws.
struct SeedSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    SeedSpec substream(std::uint64_t id) const;
};

using Engine = std::mt19937_64;

//! Engine for a SeedSpec; distinct (seed, stream) pairs are decorrelated by
//! splitmix64 mixing before seeding.
Engine make_engine(const SeedSpec& spec);

std::uint64_t splitmix64(std::uint64_t x);

} // namespace modal
