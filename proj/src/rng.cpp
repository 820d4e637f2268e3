#include "modal/rng.hpp"

namespace modal {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

SeedSpec SeedSpec::substream(std::uint64_t id) const
{
    return SeedSpec{seed, splitmix64(stream ^ splitmix64(id + 1))};
}

Engine make_engine(const SeedSpec& spec)
{
    const std::uint64_t a = splitmix64(spec.seed);
    const std::uint64_t b = splitmix64(a ^ spec.stream);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Engine(seq);
}

} // namespace modal
