#ifndef BLOCKPROJ_RNG_HPP
#define BLOCKPROJ_RNG_HPP

#include <cstdint>

namespace blockproj {

// Seeded generator used everywhere randomness is needed.
//
// Generator: xoshiro256** 1.0 (Blackman/Vigna), state initialized from the
// seed with four successive splitmix64 outputs.  This is "blockproj rng v1";
// the stream layout is part of the output contract, since every published
// number must be reproducible from (seed, trial index) alone.
//
// Stream-split rule (v1): the child stream for index i is seeded with
//   child_seed = splitmix64(master_seed + (i + 1) * 0x9E3779B97F4A7C15)
// so worker threads can derive trial i's stream without sharing state.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform value in [0, bound) by rejection from the 64-bit word stream.
    std::uint64_t uniform_below(std::uint64_t bound);

    /// Child generator for trial/worker index i (see stream-split rule).
    Rng child(std::uint64_t index) const;

    static constexpr const char* name = "blockproj-xoshiro256starstar-v1";

private:
    std::uint64_t s_[4];
    std::uint64_t seed_;
};

} // namespace blockproj

#endif
