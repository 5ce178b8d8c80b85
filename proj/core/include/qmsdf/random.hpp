// random.hpp: seeded, platform-independent random draws
//
// Every randomized step in the pipeline takes an Rng by reference so that a
// report is a deterministic function of (input, seed).

#pragma once

#include <cstdint>
#include <random>

#include "qmsdf/linalg.hpp"

namespace qmsdf {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

class Rng {
public:
    explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // Uniform in [0, 1). Built from raw engine bits, not <random> distributions,
    // whose output is implementation-defined.
    double uniform();
    // Uniform in [-1, 1).
    double symmetric() { return 2.0 * uniform() - 1.0; }
    double normal();
    Complex complex_normal();

    Matrix ginibre(Index rows, Index cols);
    Matrix hermitian(Index d);
    Matrix unitary(Index d);
    Matrix density(Index d);
    Vector unit_vector(Index d);

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace qmsdf
