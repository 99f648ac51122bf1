#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <gmpxx.h>

namespace mpir {

using Seed = std::uint64_t;

/// Deterministic random stream. Bounded draws are implemented here rather than
/// with std::uniform_int_distribution so a seed reproduces the same stream on
/// every standard library.
class Rng {
public:
    explicit Rng(Seed seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound); bound must be positive.
    std::uint64_t uniform(std::uint64_t bound);

    /// Uniform in [0, bound) for arbitrary-precision bound > 0.
    mpz_class uniform(const mpz_class& bound);

    /// Uniform random permutation of {0, ..., n-1} (Fisher-Yates).
    std::vector<std::uint32_t> permutation(std::uint32_t n);

    /// Uniform k-subset of {0, ..., n-1}, returned ascending.
    std::vector<std::uint32_t> subset(std::uint32_t n, std::uint32_t k);

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer over (master, index): per-trial seeds.
Seed derive_seed(Seed master, std::uint64_t index);

} // namespace mpir
