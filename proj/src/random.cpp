#include "mpir/random.hpp"

#include "mpir/errors.hpp"

#include <algorithm>
#include <numeric>

namespace mpir {

std::uint64_t Rng::uniform(std::uint64_t bound)
{
    if (bound == 0) {
        throw ParameterError("uniform draw with empty range");
    }
    // reject the top partial block so every residue is equally likely
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

mpz_class Rng::uniform(const mpz_class& bound)
{
    if (bound <= 0) {
        throw ParameterError("uniform draw with empty range");
    }
    if (bound.fits_ulong_p()) {
        return mpz_class(static_cast<unsigned long>(uniform(std::uint64_t{bound.get_ui()})));
    }
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    const std::size_t spare = words * 64 - bits;
    std::vector<std::uint64_t> buf(words);
    mpz_class x;
    do {
        for (auto& w : buf) {
            w = engine_();
        }
        buf.back() >>= spare; // most significant word, order=-1 below
        mpz_import(x.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
    } while (x >= bound);
    return x;
}

std::vector<std::uint32_t> Rng::permutation(std::uint32_t n)
{
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0u);
    for (std::uint32_t i = n; i > 1; --i) {
        std::swap(p[i - 1], p[uniform(i)]);
    }
    return p;
}

std::vector<std::uint32_t> Rng::subset(std::uint32_t n, std::uint32_t k)
{
    if (k > n) {
        throw ParameterError("subset size " + std::to_string(k) + " exceeds " + std::to_string(n));
    }
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0u);
    for (std::uint32_t i = 0; i < k; ++i) {
        std::swap(p[i], p[i + uniform(n - i)]);
    }
    p.resize(k);
    std::sort(p.begin(), p.end());
    return p;
}

Seed derive_seed(Seed master, std::uint64_t index)
{
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace mpir
