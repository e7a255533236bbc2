#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <random>

namespace monosig {

/// SplitMix64 finaliser; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of stream `stream` derived from a master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Deterministic generator. Conversions to floating point and bounded
/// integers are done here rather than with <random> distributions, whose
/// output is implementation-defined, so streams match across toolchains.
class Rng {
public:
    static constexpr const char* algorithm = "mt19937_64 seeded via splitmix64";

    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    /// Standard exponential variate.
    double exponential();
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

/// Uniform point on the simplex (flat Dirichlet).
Eigen::VectorXd sample_simplex(Rng& rng, std::size_t K);

/// Flat Dirichlet sample shrunk affinely so that every component is at
/// least `min_component`.
Eigen::VectorXd sample_interior(Rng& rng, std::size_t K, double min_component);

} // namespace monosig
