#include "monosig/random.hpp"

#include <cmath>
#include <limits>

#include "monosig/errors.hpp"

namespace monosig {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
    return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

std::uint64_t Rng::below(std::uint64_t n)
{
    if (n == 0)
        throw InvalidParameter("Rng::below(0)");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % n;
}

double Rng::exponential() { return -std::log1p(-uniform()); }

Eigen::VectorXd sample_simplex(Rng& rng, std::size_t K)
{
    Eigen::VectorXd x(static_cast<Eigen::Index>(K));
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x(i) = rng.exponential();
    const double total = x.sum();
    if (total <= 0.0)
        return Eigen::VectorXd::Constant(x.size(), 1.0 / static_cast<double>(K));
    return x / total;
}

Eigen::VectorXd sample_interior(Rng& rng, std::size_t K, double min_component)
{
    const double floor_mass = min_component * static_cast<double>(K);
    if (floor_mass >= 1.0)
        throw InvalidParameter("sample_interior: minimum component too large for K");
    return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(K), min_component) +
           (1.0 - floor_mass) * sample_simplex(rng, K);
}

} // namespace monosig
