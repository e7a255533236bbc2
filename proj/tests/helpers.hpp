#pragma once

#include <Eigen/Dense>

#include <vector>

#include "monosig/system.hpp"

namespace testing {

// Every builder output used by property tests.
inline std::vector<monosig::SignallingSystem> builder_systems()
{
    using namespace monosig;
    std::vector<SignallingSystem> out{make_long(), make_counterexample()};
    for (int K = 1; K <= 6; ++K)
        out.push_back(make_kng(K));
    out.push_back(with_committed(make_long(), {{"A", 1.0}, {"B", 0.0}}));
    return out;
}

// Relabels states: new index i holds old state perm[i].
inline monosig::SignallingSystem permute(const monosig::SignallingSystem& s,
                                         const std::vector<int>& perm)
{
    const auto K = static_cast<Eigen::Index>(perm.size());
    Eigen::PermutationMatrix<Eigen::Dynamic> P(K);
    for (Eigen::Index i = 0; i < K; ++i)
        P.indices()(perm[static_cast<std::size_t>(i)]) = static_cast<int>(i);
    monosig::SignallingSystem out = s;
    out.alpha = P * s.alpha;
    out.gA = P * s.gA * P.transpose();
    out.gB = P * s.gB * P.transpose();
    return out;
}

} // namespace testing
