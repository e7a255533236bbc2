#include "monosig/linear_program.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "monosig/errors.hpp"

namespace monosig {

namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kCostEps = 1e-11;

double residual_of(const Eigen::MatrixXd& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b)
{
    if (b.size() == 0)
        return 0.0;
    return (A * x - b).cwiseAbs().maxCoeff();
}

} // namespace

FeasibilityResult simplex_feasibility(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                      double tol)
{
    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    if (b.size() != m)
        throw InvalidInput("simplex_feasibility: dimension mismatch");

    FeasibilityResult result;
    if (m == 0) {
        result.feasible = true;
        result.x = Eigen::VectorXd::Zero(n);
        return result;
    }

    // Tableau columns: [x (n) | artificial (m) | rhs]; last row holds reduced costs.
    const Eigen::Index cols = n + m;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, cols + 1);
    std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        const double sign = b(i) < 0.0 ? -1.0 : 1.0;
        T.row(i).head(n) = sign * A.row(i);
        T(i, n + i) = 1.0;
        T(i, cols) = sign * b(i);
        basis[static_cast<std::size_t>(i)] = n + i;
    }
    for (Eigen::Index j = 0; j < n; ++j)
        T(m, j) = -T.col(j).head(m).sum();
    T(m, cols) = -T.col(cols).head(m).sum();

    const Eigen::Index max_iter = 50 * (cols + 1);
    for (Eigen::Index iter = 0; iter < max_iter; ++iter) {
        Eigen::Index enter = -1;
        for (Eigen::Index j = 0; j < cols; ++j) {
            if (T(m, j) < -kCostEps) {
                enter = j;
                break;
            }
        }
        if (enter < 0)
            break;

        Eigen::Index leave = -1;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < m; ++i) {
            if (T(i, enter) <= kPivotEps)
                continue;
            const double ratio = T(i, cols) / T(i, enter);
            if (ratio < best - 1e-15 ||
                (std::abs(ratio - best) <= 1e-15 && leave >= 0 &&
                 basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
                best = ratio;
                leave = i;
            }
        }
        if (leave < 0)
            break;  // unbounded direction; cannot happen for a phase-one problem

        T.row(leave) /= T(leave, enter);
        for (Eigen::Index i = 0; i <= m; ++i) {
            if (i != leave && T(i, enter) != 0.0)
                T.row(i) -= T(i, enter) * T.row(leave);
        }
        basis[static_cast<std::size_t>(leave)] = enter;
    }

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto j = basis[static_cast<std::size_t>(i)];
        if (j < n)
            x(j) = std::max(0.0, T(i, cols));
    }
    result.residual = residual_of(A, x, b);
    result.feasible = result.residual <= tol;
    if (result.feasible)
        result.x = std::move(x);
    return result;
}

FeasibilityResult basis_enumeration_feasibility(const Eigen::MatrixXd& A,
                                                const Eigen::VectorXd& b, double tol)
{
    const Eigen::Index n = A.cols();
    if (n > 20)
        throw CapacityError("basis enumeration limited to 20 columns");

    FeasibilityResult result;
    result.residual = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
    if (result.residual <= tol) {
        result.feasible = true;
        result.x = Eigen::VectorXd::Zero(n);
        return result;
    }

    const std::uint32_t subsets = std::uint32_t{1} << n;
    const auto rank_cap = static_cast<int>(std::min<Eigen::Index>(n, A.rows()));
    for (int size = 1; size <= rank_cap; ++size) {
        for (std::uint32_t mask = 1; mask < subsets; ++mask) {
            if (std::popcount(mask) != size)
                continue;
            std::vector<Eigen::Index> idx;
            for (Eigen::Index j = 0; j < n; ++j)
                if (mask & (std::uint32_t{1} << j))
                    idx.push_back(j);
            Eigen::MatrixXd sub(A.rows(), size);
            for (int k = 0; k < size; ++k)
                sub.col(k) = A.col(idx[static_cast<std::size_t>(k)]);
            Eigen::VectorXd y = sub.colPivHouseholderQr().solve(b);
            if (!y.allFinite() || y.minCoeff() < -tol)
                continue;
            Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
            for (int k = 0; k < size; ++k)
                x(idx[static_cast<std::size_t>(k)]) = std::max(0.0, y(k));
            const double r = residual_of(A, x, b);
            if (r < result.residual)
                result.residual = r;
            if (r <= tol) {
                result.feasible = true;
                result.x = std::move(x);
                return result;
            }
        }
    }
    return result;
}

} // namespace monosig
