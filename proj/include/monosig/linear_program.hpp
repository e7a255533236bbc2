#pragma once

#include <Eigen/Dense>

namespace monosig {

/// Outcome of a nonnegative-solution search for A x = b, x >= 0.
struct FeasibilityResult {
    bool feasible = false;
    Eigen::VectorXd x;        ///< certificate (empty when infeasible)
    double residual = 0.0;    ///< ||A x - b||_inf of the returned x, else the
                              ///< best residual the search reached
};

/// Two-phase dense simplex (Bland's rule) on the phase-one problem
///   min 1^T s  s.t.  A x + D s = b,  x, s >= 0,  D = diag(sign b).
/// Feasible iff a nonnegative x with ||A x - b||_inf <= tol is found.
FeasibilityResult simplex_feasibility(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                      double tol);

/// Carathéodory search: tries every column subset of A (at most 2^cols,
/// so keep cols small) and solves each restricted system by least squares.
/// Independent of the simplex path; used to cross-check it.
FeasibilityResult basis_enumeration_feasibility(const Eigen::MatrixXd& A,
                                                const Eigen::VectorXd& b, double tol);

} // namespace monosig
