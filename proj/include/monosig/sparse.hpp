#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "monosig/meanfield.hpp"
#include "monosig/ode.hpp"
#include "monosig/order.hpp"
#include "monosig/system.hpp"

namespace monosig {

// Pairwise approximation on a random network with mean degree <k>:
//
//   dl/dt = 2 [ (1/<k>) D~ + ((<k> - 1)/<k>) R~(l) ] l
//
// with generator-form operators D~ = D - I and R~(l) l' = R(l) l' - l'.
// D moves the selected link; R(l) moves the listener's other links and is
// defined through the pair matrix M(l) and a spin kernel W(l).

/// How a related link's listener endpoint is transformed in M.
enum class RelatedForm {
    TwoSided,  ///< M -> W M W^T
    OneSided,  ///< M -> (W M + M W^T) / 2, only the listener end moves
};

/// How the spin kernel W(l) is formed.
enum class KernelForm {
    /// Column j is the transition of a listener of spin j, averaged over its
    /// speaker's spin with weights M_js / n_j (identity if n_j = 0).
    ListenerConditional,
    /// sum_k l_k W_k, where W_k lets either endpoint of link type k listen
    /// with probability 1/2 and leaves spins that are not endpoints alone.
    LinkMixture,
};

const char* to_string(RelatedForm f);
const char* to_string(KernelForm f);

struct SparseModel {
    double mean_degree = 10.0;
    RelatedForm related = RelatedForm::OneSided;
    KernelForm kernel = KernelForm::ListenerConditional;
};

/// Listener transition column p_s G_A[:, j] + (1 - p_s) G_B[:, j] for a
/// listener of spin j hearing a speaker of spin s.
Eigen::VectorXd listener_transition(const SignallingSystem& system, std::size_t listener,
                                    std::size_t speaker);

struct DirectGenerator {
    Eigen::MatrixXd transition;  ///< D, column-stochastic, L x L

    Eigen::MatrixXd generator() const
    {
        return transition - Eigen::MatrixXd::Identity(transition.rows(), transition.cols());
    }
};

/// Link transition of the selected link; each endpoint listens with
/// probability 1/2.
DirectGenerator build_direct(const SignallingSystem& system);

/// K x K column-stochastic spin kernel W(l).
Eigen::MatrixXd related_kernel(const SignallingSystem& system,
                               const Eigen::Ref<const LinkMacrostate>& l,
                               KernelForm kernel = KernelForm::ListenerConditional);

/// R(l) l' in stochastic form (a link macrostate).
LinkMacrostate related_apply(const SignallingSystem& system,
                             const Eigen::Ref<const LinkMacrostate>& l,
                             const Eigen::Ref<const LinkMacrostate>& l_prime,
                             RelatedForm related = RelatedForm::OneSided,
                             KernelForm kernel = KernelForm::ListenerConditional);

/// M = u + v with u = n n^T (n the row sums) and v of zero row/column sums.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> decompose(const Eigen::Ref<const PairMatrix>& m);

/// Right-hand side of the link ODE; caches D~ across calls.
class SparseField {
public:
    SparseField(const SignallingSystem& system, const SparseModel& model);

    LinkMacrostate operator()(const Eigen::Ref<const LinkMacrostate>& l) const;

    const SignallingSystem& system() const { return system_; }
    const SparseModel& model() const { return model_; }

private:
    SignallingSystem system_;
    SparseModel model_;
    Eigen::MatrixXd direct_;  ///< D~
};

LinkMacrostate drift_sparse(const SignallingSystem& system, const SparseModel& model,
                            const Eigen::Ref<const LinkMacrostate>& l);

Trajectory integrate_sparse(const SignallingSystem& system, const SparseModel& model,
                            const LinkMacrostate& l0, double t_end,
                            const IntegrationOptions& options = {});

/// Node marginals of a link trajectory.
Trajectory node_marginals(const Trajectory& link_trajectory);

/// Order harness on link macrostates under the order induced by
/// `node_order` (see induced_link_order).
std::vector<OrderViolation> order_harness_sparse(const SignallingSystem& system,
                                                 const PartialOrder& node_order,
                                                 const SparseModel& model,
                                                 const HarnessOptions& options = {});

} // namespace monosig
