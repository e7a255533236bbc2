#include "monosig/sparse.hpp"

namespace monosig {

const char* to_string(RelatedForm f)
{
    return f == RelatedForm::TwoSided ? "two_sided" : "one_sided";
}

const char* to_string(KernelForm f)
{
    return f == KernelForm::ListenerConditional ? "conditional" : "mixture";
}

Eigen::VectorXd listener_transition(const SignallingSystem& system, std::size_t listener,
                                    std::size_t speaker)
{
    const double p = system.alpha(static_cast<Eigen::Index>(speaker));
    const auto j = static_cast<Eigen::Index>(listener);
    return p * system.gA.col(j) + (1.0 - p) * system.gB.col(j);
}

DirectGenerator build_direct(const SignallingSystem& system)
{
    require_valid(system);
    const auto K = system.size();
    const auto L = static_cast<Eigen::Index>(link_count(K));
    DirectGenerator out{Eigen::MatrixXd::Zero(L, L)};

    // Listener `a` hears speaker `b`; the link {a, b} becomes {i, b}.
    auto listen = [&](std::size_t col, std::size_t a, std::size_t b, double weight) {
        const Eigen::VectorXd t = listener_transition(system, a, b);
        for (std::size_t i = 0; i < K; ++i)
            out.transition(static_cast<Eigen::Index>(link_index(K, i, b)),
                           static_cast<Eigen::Index>(col)) += weight * t(static_cast<Eigen::Index>(i));
    };
    for (std::size_t col = 0; col < link_count(K); ++col) {
        const auto [a, b] = link_pair(K, col);
        if (a == b) {
            listen(col, a, a, 1.0);
        } else {
            listen(col, a, b, 0.5);
            listen(col, b, a, 0.5);
        }
    }
    return out;
}

Eigen::MatrixXd related_kernel(const SignallingSystem& system,
                               const Eigen::Ref<const LinkMacrostate>& l, KernelForm kernel)
{
    const auto K = system.size();
    if (static_cast<std::size_t>(l.size()) != link_count(K))
        throw InvalidInput("link macrostate has the wrong dimension");
    const auto k = static_cast<Eigen::Index>(K);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(k, k);

    if (kernel == KernelForm::ListenerConditional) {
        const PairMatrix m = pair_matrix(l);
        const Eigen::VectorXd n = m.rowwise().sum();
        for (std::size_t j = 0; j < K; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            if (n(jj) <= 0.0) {
                W(jj, jj) = 1.0;
                continue;
            }
            for (std::size_t s = 0; s < K; ++s) {
                const double w = m(jj, static_cast<Eigen::Index>(s)) / n(jj);
                if (w != 0.0)
                    W.col(jj) += w * listener_transition(system, j, s);
            }
            W.col(jj) /= W.col(jj).sum();
        }
        return W;
    }

    for (std::size_t link = 0; link < link_count(K); ++link) {
        const double weight = l(static_cast<Eigen::Index>(link));
        const auto [a, b] = link_pair(K, link);
        Eigen::MatrixXd Wk = Eigen::MatrixXd::Identity(k, k);
        const auto ia = static_cast<Eigen::Index>(a);
        const auto ib = static_cast<Eigen::Index>(b);
        if (a == b) {
            Wk.col(ia) = listener_transition(system, a, a);
        } else {
            Wk.col(ia) = 0.5 * listener_transition(system, a, b) + 0.5 * pure_state(K, a);
            Wk.col(ib) = 0.5 * listener_transition(system, b, a) + 0.5 * pure_state(K, b);
        }
        W += weight * Wk;
    }
    return W;
}

LinkMacrostate related_apply(const SignallingSystem& system,
                             const Eigen::Ref<const LinkMacrostate>& l,
                             const Eigen::Ref<const LinkMacrostate>& l_prime,
                             RelatedForm related, KernelForm kernel)
{
    const Eigen::MatrixXd W = related_kernel(system, l, kernel);
    const PairMatrix m = pair_matrix(l_prime);
    if (related == RelatedForm::TwoSided)
        return link_state(W * m * W.transpose());
    return link_state(0.5 * (W * m + m * W.transpose()));
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> decompose(const Eigen::Ref<const PairMatrix>& m)
{
    const Eigen::VectorXd n = m.rowwise().sum();
    Eigen::MatrixXd u = n * n.transpose();
    Eigen::MatrixXd v = m - u;
    return {std::move(u), std::move(v)};
}

SparseField::SparseField(const SignallingSystem& system, const SparseModel& model)
    : system_(system), model_(model), direct_(build_direct(system).generator())
{
    if (!(model.mean_degree > 1.0))
        throw InvalidParameter("mean degree must exceed 1");
}

LinkMacrostate SparseField::operator()(const Eigen::Ref<const LinkMacrostate>& l) const
{
    const double k = model_.mean_degree;
    const LinkMacrostate related =
        related_apply(system_, l, l, model_.related, model_.kernel) - l;
    return 2.0 * ((1.0 / k) * (direct_ * l) + ((k - 1.0) / k) * related);
}

LinkMacrostate drift_sparse(const SignallingSystem& system, const SparseModel& model,
                            const Eigen::Ref<const LinkMacrostate>& l)
{
    return SparseField(system, model)(l);
}

Trajectory integrate_sparse(const SignallingSystem& system, const SparseModel& model,
                            const LinkMacrostate& l0, double t_end,
                            const IntegrationOptions& options)
{
    if (static_cast<std::size_t>(l0.size()) != link_count(system.size()))
        throw InvalidInput("initial link macrostate has the wrong dimension");
    require_macrostate(l0, "initial link macrostate");
    const SparseField field(system, model);
    return integrate_on_simplex([&](const Eigen::VectorXd& l) { return field(l); }, l0, t_end,
                                options);
}

Trajectory node_marginals(const Trajectory& link_trajectory)
{
    Trajectory out;
    out.times = link_trajectory.times;
    out.states.reserve(link_trajectory.states.size());
    for (const auto& l : link_trajectory.states)
        out.states.push_back(node_marginal(pair_matrix(l)));
    return out;
}

std::vector<OrderViolation> order_harness_sparse(const SignallingSystem& system,
                                                 const PartialOrder& node_order,
                                                 const SparseModel& model,
                                                 const HarnessOptions& options)
{
    require_valid(system);
    if (node_order.size() != system.size())
        throw InvalidInput("order and system sizes differ");
    if (options.checkpoints == 0)
        throw InvalidParameter("harness needs at least one checkpoint");
    const Cone cone = make_cone(induced_link_order(node_order), options.tol);
    const SparseField field(system, model);
    IntegrationOptions io;
    io.dt = options.dt;
    io.record_interval = options.t_end / static_cast<double>(options.checkpoints);
    return check_order_preservation(
        cone,
        [&](const Eigen::VectorXd& l0) {
            return integrate_on_simplex([&](const Eigen::VectorXd& l) { return field(l); }, l0,
                                        options.t_end, io);
        },
        options);
}

} // namespace monosig
