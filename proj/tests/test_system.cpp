#include <doctest.h>

#include "helpers.hpp"
#include "monosig/random.hpp"
#include "monosig/system.hpp"

using namespace monosig;

namespace {

const std::size_t A = 0, AB = 1, B = 2;

bool has_violation(const ValidationReport& r, const std::string& kind, std::size_t index)
{
    for (const auto& v : r.violations)
        if (v.kind == kind && v.index == index)
            return true;
    return false;
}

} // namespace

TEST_CASE("spin space rejects duplicate and empty labels")
{
    CHECK_THROWS_AS(SpinSpace({"A", "A"}), InvalidParameter);
    CHECK_THROWS_AS(SpinSpace({"A", ""}), InvalidParameter);
    const SpinSpace s({"A", "AB", "B"});
    CHECK(s.index_of("AB") == 1);
    CHECK_FALSE(s.find("C").has_value());
    CHECK_THROWS_AS(s.index_of("C"), InvalidParameter);
}

TEST_CASE("validate")
{
    SUBCASE("builders are valid")
    {
        for (const auto& s : testing::builder_systems())
            CHECK(validate(s).ok());
    }
    SUBCASE("broken column sum is reported at its column")
    {
        auto s = make_long();
        s.gA(0, 0) = 0.9;  // column sums (0.9, 1, 1)
        const auto r = validate(s);
        REQUIRE_FALSE(r.ok());
        CHECK(has_violation(r, "gA-column", 0));
        CHECK(r.violations.size() == 1);
        CHECK(r.violations[0].residual == doctest::Approx(0.1));
        CHECK_THROWS_AS(require_valid(s), InvalidInput);
    }
    SUBCASE("alpha out of range")
    {
        auto s = make_long();
        s.alpha << 1.2, 0, 0;
        const auto r = validate(s);
        CHECK(has_violation(r, "alpha", 0));
    }
    SUBCASE("entries outside [0, 1] are reported even when columns sum to one")
    {
        auto s = make_long();
        s.gB.col(0) << 1.5, -0.5, 0.0;
        const auto r = validate(s);
        CHECK(has_violation(r, "gB-entry", 0));
    }
    SUBCASE("committed state with a non-identity column")
    {
        auto s = with_committed(make_long(), {{"A", 1.0}});
        s.gB.col(3) << 0.5, 0, 0, 0.5;
        CHECK(has_violation(validate(s), "committed", 3));
    }
    SUBCASE("shape mismatch")
    {
        auto s = make_long();
        s.gA = Eigen::MatrixXd::Identity(2, 2);
        CHECK(has_violation(validate(s), "dimension", 0));
    }
}

TEST_CASE("make_long")
{
    const auto s = make_long();
    CHECK(s.spins.labels() == std::vector<std::string>{"A", "AB", "B"});
    CHECK(s.alpha.isApprox(Eigen::Vector3d(1.0, 0.5, 0.0)));
    CHECK(s.gA.col(AB) == pure_state(3, A));
    CHECK(s.gA.col(A) == pure_state(3, A));
    CHECK(s.gA.col(B) == pure_state(3, AB));
    CHECK(s.gB.col(A) == pure_state(3, AB));
    CHECK(s.gB.col(AB) == pure_state(3, B));
    CHECK(s.gB.col(B) == pure_state(3, B));
    CHECK(s.committed.empty());
}

TEST_CASE("make_kng")
{
    SUBCASE("K = 2 is LO-NG with states reversed")
    {
        // LO-NG (A, AB, B) corresponds to K-NG states (2, 1, 0).
        const auto lo = testing::permute(make_kng(2), {2, 1, 0});
        const auto ref = make_long();
        CHECK(lo.alpha.isApprox(ref.alpha));
        CHECK(lo.gA == ref.gA);
        CHECK(lo.gB == ref.gB);
    }
    SUBCASE("K = 3 alpha")
    {
        const auto s = make_kng(3);
        CHECK(s.alpha.isApprox(Eigen::Vector4d(0.0, 1.0 / 3, 2.0 / 3, 1.0)));
        CHECK(s.spins.labels() == std::vector<std::string>{"0", "1", "2", "3"});
    }
    SUBCASE("K = 1 boundary")
    {
        const auto s = make_kng(1);
        CHECK(s.size() == 2);
        CHECK(s.gA.col(0) == pure_state(2, 1));
        CHECK(s.gB.col(1) == pure_state(2, 0));
        CHECK(s.gA.col(1) == pure_state(2, 1));
        CHECK(s.gB.col(0) == pure_state(2, 0));
    }
    SUBCASE("shifts saturate at the ends")
    {
        const auto s = make_kng(5);
        for (std::size_t k = 0; k <= 5; ++k) {
            CHECK(s.gA.col(static_cast<Eigen::Index>(k)) == pure_state(6, std::min<std::size_t>(k + 1, 5)));
            CHECK(s.gB.col(static_cast<Eigen::Index>(k)) == pure_state(6, k == 0 ? 0 : k - 1));
        }
    }
    CHECK_THROWS_AS(make_kng(0), InvalidParameter);
    CHECK_THROWS_AS(make_kng(-3), InvalidParameter);
}

TEST_CASE("make_counterexample")
{
    const auto s = make_counterexample();
    const auto lo = make_long();
    CHECK(s.gB.col(A) == pure_state(3, B));
    CHECK(s.gB.col(AB) == pure_state(3, AB));
    CHECK(s.gB.col(B) == pure_state(3, B));
    CHECK(s.gA == lo.gA);
    CHECK(s.alpha == lo.alpha);
}

TEST_CASE("with_committed")
{
    const auto base = make_long();
    SUBCASE("two committed states")
    {
        const auto s = with_committed(base, {{"A", 1.0}, {"B", 0.0}});
        CHECK(s.size() == 5);
        Eigen::VectorXd alpha(5);
        alpha << 1, 0.5, 0, 1, 0;
        CHECK(s.alpha.isApprox(alpha));
        CHECK(s.spins.label(3) == "C_A");
        CHECK(s.spins.label(4) == "C_B");
        CHECK(s.gA.col(3) == pure_state(5, 3));
        CHECK(s.gB.col(3) == pure_state(5, 3));
        // nothing flows into committed states
        CHECK(s.gA.row(3).head(3).isZero());
        CHECK(s.gB.row(4).head(3).isZero());
        CHECK(s.committed == std::vector<std::size_t>{3, 4});
        CHECK(s.is_committed(4));
        CHECK_FALSE(s.is_committed(0));
        CHECK(validate(s).ok());
    }
    SUBCASE("no committed entries leaves the system unchanged")
    {
        const auto s = with_committed(base, {});
        CHECK(s.spins == base.spins);
        CHECK(s.gA == base.gA);
        CHECK(s.gB == base.gB);
        CHECK(s.alpha == base.alpha);
    }
    SUBCASE("every builder stays stochastic")
    {
        for (const auto& sys : testing::builder_systems()) {
            const auto s = with_committed(sys, {{sys.spins.label(1), 0.25}});
            CHECK(s.size() == sys.size() + 1);
            CHECK(validate(s).ok());
        }
    }
    CHECK_THROWS_AS(with_committed(base, {{"C", 1.0}}), InvalidParameter);
    CHECK_THROWS_AS(with_committed(base, {{"A", 1.5}}), InvalidParameter);
}

TEST_CASE("macrostate checks")
{
    CHECK(is_macrostate(Eigen::Vector3d(0.6, 0.0, 0.4)));
    CHECK_FALSE(is_macrostate(Eigen::Vector3d(0.6, 0.1, 0.4)));
    CHECK_FALSE(is_macrostate(Eigen::Vector3d(1.1, -0.1, 0.0)));
    CHECK(is_macrostate(Eigen::Vector3d(0.6, 0.0, 0.4 + 5e-11)));
    CHECK_THROWS_AS(require_macrostate(Eigen::Vector3d(0.5, 0.0, 0.4)), InvalidInput);
}

TEST_CASE("link indexing")
{
    const std::size_t K = 3;
    CHECK(link_count(K) == 6);
    CHECK(link_index(K, 0, 0) == 0);
    CHECK(link_index(K, 0, 2) == 2);
    CHECK(link_index(K, 2, 0) == 2);
    CHECK(link_index(K, 1, 1) == 3);
    CHECK(link_index(K, 2, 2) == 5);
    for (std::size_t l = 0; l < link_count(K); ++l) {
        const auto [i, j] = link_pair(K, l);
        CHECK(i <= j);
        CHECK(link_index(K, i, j) == l);
    }
    CHECK(spin_count_for_links(6) == 3);
    CHECK(spin_count_for_links(21) == 6);
    CHECK_THROWS_AS(spin_count_for_links(7), InvalidInput);
    CHECK(link_labels(make_long().spins) ==
          std::vector<std::string>{"A-A", "A-AB", "A-B", "AB-AB", "AB-B", "B-B"});
}

TEST_CASE("pair matrix")
{
    SUBCASE("consensus link")
    {
        Eigen::VectorXd l = Eigen::VectorXd::Unit(6, link_index(3, A, A));
        const PairMatrix m = pair_matrix(l);
        Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(3, 3);
        expect(A, A) = 1.0;
        CHECK(m == expect);
        CHECK(node_marginal(m) == pure_state(3, A));
    }
    SUBCASE("mixed link is split in half")
    {
        Eigen::VectorXd l = Eigen::VectorXd::Unit(6, link_index(3, A, B));
        const PairMatrix m = pair_matrix(l);
        CHECK(m(A, B) == 0.5);
        CHECK(m(B, A) == 0.5);
        CHECK(m.sum() == doctest::Approx(1.0));
        CHECK(node_marginal(m).isApprox(Eigen::Vector3d(0.5, 0.0, 0.5)));
    }
    SUBCASE("round trip and marginals on random link states")
    {
        Rng rng(11);
        for (int t = 0; t < 100; ++t) {
            const Eigen::VectorXd l = sample_simplex(rng, 6);
            const PairMatrix m = pair_matrix(l);
            CHECK(m.isApprox(m.transpose()));
            CHECK((link_state(m) - l).cwiseAbs().maxCoeff() == 0.0);
            CHECK(node_marginal(m).sum() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(is_macrostate(node_marginal(m)));
        }
    }
    SUBCASE("product link state has the given marginal")
    {
        const Eigen::Vector3d n(0.6, 0.0, 0.4);
        const Eigen::VectorXd l = product_link_state(n);
        CHECK(l.sum() == doctest::Approx(1.0));
        CHECK(l(link_index(3, A, B)) == doctest::Approx(2 * 0.6 * 0.4));
        CHECK(node_marginal(pair_matrix(l)).isApprox(n));
    }
    CHECK_THROWS_AS(pair_matrix(Eigen::VectorXd::Ones(4) / 4), InvalidInput);
}
