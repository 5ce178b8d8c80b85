// Invariants checked on seeded random generators.

#include <gtest/gtest.h>

#include "../common/random_models.hpp"
#include "helpers.hpp"
#include "qmsdf/decoherence.hpp"
#include "qmsdf/dfspaces.hpp"
#include "qmsdf/states.hpp"
#include "qmsdf/structure.hpp"

namespace qmsdf {
namespace {

constexpr int kModels = 24;

class RandomModels : public ::testing::TestWithParam<int> {
protected:
    void SetUp() override
    {
        Rng rng(1000 + static_cast<std::uint64_t>(GetParam()));
        model_ = test::random_structured_model(rng);
    }

    test::RandomModel model_{GkslGenerator(Matrix::Zero(1, 1), {}), {}};
};

TEST_P(RandomModels, RecoversPrescribedBlocks)
{
    Rng rng(7);
    const StarAlgebra nt = decoherence_free_subalgebra(model_.gen);
    Index expected_dim = 0;
    for (const auto& [k, m] : model_.shape) expected_dim += k * k;
    EXPECT_EQ(nt.size(), expected_dim);

    const AtomicDecomposition decomp = decompose(model_.gen, nt, rng);
    std::vector<std::pair<Index, Index>> got;
    for (const Block& b : decomp.blocks) got.emplace_back(b.dim_k, b.dim_m);
    auto want = model_.shape;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want);
    for (const auto& [key, value] : decomp.residuals) EXPECT_LE(value, 1e-8) << key;
}

TEST_P(RandomModels, NtIsStarAlgebraInvariantUnderEvolution)
{
    Rng rng(8);
    const StarAlgebra nt = decoherence_free_subalgebra(model_.gen);
    EXPECT_LE(star_algebra_residuals(nt).max(), 1e-8);
    Matrix x = Matrix::Zero(model_.gen.dim(), model_.gen.dim());
    for (const auto& b : nt.basis()) x += rng.complex_normal() * b;
    x /= x.norm();
    const Matrix y = evolve(model_.gen, x, 0.6, Picture::heisenberg);
    EXPECT_TRUE(contains(nt, y, {}).member);
    // Automorphism on N(T): T_t(x* x) = T_t(x)* T_t(x).
    const Matrix lhs = evolve(model_.gen, x.adjoint() * x, 0.6, Picture::heisenberg);
    EXPECT_LT((lhs - y.adjoint() * y).norm(), 1e-9);
}

TEST_P(RandomModels, CenterLiesInFixedPoints)
{
    const StarAlgebra nt = decoherence_free_subalgebra(model_.gen);
    const StarAlgebra z = center(nt, {});
    const Superoperator l = lindbladian(model_.gen);
    for (const auto& c : z.basis()) EXPECT_LT(l.apply(c).norm(), 1e-8);
}

TEST_P(RandomModels, FixedPointsInsideNtWhenFaithful)
{
    const RecurrentProjection rec = recurrent_projection(model_.gen);
    const StarAlgebra nt = decoherence_free_subalgebra(model_.gen);
    const FixedPointSpace ft = fixed_point_space(model_.gen, nt);
    if (rec.faithful_exists) {
        EXPECT_TRUE(ft.contained_in_nt);
        EXPECT_TRUE(ft.is_algebra);
    }
    EXPECT_EQ(ft.is_algebra, ft.contained_in_nt);
}

TEST_P(RandomModels, KernelDimensionsAgree)
{
    const Index d = model_.gen.dim();
    const FixedPointSpace ft = fixed_point_space(model_.gen);
    EXPECT_EQ(static_cast<Index>(ft.basis.size()),
              static_cast<Index>(invariant_state_kernel(model_.gen).size()));
    EXPECT_LE(static_cast<Index>(ft.basis.size()), d * d);
}

TEST_P(RandomModels, KadisonSchwarz)
{
    Rng rng(9);
    const Index d = model_.gen.dim();
    for (int s = 0; s < 5; ++s) {
        const Matrix x = rng.ginibre(d, d);
        for (double t : {0.2, 1.5}) {
            const Matrix tx = evolve(model_.gen, x, t, Picture::heisenberg);
            const Matrix gap = evolve(model_.gen, x.adjoint() * x, t, Picture::heisenberg) - tx.adjoint() * tx;
            EXPECT_GE(hermitian_eig(hermitian_part(gap)).values(0), -1e-9);
        }
    }
}

TEST_P(RandomModels, TripleCommutant)
{
    Rng rng(10);
    const Index d = model_.gen.dim();
    const MatrixList s{rng.ginibre(d, d), model_.gen.noise()[0]};
    const StarAlgebra once = commutant(s, d, {});
    const StarAlgebra thrice = commutant(commutant(once.basis(), d, {}).basis(), d, {});
    EXPECT_LT(projector_distance(once, thrice), 1e-8);
}

TEST_P(RandomModels, GaugeInvariance)
{
    Rng rng(11);
    const std::size_t n = model_.gen.noise().size();
    Vector z(static_cast<Index>(n));
    for (Index i = 0; i < z.size(); ++i) z(i) = rng.complex_normal();
    const GkslGenerator other = gauge_transform(model_.gen, rng.unitary(static_cast<Index>(n)), z, rng.normal());
    EXPECT_LT((lindbladian(other).mat - lindbladian(model_.gen).mat).norm(), 1e-9);

    EXPECT_LT(projector_distance(decoherence_free_subalgebra(model_.gen), decoherence_free_subalgebra(other)), 1e-8);
    const auto span_a = fixed_point_space(model_.gen).basis;
    const auto span_b = fixed_point_space(other).basis;
    EXPECT_LT(subspace_distance(stack_vecs(span_a), stack_vecs(span_b)), 1e-8);

    Rng ra(12);
    Rng rb(12);
    EXPECT_EQ(eid_certificate(model_.gen, ra).eid_holds, eid_certificate(other, rb).eid_holds);
}

TEST_P(RandomModels, ConditionalExpectationAxioms)
{
    Rng rng(13);
    const EidCertificate c = eid_certificate(model_.gen, rng);
    if (!c.faithful_exists) GTEST_SKIP() << "no faithful invariant state";
    for (const auto& [key, value] : c.residuals) {
        if (key != "eid.direct_sum_dimension") EXPECT_LE(value, 1e-8) << key;
    }
    const Index d = model_.gen.dim();
    EXPECT_EQ(decoherence_free_subalgebra(model_.gen).size() + c.m2_dim, d * d);
    if (c.eid_holds) EXPECT_LE(c.spectral_abscissa_m2, -Tolerances{}.decay_margin);
}

TEST_P(RandomModels, InvariantStatesFactorize)
{
    Rng rng(14);
    const RecurrentProjection rec = recurrent_projection(model_.gen);
    if (!rec.faithful_exists) GTEST_SKIP() << "no faithful invariant state";
    const AtomicDecomposition decomp = decompose(model_.gen, decoherence_free_subalgebra(model_.gen), rng);
    const Matrix eta = sample_invariant_state(model_.gen, rng);
    const InvariantStateStructure s = analyze_invariant_state(model_.gen, decomp, eta);
    EXPECT_LE(s.reconstruction_residual, 1e-8);
    double weights = 0.0;
    for (const BlockState& b : s.blocks) {
        weights += b.weight;
        EXPECT_LE(b.commutator_residual, 1e-8);
        EXPECT_GT(hermitian_eig(hermitian_part(b.tau)).values(0), 0.0);
    }
    EXPECT_NEAR(weights, 1.0, 1e-8);
}

TEST_P(RandomModels, DfDaFactorization)
{
    Rng rng(15);
    const AtomicDecomposition decomp = decompose(model_.gen, decoherence_free_subalgebra(model_.gen), rng);
    const DfDaSplit split = build_df_da(model_.gen, decomp);
    for (const auto& [key, value] : split.residuals) EXPECT_LE(value, 1e-8) << key;
}

TEST_P(RandomModels, DfSubspaceEntriesAreScalar)
{
    Rng rng(16);
    const AtomicDecomposition decomp = decompose(model_.gen, decoherence_free_subalgebra(model_.gen), rng);
    const DfSubsystemReport r = df_subsystems(model_.gen, decomp, rng);
    for (const DfEntry& e : r.entries) {
        if (e.kind == DfKind::subspace) {
            EXPECT_EQ(e.dim_m, 1);
            EXPECT_EQ(e.lambda.size(), model_.gen.noise().size());
        } else {
            EXPECT_GT(e.dim_m, 1);
        }
    }
    for (double res : r.merged_dynamics_residual) EXPECT_LE(res, 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Seeded, RandomModels, ::testing::Range(0, kModels));

TEST(GenericRandom, TrivialNtAndIrreducible)
{
    Rng rng(17);
    for (Index d = 2; d <= 5; ++d) {
        const GkslGenerator gen = test::random_generic_model(rng, d);
        EXPECT_EQ(decoherence_free_subalgebra(gen).size(), 1);
        EXPECT_TRUE(is_irreducible(gen));
    }
}

} // namespace
} // namespace qmsdf
