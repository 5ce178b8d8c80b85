#include <gtest/gtest.h>

#include <algorithm>

#include "helpers.hpp"
#include "qmsdf/dfspaces.hpp"
#include "qmsdf/errors.hpp"
#include "qmsdf/models.hpp"
#include "qmsdf/structure.hpp"

namespace qmsdf {
namespace {

using test::unit;

constexpr double kResidual = 1e-8;

AtomicDecomposition decompose_generator(const GkslGenerator& gen, std::uint64_t seed = 7)
{
    Rng rng(seed);
    return decompose(gen, decoherence_free_subalgebra(gen), rng);
}

void expect_small_residuals(const ResidualLedger& ledger)
{
    for (const auto& [name, value] : ledger) EXPECT_LE(value, kResidual) << name;
}

// Index of the expected projection closest to p.
std::size_t match_projection(const MatrixList& expected, const Matrix& p)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < expected.size(); ++i) {
        if ((expected[i] - p).norm() < (expected[best] - p).norm()) best = i;
    }
    return best;
}

TEST(MinimalCentralProjections, FactorHasOnlyIdentity)
{
    Rng rng(1);
    const StarAlgebra full = commutant(MatrixList{}, 3, {});
    const MatrixList ps = minimal_central_projections(full, rng);
    ASSERT_EQ(ps.size(), 1u);
    EXPECT_LT((ps[0] - identity(3)).norm(), 1e-10);
}

TEST(MinimalCentralProjections, ThreeLevelExample)
{
    Rng rng(2);
    const MatrixList ps = minimal_central_projections(decoherence_free_subalgebra(test::ft_not_algebra()), rng);
    ASSERT_EQ(ps.size(), 2u);
    const MatrixList expected{unit(0, 0, 3) + unit(2, 2, 3), unit(1, 1, 3)};
    for (const auto& p : ps) EXPECT_LT((expected[match_projection(expected, p)] - p).norm(), 1e-10);
    EXPECT_GT((ps[0] - ps[1]).norm(), 1.0);
}

TEST(MinimalCentralProjections, CirculantMatchesFourierFormula)
{
    Rng rng(3);
    const GkslGenerator gen = build_circulant(test::circulant_spec(4, 2));
    const MatrixList ps = minimal_central_projections(decoherence_free_subalgebra(gen), rng);
    const MatrixList expected = expected_circulant_projections(4, 2);
    ASSERT_EQ(ps.size(), 2u);
    ASSERT_EQ(expected.size(), 2u);
    const std::size_t first = match_projection(expected, ps[0]);
    EXPECT_LT((expected[first] - ps[0]).norm(), 1e-10);
    EXPECT_LT((expected[1 - first] - ps[1]).norm(), 1e-10);
}

TEST(FactorizeBlock, FullAlgebra)
{
    Rng rng(4);
    const StarAlgebra full = commutant(MatrixList{}, 3, {});
    const BlockFactorization f = factorize_block(full, identity(3), rng);
    EXPECT_EQ(f.dim_k, 3);
    EXPECT_EQ(f.dim_m, 1);
    EXPECT_LE(f.residual, kResidual);
}

TEST(FactorizeBlock, AbelianRankTwoBlock)
{
    Rng rng(5);
    const StarAlgebra nt = decoherence_free_subalgebra(test::ft_not_algebra());
    const BlockFactorization f = factorize_block(nt, unit(0, 0, 3) + unit(2, 2, 3), rng);
    EXPECT_EQ(f.dim_k, 1);
    EXPECT_EQ(f.dim_m, 2);
    EXPECT_LT((f.unitary * f.unitary.adjoint() - identity(2)).norm(), 1e-10);
}

TEST(FactorizeBlock, CirculantBlock)
{
    Rng rng(6);
    const GkslGenerator gen = build_circulant(test::circulant_spec(4, 2));
    const StarAlgebra nt = decoherence_free_subalgebra(gen);
    const BlockFactorization f = factorize_block(nt, expected_circulant_projections(4, 2)[0], rng);
    EXPECT_EQ(f.dim_k, 2);
    EXPECT_EQ(f.dim_m, 1);
    EXPECT_LE(f.residual, kResidual);
}

TEST(Decompose, CirculantBlockOperators)
{
    const GkslGenerator gen = build_circulant(test::circulant_spec(4, 2));
    const AtomicDecomposition decomp = decompose_generator(gen);
    ASSERT_EQ(decomp.blocks.size(), 2u);
    expect_small_residuals(decomp.residuals);
    const MatrixList expected = expected_circulant_projections(4, 2);
    for (const Block& b : decomp.blocks) {
        EXPECT_EQ(b.dim_k, 2);
        EXPECT_EQ(b.dim_m, 1);
        const double sign = match_projection(expected, b.projection) == 0 ? 1.0 : -1.0;
        ASSERT_EQ(b.Ms.size(), 2u);
        EXPECT_NEAR(std::abs(b.Ms[0](0, 0) - sign), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(b.Ms[1](0, 0) - sign), 0.0, 1e-10);
        EXPECT_LT(b.K.norm(), 1e-10);
        EXPECT_LT(b.M0.norm(), 1e-10);
    }
}

TEST(Decompose, NoNoiseGivesSingleFactorCarryingH)
{
    Rng rng(8);
    const Matrix h = rng.hermitian(3);
    const GkslGenerator gen(h, {});
    const AtomicDecomposition decomp = decompose_generator(gen);
    ASSERT_EQ(decomp.blocks.size(), 1u);
    const Block& b = decomp.blocks[0];
    EXPECT_EQ(b.dim_k, 3);
    EXPECT_EQ(b.dim_m, 1);
    EXPECT_TRUE(b.Ms.empty());
    EXPECT_LT(b.M0.norm(), 1e-14);
    EXPECT_LT((decomp.from_blocks(b.K) - h).norm(), 1e-10);
}

TEST(Decompose, TwoLevelIrreducibleIsOneNoisyBlock)
{
    const GenericSpec spec = test::two_level_spec(1.0, 2.0, 0.3, -0.4);
    const GkslGenerator gen = build_generic(spec);
    const AtomicDecomposition decomp = decompose_generator(gen);
    ASSERT_EQ(decomp.blocks.size(), 1u);
    const Block& b = decomp.blocks[0];
    EXPECT_EQ(b.dim_k, 1);
    EXPECT_EQ(b.dim_m, 2);
    // U*(1 ⊗ M0)U is the traceless part of H and U*(1 ⊗ M_l)U = L_l.
    Matrix traceless = gen.hamiltonian();
    traceless -= 0.5 * traceless.trace() * identity(2);
    EXPECT_LT((decomp.from_blocks(b.M0) - traceless).norm(), 1e-10);
    EXPECT_NEAR(std::abs(b.M0.trace()), 0.0, 1e-12);
    ASSERT_EQ(b.Ms.size(), gen.noise().size());
    for (std::size_t l = 0; l < b.Ms.size(); ++l) {
        EXPECT_LT((decomp.from_blocks(b.Ms[l]) - gen.noise()[l]).norm(), 1e-10);
    }
}

TEST(Decompose, ResidualInvariantsOnFixtures)
{
    for (const char* name : {"circulant_d4_n2_m0.json", "generic_4state_iso.json", "generic_3state_isolated.json",
                             "example_ft_no_alg.json"}) {
        SCOPED_TRACE(name);
        const GkslGenerator gen = test::load_fixture(name);
        const AtomicDecomposition decomp = decompose_generator(gen);
        expect_small_residuals(decomp.residuals);
        Index total = 0;
        Matrix sum = Matrix::Zero(gen.dim(), gen.dim());
        for (const Block& b : decomp.blocks) {
            total += b.rank();
            sum += b.projection;
            EXPECT_NEAR(std::abs(b.M0.trace()), 0.0, 1e-10);
            EXPECT_LT(hermiticity_defect(b.K), 1e-10);
        }
        EXPECT_EQ(total, gen.dim());
        EXPECT_LT((sum - identity(gen.dim())).norm(), 1e-10);
    }
}

TEST(Decompose, BlockOrderIsRankDescending)
{
    const AtomicDecomposition decomp = decompose_generator(test::load_fixture("generic_3state_isolated.json"));
    ASSERT_EQ(decomp.blocks.size(), 2u);
    EXPECT_GE(decomp.blocks[0].rank(), decomp.blocks[1].rank());
}

TEST(Decompose, SameSeedSameDecomposition)
{
    const GkslGenerator gen = test::load_fixture("circulant_d4_n2.json");
    const AtomicDecomposition a = decompose_generator(gen, 99);
    const AtomicDecomposition b = decompose_generator(gen, 99);
    EXPECT_EQ((a.unitary - b.unitary).norm(), 0.0);
}

TEST(ExtractBlockOperators, LeakingNoiseIsAStructuralError)
{
    // Blocks of the three-level example do not reduce a noise operator e01.
    Rng rng(9);
    const StarAlgebra nt = decoherence_free_subalgebra(test::ft_not_algebra());
    AtomicDecomposition decomp = atomic_decomposition(nt, rng);
    const GkslGenerator other(Matrix::Zero(3, 3), {unit(0, 1, 3)});
    EXPECT_THROW(extract_block_operators(other, decomp), StructuralError);
}

TEST(DfDa, ZeroHamiltonianHasNoDfPart)
{
    const GkslGenerator gen = build_circulant(test::circulant_spec(4, 2));
    const AtomicDecomposition decomp = decompose_generator(gen);
    const DfDaSplit split = build_df_da(gen, decomp);
    EXPECT_LT(split.df.mat.norm(), 1e-12);
    const Matrix u = decomp.unitary;
    const Matrix transformed = conjugation(u).mat * lindbladian(gen).mat * conjugation(u.adjoint()).mat;
    EXPECT_LT((split.da.mat - transformed).norm(), 1e-10);
    expect_small_residuals(split.residuals);
}

TEST(DfDa, PureHamiltonianSplit)
{
    Rng rng(10);
    const GkslGenerator gen(rng.hermitian(3), {});
    const AtomicDecomposition decomp = decompose_generator(gen);
    const DfDaSplit split = build_df_da(gen, decomp);
    // One factor block with dim_m = 1: the df part carries the whole Hamiltonian.
    EXPECT_LT(split.da.mat.norm(), 1e-10);
    EXPECT_LT((decomp.from_blocks(split.k_total) - gen.hamiltonian()).norm(), 1e-10);
    expect_small_residuals(split.residuals);
}

TEST(DfDa, CirculantWithFactorHamiltonian)
{
    const GkslGenerator gen = test::load_fixture("circulant_d4_n2_m0.json");
    const AtomicDecomposition decomp = decompose_generator(gen);
    const DfDaSplit split = build_df_da(gen, decomp);
    EXPECT_LE((split.df.mat * split.da.mat - split.da.mat * split.df.mat).norm(), kResidual);
    expect_small_residuals(split.residuals);
}

TEST(DfDa, LargeCirculantHasThreeBlocksAndNoDfPart)
{
    const GkslGenerator gen = test::load_fixture("circulant_d15_n10.json");
    const AtomicDecomposition decomp = decompose_generator(gen);
    ASSERT_EQ(decomp.blocks.size(), 3u);
    for (const Block& b : decomp.blocks) EXPECT_EQ(b.dim_k, 5);
    const DfDaSplit split = build_df_da(gen, decomp);
    EXPECT_LT(split.df.mat.norm(), 1e-10);
}

TEST(BlockGenerators, DecoherenceAffectedGeneratorIsBlockSum)
{
    const GkslGenerator gen = test::load_fixture("generic_4state_iso.json");
    const AtomicDecomposition decomp = decompose_generator(gen);
    const GkslGenerator da = decoherence_affected_generator(decomp);
    EXPECT_EQ(da.dim(), gen.dim());
    for (const Block& b : decomp.blocks) {
        const GkslGenerator local = block_generator(b);
        EXPECT_EQ(local.dim(), b.dim_m);
    }
    const Matrix k = decoherence_free_hamiltonian(decomp);
    EXPECT_LT((decomp.to_blocks(gen.hamiltonian()) - k - da.hamiltonian()).norm(), 1e-10);
}

} // namespace
} // namespace qmsdf
