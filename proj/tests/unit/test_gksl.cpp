#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "qmsdf/errors.hpp"
#include "qmsdf/gksl.hpp"
#include "qmsdf/random.hpp"

namespace qmsdf {
namespace {

using test::unit;

GkslGenerator random_generator(Rng& rng, Index d, int noise)
{
    MatrixList ls;
    for (int l = 0; l < noise; ++l) ls.push_back(rng.ginibre(d, d));
    return GkslGenerator(rng.hermitian(d), ls);
}

TEST(GkslGenerator, RejectsNonHermitianHamiltonian)
{
    EXPECT_THROW(GkslGenerator(unit(0, 1, 2), {}), DomainError);
}

TEST(GkslGenerator, RejectsMismatchedNoise)
{
    EXPECT_THROW(GkslGenerator(identity(2), {Matrix::Zero(3, 3)}), DomainError);
}

TEST(GkslGenerator, DropsNegligibleNoiseWithWarning)
{
    const GkslGenerator gen(identity(2), {Matrix::Zero(2, 2), unit(0, 1, 2)});
    EXPECT_EQ(gen.noise().size(), 1u);
    EXPECT_EQ(gen.warnings().size(), 1u);
}

TEST(Lindbladian, TrivialGeneratorIsZero)
{
    const GkslGenerator gen(Matrix::Zero(3, 3), {});
    EXPECT_EQ(lindbladian(gen).mat.norm(), 0.0);
    EXPECT_EQ(predual_lindbladian(gen).mat.norm(), 0.0);
}

TEST(Lindbladian, MatchesHandExpansionOnThreeLevelExample)
{
    // L(a) = (a00 − a22) e22 − (½ + i)(a02 e02 + a12 e12) − (½ − i)(a20 e20 + a21 e21).
    Rng rng(1);
    const Matrix a = rng.ginibre(3, 3);
    Matrix expected = Matrix::Zero(3, 3);
    expected(2, 2) = a(0, 0) - a(2, 2);
    const Complex up(0.5, 1.0);
    const Complex down(0.5, -1.0);
    expected(0, 2) = -up * a(0, 2);
    expected(1, 2) = -up * a(1, 2);
    expected(2, 0) = -down * a(2, 0);
    expected(2, 1) = -down * a(2, 1);
    EXPECT_LT((lindbladian(test::ft_not_algebra()).apply(a) - expected).norm(), 1e-13);
}

TEST(Lindbladian, AmplitudeDampingOnBasis)
{
    const Superoperator l = lindbladian(test::amplitude_damping());
    EXPECT_LT((l.apply(unit(1, 1, 2)) + unit(1, 1, 2)).norm(), 1e-14);
    EXPECT_LT((l.apply(unit(0, 0, 2)) - unit(1, 1, 2)).norm(), 1e-14);
}

TEST(PredualLindbladian, AmplitudeDampingMovesPopulation)
{
    const Matrix out = predual_lindbladian(test::amplitude_damping()).apply(unit(1, 1, 2));
    EXPECT_LT((out - unit(0, 0, 2) + unit(1, 1, 2)).norm(), 1e-14);
    EXPECT_NEAR(std::abs(out.trace()), 0.0, 1e-14);
}

TEST(PredualLindbladian, TracePairing)
{
    Rng rng(2);
    const GkslGenerator gen = random_generator(rng, 4, 3);
    const Superoperator l = lindbladian(gen);
    const Superoperator lp = predual_lindbladian(gen);
    for (int s = 0; s < 20; ++s) {
        const Matrix rho = rng.ginibre(4, 4);
        const Matrix x = rng.ginibre(4, 4);
        const Complex lhs = (lp.apply(rho) * x).trace();
        const Complex rhs = (rho * l.apply(x)).trace();
        EXPECT_LT(std::abs(lhs - rhs), 1e-10 * (1.0 + std::abs(lhs)));
    }
}

TEST(Lindbladian, UnitalAndTracePreserving)
{
    Rng rng(3);
    const GkslGenerator gen = random_generator(rng, 5, 2);
    EXPECT_LT(lindbladian(gen).apply(identity(5)).norm(), 1e-12);
    EXPECT_LT((vec(identity(5)).adjoint() * predual_lindbladian(gen).mat).norm(), 1e-12);
}

TEST(Lindbladian, SplitsIntoHamiltonianAndDissipativeParts)
{
    Rng rng(4);
    const GkslGenerator gen = random_generator(rng, 3, 2);
    EXPECT_LT((hamiltonian_part(gen).mat + dissipative_part(gen).mat - lindbladian(gen).mat).norm(), 1e-12);
}

TEST(Conjugation, MatchesDirectProduct)
{
    Rng rng(5);
    const Matrix u = rng.unitary(3);
    const Matrix x = rng.ginibre(3, 3);
    EXPECT_LT((conjugation(u).apply(x) - u * x * u.adjoint()).norm(), 1e-12);
}

TEST(Evolve, TimeZeroIsIdentity)
{
    Rng rng(6);
    const GkslGenerator gen = random_generator(rng, 3, 1);
    const Matrix x = rng.ginibre(3, 3);
    EXPECT_LT((evolve(gen, x, 0.0, Picture::heisenberg) - x).norm(), 1e-14);
}

TEST(Evolve, UnitalInHeisenbergPicture)
{
    Rng rng(7);
    const GkslGenerator gen = random_generator(rng, 3, 2);
    for (double t : {0.1, 1.0, 4.0}) {
        EXPECT_LT((evolve(gen, identity(3), t, Picture::heisenberg) - identity(3)).norm(), 1e-10);
    }
}

TEST(Evolve, AmplitudeDampingClosedForm)
{
    const Matrix rho = evolve(test::amplitude_damping(), unit(1, 1, 2), 1.0, Picture::schrodinger);
    EXPECT_NEAR(rho(1, 1).real(), std::exp(-1.0), 1e-12);
    EXPECT_NEAR(rho(0, 0).real(), 1.0 - std::exp(-1.0), 1e-12);
}

TEST(Evolve, RejectsNegativeTime)
{
    EXPECT_THROW(evolve(test::amplitude_damping(), identity(2), -0.1, Picture::heisenberg), DomainError);
}

TEST(GaugeTransform, IdentityLeavesGeneratorUnchanged)
{
    Rng rng(8);
    const GkslGenerator gen = random_generator(rng, 3, 2);
    const GkslGenerator same = gauge_transform(gen, identity(2), Vector::Zero(2), 0.0);
    EXPECT_LT((same.hamiltonian() - gen.hamiltonian()).norm(), 1e-14);
    for (std::size_t l = 0; l < 2; ++l) EXPECT_LT((same.noise()[l] - gen.noise()[l]).norm(), 1e-14);
}

TEST(GaugeTransform, PhaseKeepsLindbladian)
{
    const GkslGenerator gen = test::amplitude_damping();
    Matrix u(1, 1);
    u(0, 0) = std::polar(1.0, 0.9);
    const GkslGenerator g = gauge_transform(gen, u, Vector::Zero(1), 0.0);
    EXPECT_LT((lindbladian(g).mat - lindbladian(gen).mat).norm(), 1e-13);
}

TEST(GaugeTransform, ShiftKeepsLindbladianOnThreeLevelExample)
{
    Rng rng(9);
    const GkslGenerator gen = test::ft_not_algebra();
    Matrix u(1, 1);
    u(0, 0) = std::polar(1.0, 2.0 * M_PI * rng.uniform());
    Vector z(1);
    z(0) = rng.complex_normal();
    const GkslGenerator g = gauge_transform(gen, u, z, rng.normal());
    EXPECT_LE((lindbladian(g).mat - lindbladian(gen).mat).norm(), 1e-9);
}

TEST(GaugeTransform, RandomUnitaryMixing)
{
    Rng rng(10);
    const GkslGenerator gen = random_generator(rng, 4, 3);
    Vector z(3);
    for (Index i = 0; i < 3; ++i) z(i) = rng.complex_normal();
    const GkslGenerator g = gauge_transform(gen, rng.unitary(3), z, -0.7);
    EXPECT_LE((lindbladian(g).mat - lindbladian(gen).mat).norm(), 1e-9);
}

TEST(GaugeTransform, RejectsNonUnitaryMixing)
{
    const GkslGenerator gen = test::amplitude_damping();
    Matrix u(1, 1);
    u(0, 0) = 2.0;
    EXPECT_THROW(gauge_transform(gen, u, Vector::Zero(1), 0.0), DomainError);
    EXPECT_THROW(gauge_transform(gen, identity(2), Vector::Zero(2), 0.0), DomainError);
}

} // namespace
} // namespace qmsdf
