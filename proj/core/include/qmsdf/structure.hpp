// structure.hpp: atomic decomposition of N(T) and the df/da factorization
//
// N(T) is split by its minimal central projections p_i; each corner
// p_i N(T) p_i is a type I factor, unitarily equivalent to B(k_i) ⊗ 1_{m_i}.
// Collecting the block unitaries U_i gives a global U with
//
//     U N(T) U* = ⊕_i B(k_i) ⊗ 1_{m_i},
//     U L_ℓ U*  = ⊕_i 1 ⊗ M_ℓ^(i),
//     U H U*    = ⊕_i (K_i ⊗ 1 + 1 ⊗ M_0^(i)),   tr M_0^(i) = 0.
//
// The factorization is unique only up to block-local unitaries; everything
// downstream is compared through basis-independent quantities.

#pragma once

#include <vector>

#include "qmsdf/algebra.hpp"
#include "qmsdf/gksl.hpp"
#include "qmsdf/random.hpp"

namespace qmsdf {

struct Block {
    Matrix projection; // p_i, d × d
    Matrix unitary;    // U_i, (dim_k·dim_m) × d; U_i U_i* = 1 and U_i* U_i = p_i
    Index dim_k = 0;
    Index dim_m = 0;
    Index offset = 0;  // first row of this block inside the global unitary

    // Filled by extract_block_operators().
    Matrix K;          // Hermitian, dim_k × dim_k
    Matrix M0;         // Hermitian and traceless, dim_m × dim_m
    MatrixList Ms;     // one dim_m × dim_m operator per noise operator

    TensorDims dims() const { return {dim_k, dim_m}; }
    Index rank() const { return dim_k * dim_m; }
};

struct AtomicDecomposition {
    std::vector<Block> blocks;
    Matrix unitary; // d × d, block rows stacked in order
    bool has_operators = false;
    ResidualLedger residuals;

    Index dim() const { return unitary.rows(); }
    Matrix to_blocks(const Matrix& x) const { return unitary * x * unitary.adjoint(); }
    Matrix from_blocks(const Matrix& y) const { return unitary.adjoint() * y * unitary; }
};

// Spectral projections of a generic Hermitian central element, one per
// minimal central projection. Retries up to five draws when clusters are
// ambiguous.
MatrixList minimal_central_projections(const StarAlgebra& algebra, Rng& rng, const Tolerances& tol = {});

struct BlockFactorization {
    Matrix unitary; // rank(p) × d
    Index dim_k = 0;
    Index dim_m = 0;
    double residual = 0.0; // projector distance of U (pAp) U* to B(k) ⊗ 1
};

// Builds U_p with U_p (p A p) U_p* = B(k) ⊗ 1_m from a system of matrix
// units. p must be a minimal central projection of A.
BlockFactorization factorize_block(const StarAlgebra& algebra, const Matrix& p, Rng& rng,
                                   const Tolerances& tol = {});

// Minimal central projections plus block factorizations, ordered by
// (dim_k·dim_m descending, first basis index touched by p, entries of p).
AtomicDecomposition atomic_decomposition(const StarAlgebra& algebra, Rng& rng, const Tolerances& tol = {});

// Fills K_i, M_0^(i), M_ℓ^(i). Throws StructuralError when an L_ℓ or H
// couples different blocks or fails to factor.
AtomicDecomposition extract_block_operators(const GkslGenerator& gen, AtomicDecomposition decomp,
                                            const Tolerances& tol = {});

// atomic_decomposition() followed by extract_block_operators().
AtomicDecomposition decompose(const GkslGenerator& gen, const StarAlgebra& nt, Rng& rng,
                              const Tolerances& tol = {});

// Generator L^{m_i}(y) = i[M_0, y] − ½ Σ (M_ℓ* M_ℓ y − 2 M_ℓ* y M_ℓ + y M_ℓ* M_ℓ) on B(m_i).
GkslGenerator block_generator(const Block& block, const Tolerances& tol = {});

// Generator of the decoherence-affected semigroup on ⊕(k_i ⊗ m_i), with
// Hamiltonian ⊕ 1 ⊗ M_0^(i) and noise ⊕ 1 ⊗ M_ℓ^(i).
GkslGenerator decoherence_affected_generator(const AtomicDecomposition& decomp, const Tolerances& tol = {});

// ⊕_i K_i ⊗ 1_{m_i} in block coordinates.
Matrix decoherence_free_hamiltonian(const AtomicDecomposition& decomp);

struct DfDaSplit {
    Superoperator df; // i[⊕ K_i ⊗ 1, ·]
    Superoperator da; // U L U* − df
    Matrix k_total;   // ⊕ K_i ⊗ 1
    ResidualLedger residuals;
};

// Splits the transformed generator into commuting decoherence-free and
// decoherence-affected parts and verifies the exponential factorization.
DfDaSplit build_df_da(const GkslGenerator& gen, const AtomicDecomposition& decomp, const Tolerances& tol = {});

} // namespace qmsdf
