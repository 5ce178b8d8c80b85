// states.hpp: invariant states, recurrent projection, reduction

#pragma once

#include <vector>

#include "qmsdf/gksl.hpp"
#include "qmsdf/random.hpp"
#include "qmsdf/structure.hpp"

namespace qmsdf {

// HS-orthonormal basis of ker L_*.
MatrixList invariant_state_kernel(const GkslGenerator& gen, const Tolerances& tol = {});

struct RecurrentProjection {
    Matrix p_R;
    Matrix rho_bar;                   // Cesàro limit of T_*t(1/d)
    bool faithful_exists = false;     // p_R = 1
    double maximality_residual = 0.0; // worst kernel element leaking outside p_R
};

// Throws NumericalError when rho_bar has eigenvalues below −residual.
RecurrentProjection recurrent_projection(const GkslGenerator& gen, const Tolerances& tol = {});

// Reduced generator on range(p): H' = W*HW, L'_ℓ = W*L_ℓW with W an
// isometry onto range(p). p must be a subharmonic projection, which is
// checked as p⊥ L_ℓ p = 0 and p⊥ G p = 0 with G = −iH − ½ Σ L*L.
GkslGenerator reduce(const GkslGenerator& gen, const Matrix& p, const Tolerances& tol = {});

// Isometry W (d × rank p) used by reduce().
Matrix reduction_isometry(const Matrix& p);

struct BlockTau {
    Matrix tau;                    // faithful density on m_i
    Index kernel_dim = 0;
    double cross_check_residual = 0.0; // against Tr_k(U_i ρ̄ U_i*) / weight
};

// Unique invariant state of the block semigroup on B(m_i). Requires a
// faithful invariant state on gen.
BlockTau block_tau(const GkslGenerator& gen, const AtomicDecomposition& decomp, std::size_t block_index,
                   const Tolerances& tol = {});

// Same, with a precomputed faithful rho_bar.
BlockTau block_tau(const AtomicDecomposition& decomp, std::size_t block_index, const Matrix& rho_bar,
                   const Tolerances& tol = {});

struct BlockState {
    double weight = 0.0; // tr(η p_i)
    Matrix sigma;        // density on k_i
    Matrix tau;          // density on m_i
    double commutator_residual = 0.0; // ‖[σ_i, K_i]‖_F
};

struct InvariantStateStructure {
    Matrix p_R;
    bool faithful_exists = false;
    std::vector<BlockState> blocks;
    double reconstruction_residual = 0.0; // trace norm
    ResidualLedger residuals;
};

// Decomposes an invariant η as U*(⊕ tr(ηp_i) σ_i ⊗ τ_i)U. Throws
// PreconditionError without a faithful invariant state and StructuralError
// when a verification fails.
InvariantStateStructure analyze_invariant_state(const GkslGenerator& gen, const AtomicDecomposition& decomp,
                                                const Matrix& eta, const Tolerances& tol = {});

// A random positive invariant state: a real combination of the kernel,
// shifted by the smallest multiple of rho_bar that makes it positive
// definite, then normalized.
Matrix sample_invariant_state(const GkslGenerator& gen, Rng& rng, const Tolerances& tol = {});

// Kernel of L_* is one-dimensional and its state is faithful.
bool is_irreducible(const GkslGenerator& gen, const Tolerances& tol = {});

} // namespace qmsdf
