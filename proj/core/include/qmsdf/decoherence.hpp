// decoherence.hpp: EID certificate and decoherence-free subsystems
//
// The conditional expectation onto N(T) is assembled blockwise,
//
//     E(x) = U* [ ⊕_i Tr_m((1 ⊗ τ_i) (U x U*)_ii) ⊗ 1_m ] U,
//
// and M_2 = ker E. EID holds when M_2 ≠ {0} and the generator restricted to
// M_2 has strictly negative spectral abscissa.

#pragma once

#include <string>
#include <vector>

#include "qmsdf/algebra.hpp"
#include "qmsdf/gksl.hpp"
#include "qmsdf/random.hpp"
#include "qmsdf/structure.hpp"

namespace qmsdf {

// taus[i] is the invariant density of block i on m_i.
Superoperator conditional_expectation(const AtomicDecomposition& decomp, const MatrixList& taus);

struct EidCertificate {
    Superoperator E;
    Index m2_dim = 0;
    MatrixList m2_basis;
    double spectral_abscissa_m2 = 0.0;
    bool faithful_exists = false;
    bool eid_holds = false;
    std::string reason; // empty when eid_holds
    ResidualLedger residuals;
};

// Full certificate from an already computed N(T) and decomposition with
// block operators. `rng` draws the samples for the compatibility checks.
EidCertificate eid_certificate(const GkslGenerator& gen, const StarAlgebra& nt, const AtomicDecomposition& decomp,
                               Rng& rng, const Tolerances& tol = {});

// Computes N(T) and its decomposition first.
EidCertificate eid_certificate(const GkslGenerator& gen, Rng& rng, const Tolerances& tol = {});

enum class DfKind { subsystem, subspace };

struct DfEntry {
    std::size_t block = 0;
    Index dim_k = 0;
    Index dim_m = 0;
    DfKind kind = DfKind::subsystem;
    std::vector<Complex> lambda; // M_ℓ = λ_ℓ 1, only for subspaces
};

struct DfSubsystemReport {
    std::vector<DfEntry> entries;
    // Maximal groups of subspace blocks sharing their λ-vector, singletons
    // included. Each group supports a decoherence-free subspace ⊕_j k_j.
    std::vector<std::vector<std::size_t>> merged_subspaces;
    std::vector<double> merged_dynamics_residual;
    bool nonreal_scalars = false;
    ResidualLedger residuals;
};

DfSubsystemReport df_subsystems(const GkslGenerator& gen, const AtomicDecomposition& decomp, Rng& rng,
                                const Tolerances& tol = {});

const char* to_string(DfKind kind);

} // namespace qmsdf
