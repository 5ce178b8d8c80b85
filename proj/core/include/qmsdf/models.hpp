// models.hpp: generic and circulant QMS families with known N(T)

#pragma once

#include <vector>

#include "qmsdf/algebra.hpp"
#include "qmsdf/gksl.hpp"

namespace qmsdf {

// Generic QMS: H = Σ κ_m e_mm, noise L_mj = √γ_mj |e_j><e_m| for γ_mj > 0.
// The diagonal of gamma is ignored and recomputed as −Σ_{j≠m} γ_mj.
struct GenericSpec {
    RealMatrix gamma;
    RealVector kappa;

    Index n_states() const { return gamma.rows(); }
};

// Throws DomainError on negative off-diagonal rates or mismatched sizes.
void validate(const GenericSpec& spec);

// Rate matrix Γ of the classical chain on the diagonal.
RealMatrix classical_generator(const GenericSpec& spec);

// Verifies L(diag f) = diag(Γ f) on the basis functions.
GkslGenerator build_generic(const GenericSpec& spec, const Tolerances& tol = {});

// Communication classes of non-isolated states (sorted), and isolated states.
struct ChainClasses {
    std::vector<std::vector<Index>> classes;
    std::vector<Index> isolated;
};
ChainClasses communication_classes(const GenericSpec& spec);

// Algebra generated by the class projections and |e_i><e_j| for i, j isolated.
StarAlgebra expected_generic_nt(const GenericSpec& spec, const Tolerances& tol = {});

enum class CirculantHamiltonian { zero, factor };

// Circulant QMS: noise z1 J^n and z2 J^{-n}, with J e_i = e_{i−1 mod d}.
struct CirculantSpec {
    Index d = 2;
    Index n = 1;
    Complex z1{1.0, 0.0};
    Complex z2{1.0, 0.0};
    CirculantHamiltonian mode = CirculantHamiltonian::zero;
    Matrix K;  // k × k, used in factor mode
    Matrix M0; // m × m, used in factor mode

    Index k() const; // gcd(n, d)
    Index m() const; // d / k
};

void validate(const CirculantSpec& spec);

Matrix circulant_shift(Index d);

// Unitary F with F v_{mr+h} = f_r ⊗ g_h, where v_j are the Fourier
// eigenvectors of J.
Matrix circulant_fourier(Index d, Index m);

// Cyclic nearest-neighbour M_0 = Σ_h (|g_{h+1}><g_h| + |g_{h−1}><g_h|).
Matrix circulant_tridiagonal_m0(Index m);

// H = 0 or F*(K ⊗ 1 + 1 ⊗ M0)F. Checks J v_j = ω^j v_j.
GkslGenerator build_circulant(const CirculantSpec& spec, const Tolerances& tol = {});

// p_h = Σ_r |v_{mr+h}><v_{mr+h}|, h = 0..m−1.
MatrixList expected_circulant_projections(Index d, Index n);

// Commutant of {J^k, J^{-k}}.
StarAlgebra expected_circulant_nt(Index d, Index n, const Tolerances& tol = {});

} // namespace qmsdf
