// gksl.hpp: GKSL generators, their Lindbladian superoperators, and evolution

#pragma once

#include <string>
#include <vector>

#include "qmsdf/linalg.hpp"

namespace qmsdf {

enum class Picture { heisenberg, schrodinger };

// Generator L(x) = i[H, x] − ½ Σ_ℓ (L_ℓ* L_ℓ x − 2 L_ℓ* x L_ℓ + x L_ℓ* L_ℓ).
//
// Construction validates shapes and the Hermiticity of H, and drops noise
// operators with ‖L_ℓ‖_F ≤ rank_rel (each drop is recorded in warnings()).
// The representation is not canonicalized.
class GkslGenerator {
public:
    GkslGenerator(Matrix hamiltonian, MatrixList noise, const Tolerances& tol = {});

    Index dim() const { return hamiltonian_.rows(); }
    const Matrix& hamiltonian() const { return hamiltonian_; }
    const MatrixList& noise() const { return noise_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    Matrix hamiltonian_;
    MatrixList noise_;
    std::vector<std::string> warnings_;
};

// A linear map on d×d matrices, stored as its d²×d² matrix on vec(x).
struct Superoperator {
    Index dim = 0;
    Matrix mat;

    Matrix apply(const Matrix& x) const { return unvec(mat * vec(x), dim); }
};

// Heisenberg-picture Lindbladian L. Unital: L(1) = 0.
Superoperator lindbladian(const GkslGenerator& gen);

// Trace-pairing adjoint L_*, generating the state evolution. Trace preserving.
Superoperator predual_lindbladian(const GkslGenerator& gen);

// max(‖H‖_F, Σ ‖L_ℓ‖_F²): the size of the Lindbladian built from these inputs.
double generator_scale(const GkslGenerator& gen);

// x ↦ i[H, x]
Superoperator hamiltonian_part(const GkslGenerator& gen);

// x ↦ −½ Σ (L* L x − 2 L* x L + x L* L)
Superoperator dissipative_part(const GkslGenerator& gen);

// x ↦ u x u*
Superoperator conjugation(const Matrix& u);

// unvec(exp(t·mat) vec(x)) in the chosen picture. Throws DomainError for t < 0.
Matrix evolve(const GkslGenerator& gen, const Matrix& x, double t, Picture picture);

// Same as evolve() for a precomputed generator matrix.
Matrix evolve(const Superoperator& generator, const Matrix& x, double t);

// Alternative GKSL representation of the same Lindbladian:
//   L'_ℓ = Σ_m u_ℓm L_m + z_ℓ 1,
//   H'   = H + c 1 + (X − X*) / (2i),  X = Σ_{m,j} conj(z_m) u_mj L_j.
// u must be unitary with size |Ls| × |Ls|; z has |Ls| entries.
GkslGenerator gauge_transform(const GkslGenerator& gen, const Matrix& u, const Vector& z, double c,
                              const Tolerances& tol = {});

} // namespace qmsdf
