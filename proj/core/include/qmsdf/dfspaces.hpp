// dfspaces.hpp: decoherence-free subalgebra, fixed points, ergodic projection

#pragma once

#include <vector>

#include "qmsdf/algebra.hpp"
#include "qmsdf/gksl.hpp"
#include "qmsdf/random.hpp"

namespace qmsdf {

// N(T): the commutant of all iterated commutators δ_H^n(L_ℓ), δ_H^n(L_ℓ*).
StarAlgebra decoherence_free_subalgebra(const GkslGenerator& gen, const Tolerances& tol = {});

// F(T) = ker L. Always an operator system; an algebra exactly when F(T) ⊆ N(T).
struct FixedPointSpace {
    MatrixList basis;
    bool is_algebra = false;
    bool contained_in_nt = false;
    double closure_residual = 0.0;     // worst product b_i b_j outside span
    double containment_residual = 0.0; // worst basis element outside N(T)
};

FixedPointSpace fixed_point_space(const GkslGenerator& gen, const StarAlgebra& nt, const Tolerances& tol = {});
FixedPointSpace fixed_point_space(const GkslGenerator& gen, const Tolerances& tol = {});

// Cesàro mean projection lim (1/t)∫T_s ds, i.e. the spectral projection of L
// at eigenvalue 0. Throws NumericalError when 0 is defective.
Superoperator ergodic_projection(const GkslGenerator& gen, const Tolerances& tol = {});

struct ConvergenceReport {
    std::vector<double> times;
    std::vector<double> distance; // max over samples of ‖T_t(x) − E(x)‖_F
    bool monotone_after_burn_in = false;
    double terminal_distance = 0.0;
    bool converged = false;
};

// Decay of ‖T_t(x) − E(x)‖ for random x when F(T) = N(T) and a faithful
// invariant state exists. Refuses (PreconditionError) otherwise.
ConvergenceReport check_ft_equals_nt_convergence(const GkslGenerator& gen, double t_max, int samples, Rng& rng,
                                                 const Tolerances& tol = {});

} // namespace qmsdf
