// linalg.hpp: dense complex linear-algebra kernel
//
// Conventions used throughout qmsdf:
//   * vec() is column stacking, so vec(A X B) = (B^T ⊗ A) vec(X).
//   * The Hilbert–Schmidt inner product <A, B> = tr(A* B) coincides with the
//     Euclidean inner product of vec(A) and vec(B).
//   * Rank decisions are relative to the largest singular value.

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qmsdf {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using MatrixList = std::vector<Matrix>;

// Named residuals of every identity verified at runtime. Ordered so that
// serialized reports are deterministic.
using ResidualLedger = std::map<std::string, double>;

struct Tolerances {
    double rank_rel = 1e-9;     // relative singular-value cutoff
    double cluster_gap = 1e-8;  // eigenvalue clustering gap
    double herm = 1e-10;        // Hermiticity check
    double residual = 1e-8;     // structural-identity residual bound
    double decay_margin = 1e-7; // spectral-abscissa margin for EID

    // Throws DomainError unless all values are strictly positive and rank_rel < 1.
    void validate() const;
};

enum class TraceOut { left, right };

// Dimensions of a bipartite space k ⊗ m. Index of |r> ⊗ |s> is r * m + s.
struct TensorDims {
    Index k = 1;
    Index m = 1;
    Index total() const { return k * m; }
};

struct HermitianEig {
    RealVector values; // ascending
    Matrix vectors;    // unitary, columns are eigenvectors
};

Matrix identity(Index d);

Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, Index d);

Matrix kron(const Matrix& a, const Matrix& b);

// Matrix of the superoperator x ↦ a x b acting on vec(x).
Matrix sandwich_superop(const Matrix& a, const Matrix& b);

Complex hs_inner(const Matrix& a, const Matrix& b);

double hermiticity_defect(const Matrix& a);
bool is_hermitian(const Matrix& a, double tol);
Matrix hermitian_part(const Matrix& a);

// Eigendecomposition of a Hermitian matrix. Eigenvalues ascending; each
// eigenvector has its first non-negligible component real and positive.
HermitianEig hermitian_eig(const Matrix& a, const Tolerances& tol = {});

// exp(t A) by scaling and squaring with a degree-13 Padé approximant.
Matrix matexp(const Matrix& a, double t);

// Orthonormal basis (as columns) of the right nullspace of a: right singular
// vectors with σ ≤ rank_rel · max(σ_max, scale). A zero matrix yields the
// full space. Pass the expected size of a in scale when its rows may all be
// roundoff, so that roundoff is not counted as rank.
Matrix nullspace(const Matrix& a, const Tolerances& tol, double scale = 0.0);

// Nullspace of a tall stack of row blocks, without materializing the stack.
// Row blocks are folded into an n×n triangular factor by repeated QR, which
// keeps the singular values of the full stack.
class StackedNullspace {
public:
    explicit StackedNullspace(Index cols);

    void add_rows(const Matrix& block);
    Matrix basis(const Tolerances& tol, double scale = 0.0);
    Index cols() const { return cols_; }

private:
    void flush();

    Index cols_;
    Matrix r_;
    std::vector<Matrix> pending_;
    Index pending_rows_ = 0;
};

// Tr over one tensor factor of σ acting on k ⊗ m. TraceOut::right traces out m
// and returns an operator on k; TraceOut::left traces out k.
Matrix partial_trace(const Matrix& sigma, TraceOut side, TensorDims dims);

// Modified Gram–Schmidt (two passes) under the Hilbert–Schmidt inner
// product. Vectors whose remainder falls below rank_rel · (largest input
// norm) are dropped.
MatrixList hs_orthonormalize(std::span<const Matrix> span, const Tolerances& tol);

// Columns vec(b) for each element of an orthonormal list.
Matrix stack_vecs(std::span<const Matrix> list);
MatrixList unstack_vecs(const Matrix& columns, Index d);

// ‖P_a − P_b‖_F for orthogonal projections onto the column spans of two
// matrices with orthonormal columns.
double subspace_distance(const Matrix& qa, const Matrix& qb);

double trace_norm(const Matrix& a);
double operator_norm(const Matrix& a);

// Orthogonal projection onto the span of eigenvectors of a Hermitian matrix
// with eigenvalue > cutoff.
Matrix support_projection(const Matrix& herm, double cutoff);

// Orthonormal basis (columns) of the range of an orthogonal projection.
Matrix projection_range(const Matrix& p);

// Groups sorted values into clusters separated by gaps larger than `gap`.
std::vector<std::vector<Index>> cluster_sorted(const RealVector& sorted, double gap);

// Spectral (Riesz) projection of a square matrix onto its eigenvalue 0.
// Throws NumericalError when 0 is a defective eigenvalue.
struct SpectralProjection {
    Matrix projector;
    Index algebraic_multiplicity = 0;
    Index geometric_multiplicity = 0;
    double idempotency_residual = 0.0;
};
SpectralProjection spectral_projection_at_zero(const Matrix& a, const Tolerances& tol);

// Largest real part of the spectrum. Returns -inf for an empty matrix.
double spectral_abscissa(const Matrix& a);

} // namespace qmsdf
