// linalg.cpp: dense kernel: eigen, exponential, nullspace, partial trace

#include "qmsdf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "qmsdf/errors.hpp"

namespace qmsdf {

void Tolerances::validate() const
{
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(rank_rel) || !positive(cluster_gap) || !positive(herm) ||
        !positive(residual) || !positive(decay_margin)) {
        throw DomainError("tolerances: every tolerance must be finite and strictly positive");
    }
    if (rank_rel >= 1.0) {
        throw DomainError("tolerances: rank_rel must be < 1");
    }
}

Matrix identity(Index d)
{
    return Matrix::Identity(d, d);
}

Vector vec(const Matrix& x)
{
    return Eigen::Map<const Vector>(x.data(), x.size());
}

Matrix unvec(const Vector& v, Index d)
{
    if (v.size() != d * d) {
        throw DomainError("unvec: vector length is not d^2");
    }
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

Matrix kron(const Matrix& a, const Matrix& b)
{
    return Eigen::kroneckerProduct(a, b).eval();
}

Matrix sandwich_superop(const Matrix& a, const Matrix& b)
{
    return kron(b.transpose(), a);
}

Complex hs_inner(const Matrix& a, const Matrix& b)
{
    return (a.adjoint() * b).trace();
}

double hermiticity_defect(const Matrix& a)
{
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    return (a - a.adjoint()).norm();
}

bool is_hermitian(const Matrix& a, double tol)
{
    return a.rows() == a.cols() && hermiticity_defect(a) <= tol * std::max(a.norm(), 1e-300);
}

Matrix hermitian_part(const Matrix& a)
{
    return (a + a.adjoint()) * 0.5;
}

HermitianEig hermitian_eig(const Matrix& a, const Tolerances& tol)
{
    if (a.rows() != a.cols()) {
        throw DomainError("hermitian_eig: matrix is not square");
    }
    if (a.size() > 0 && hermiticity_defect(a) > tol.herm * a.norm()) {
        throw DomainError("hermitian_eig: matrix is not Hermitian within tolerance");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a));
    if (solver.info() != Eigen::Success) {
        throw NumericalError("hermitian_eig: eigensolver failed to converge");
    }
    HermitianEig out{solver.eigenvalues(), solver.eigenvectors()};
    for (Index j = 0; j < out.vectors.cols(); ++j) {
        auto col = out.vectors.col(j);
        const double scale = col.cwiseAbs().maxCoeff();
        for (Index i = 0; i < col.size(); ++i) {
            const double mag = std::abs(col(i));
            if (mag > 1e-8 * scale) {
                col *= std::conj(col(i)) / mag;
                col(i) = Complex(col(i).real(), 0.0);
                break;
            }
        }
    }
    return out;
}

Matrix matexp(const Matrix& a, double t)
{
    if (a.rows() != a.cols()) {
        throw DomainError("matexp: matrix is not square");
    }
    if (t == 0.0 || a.size() == 0) {
        return identity(a.rows());
    }
    const Matrix scaled = t * a;
    return scaled.exp();
}

namespace {

Matrix nullspace_of_square_or_wide(const Matrix& a, const Tolerances& tol, double scale)
{
    const Index n = a.cols();
    if (a.rows() == 0) {
        return identity(n);
    }
    // JacobiSVD: Eigen 3.4.0 BDCSVD returns NaN or inaccurate V on some exactly structured inputs.
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const RealVector& s = svd.singularValues();
    const double smax = std::max(s.size() > 0 ? s(0) : 0.0, scale);
    Index rank = 0;
    if (smax > 0.0) {
        const double cutoff = tol.rank_rel * smax;
        for (Index i = 0; i < s.size(); ++i) {
            if (s(i) > cutoff) ++rank;
        }
    }
    return svd.matrixV().rightCols(n - rank);
}

} // namespace

StackedNullspace::StackedNullspace(Index cols) : cols_(cols), r_(0, cols) {}

void StackedNullspace::add_rows(const Matrix& block)
{
    if (block.cols() != cols_) {
        throw DomainError("StackedNullspace: row block has the wrong column count");
    }
    pending_.push_back(block);
    pending_rows_ += block.rows();
    if (pending_rows_ >= 2 * cols_) {
        flush();
    }
}

void StackedNullspace::flush()
{
    if (pending_.empty()) return;
    Matrix stacked(r_.rows() + pending_rows_, cols_);
    stacked.topRows(r_.rows()) = r_;
    Index row = r_.rows();
    for (const auto& block : pending_) {
        stacked.middleRows(row, block.rows()) = block;
        row += block.rows();
    }
    pending_.clear();
    pending_rows_ = 0;
    if (stacked.rows() <= cols_) {
        r_ = std::move(stacked);
        return;
    }
    Eigen::HouseholderQR<Matrix> qr(stacked);
    r_ = qr.matrixQR().topRows(cols_).triangularView<Eigen::Upper>();
}

Matrix StackedNullspace::basis(const Tolerances& tol, double scale)
{
    flush();
    return nullspace_of_square_or_wide(r_, tol, scale);
}

Matrix nullspace(const Matrix& a, const Tolerances& tol, double scale)
{
    if (a.rows() > 2 * a.cols()) {
        StackedNullspace stack(a.cols());
        stack.add_rows(a);
        return stack.basis(tol, scale);
    }
    return nullspace_of_square_or_wide(a, tol, scale);
}

Matrix partial_trace(const Matrix& sigma, TraceOut side, TensorDims dims)
{
    const Index n = dims.total();
    if (sigma.rows() != n || sigma.cols() != n || dims.k < 1 || dims.m < 1) {
        throw DomainError("partial_trace: operator size does not match dim k * dim m");
    }
    if (side == TraceOut::right) {
        Matrix out = Matrix::Zero(dims.k, dims.k);
        for (Index r = 0; r < dims.k; ++r)
            for (Index rp = 0; rp < dims.k; ++rp)
                for (Index s = 0; s < dims.m; ++s)
                    out(r, rp) += sigma(r * dims.m + s, rp * dims.m + s);
        return out;
    }
    Matrix out = Matrix::Zero(dims.m, dims.m);
    for (Index s = 0; s < dims.m; ++s)
        for (Index sp = 0; sp < dims.m; ++sp)
            for (Index r = 0; r < dims.k; ++r)
                out(s, sp) += sigma(r * dims.m + s, r * dims.m + sp);
    return out;
}

MatrixList hs_orthonormalize(std::span<const Matrix> span, const Tolerances& tol)
{
    MatrixList basis;
    if (span.empty()) return basis;
    const Index rows = span.front().rows();
    const Index cols = span.front().cols();
    double largest = 0.0;
    for (const auto& m : span) {
        if (m.rows() != rows || m.cols() != cols) {
            throw DomainError("hs_orthonormalize: matrices differ in size");
        }
        largest = std::max(largest, m.norm());
    }
    if (largest == 0.0) return basis;
    const double cutoff = tol.rank_rel * largest;
    for (const auto& m : span) {
        Matrix v = m;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : basis) {
                v -= hs_inner(q, v) * q;
            }
        }
        const double norm = v.norm();
        if (norm > cutoff) {
            basis.push_back(v / norm);
        }
    }
    return basis;
}

Matrix stack_vecs(std::span<const Matrix> list)
{
    if (list.empty()) return Matrix(0, 0);
    const Index n = list.front().size();
    Matrix out(n, static_cast<Index>(list.size()));
    for (std::size_t j = 0; j < list.size(); ++j) {
        out.col(static_cast<Index>(j)) = vec(list[j]);
    }
    return out;
}

MatrixList unstack_vecs(const Matrix& columns, Index d)
{
    MatrixList out;
    out.reserve(static_cast<std::size_t>(columns.cols()));
    for (Index j = 0; j < columns.cols(); ++j) {
        out.push_back(unvec(columns.col(j), d));
    }
    return out;
}

double subspace_distance(const Matrix& qa, const Matrix& qb)
{
    const Index n = std::max(qa.rows(), qb.rows());
    Matrix pa = Matrix::Zero(n, n);
    Matrix pb = Matrix::Zero(n, n);
    if (qa.cols() > 0) pa = qa * qa.adjoint();
    if (qb.cols() > 0) pb = qb * qb.adjoint();
    return (pa - pb).norm();
}

double trace_norm(const Matrix& a)
{
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues().sum();
}

double operator_norm(const Matrix& a)
{
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

Matrix support_projection(const Matrix& herm, double cutoff)
{
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(herm));
    const Index n = herm.rows();
    Matrix p = Matrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
        if (solver.eigenvalues()(j) > cutoff) {
            p += solver.eigenvectors().col(j) * solver.eigenvectors().col(j).adjoint();
        }
    }
    return p;
}

Matrix projection_range(const Matrix& p)
{
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(p));
    Index count = 0;
    for (Index j = 0; j < p.rows(); ++j) {
        if (solver.eigenvalues()(j) > 0.5) ++count;
    }
    // Eigenvalues are ascending, so the range is spanned by the last columns.
    return solver.eigenvectors().rightCols(count);
}

std::vector<std::vector<Index>> cluster_sorted(const RealVector& sorted, double gap)
{
    std::vector<std::vector<Index>> clusters;
    for (Index i = 0; i < sorted.size(); ++i) {
        if (clusters.empty() || sorted(i) - sorted(i - 1) > gap) {
            clusters.emplace_back();
        }
        clusters.back().push_back(i);
    }
    return clusters;
}

SpectralProjection spectral_projection_at_zero(const Matrix& a, const Tolerances& tol)
{
    if (a.rows() != a.cols()) {
        throw DomainError("spectral_projection_at_zero: matrix is not square");
    }
    const Index n = a.rows();
    SpectralProjection out;
    const double scale = std::max(1.0, a.norm());

    Eigen::ComplexEigenSolver<Matrix> eig(a, false);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("spectral_projection_at_zero: Schur decomposition failed");
    }
    for (Index i = 0; i < n; ++i) {
        if (std::abs(eig.eigenvalues()(i)) <= tol.cluster_gap * scale) {
            ++out.algebraic_multiplicity;
        }
    }

    const Matrix right = nullspace(a, tol);
    const Matrix left = nullspace(a.adjoint(), tol);
    out.geometric_multiplicity = right.cols();
    if (left.cols() != right.cols()) {
        throw NumericalError("spectral_projection_at_zero: left and right kernels differ in dimension");
    }
    if (out.algebraic_multiplicity != out.geometric_multiplicity) {
        throw NumericalError("spectral_projection_at_zero: eigenvalue 0 is defective (algebraic " +
                             std::to_string(out.algebraic_multiplicity) + " vs geometric " +
                             std::to_string(out.geometric_multiplicity) + ")");
    }
    if (right.cols() == 0) {
        out.projector = Matrix::Zero(n, n);
        return out;
    }
    const Matrix gram = left.adjoint() * right;
    Eigen::JacobiSVD<Matrix> svd(gram);
    const double smin = svd.singularValues().minCoeff();
    if (smin <= std::sqrt(tol.rank_rel)) {
        throw NumericalError("spectral_projection_at_zero: left/right kernels nearly orthogonal (Jordan defect)",
                             smin);
    }
    out.projector = right * gram.inverse() * left.adjoint();
    out.idempotency_residual = (out.projector * out.projector - out.projector).norm();
    return out;
}

double spectral_abscissa(const Matrix& a)
{
    if (a.size() == 0) return -std::numeric_limits<double>::infinity();
    Eigen::ComplexEigenSolver<Matrix> eig(a, false);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("spectral_abscissa: eigensolver failed");
    }
    return eig.eigenvalues().real().maxCoeff();
}

} // namespace qmsdf
