#include "qmsdf/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

#include "qmsdf/errors.hpp"

namespace qmsdf {

namespace {

constexpr int kMaxDraws = 5;

const Complex kI{0.0, 1.0};

// Hermitian and anti-Hermitian parts of each element; they span the same
// real form of a *-closed space.
MatrixList hermitian_generators(const MatrixList& basis, double cutoff)
{
    MatrixList out;
    for (const auto& b : basis) {
        Matrix re = hermitian_part(b);
        Matrix im = (b - b.adjoint()) / (2.0 * kI);
        if (re.norm() > cutoff) out.push_back(std::move(re));
        if (im.norm() > cutoff) out.push_back(std::move(im));
    }
    return out;
}

Matrix random_real_combination(const MatrixList& hermitians, Index d, Rng& rng)
{
    Matrix h = Matrix::Zero(d, d);
    for (const auto& g : hermitians) h += rng.symmetric() * g;
    return hermitian_part(h);
}

// Eigenvalue clusters of a generic element, accepted only when the number of
// clusters matches and neighbouring clusters are well separated.
struct Clustering {
    HermitianEig eig;
    std::vector<std::vector<Index>> clusters;
};

bool cluster_generic(const Matrix& h, Index expected, const Tolerances& tol, Clustering& out)
{
    out.eig = hermitian_eig(h, tol);
    const RealVector& values = out.eig.values;
    const double spread = values(values.size() - 1) - values(0);
    if (expected == 1) {
        out.clusters = {std::vector<Index>(static_cast<std::size_t>(values.size()))};
        std::iota(out.clusters[0].begin(), out.clusters[0].end(), Index{0});
        return spread <= tol.cluster_gap * std::max(1.0, h.norm());
    }
    if (spread <= 0.0) return false;
    out.clusters = cluster_sorted(values, tol.cluster_gap * std::max(1.0, spread));
    if (static_cast<Index>(out.clusters.size()) != expected) return false;
    // Nearly-touching clusters make the spectral projections unreliable.
    const double safe_gap = std::sqrt(tol.cluster_gap) * spread;
    for (std::size_t c = 1; c < out.clusters.size(); ++c) {
        if (values(out.clusters[c].front()) - values(out.clusters[c - 1].back()) < safe_gap) return false;
    }
    return true;
}

Matrix cluster_columns(const Clustering& c, std::size_t which)
{
    const auto& idx = c.clusters[which];
    Matrix cols(c.eig.vectors.rows(), static_cast<Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
        cols.col(static_cast<Index>(j)) = c.eig.vectors.col(idx[j]);
    }
    return cols;
}

Index first_touched_index(const Matrix& p, double tol)
{
    for (Index i = 0; i < p.rows(); ++i) {
        if (std::abs(p(i, i)) > tol) return i;
    }
    return p.rows();
}

// Lexicographic comparison of entries, used only to break exact ties.
bool entries_less(const Matrix& a, const Matrix& b)
{
    constexpr double eps = 1e-6;
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) {
            const Complex x = a(i, j);
            const Complex y = b(i, j);
            if (std::abs(x.real() - y.real()) > eps) return x.real() < y.real();
            if (std::abs(x.imag() - y.imag()) > eps) return x.imag() < y.imag();
        }
    }
    return false;
}

Index integer_rank(const Matrix& p)
{
    return static_cast<Index>(std::llround(p.trace().real()));
}

} // namespace

MatrixList minimal_central_projections(const StarAlgebra& algebra, Rng& rng, const Tolerances& tol)
{
    const Index d = algebra.dim();
    const StarAlgebra z = center(algebra, tol);
    if (z.size() == 1) {
        return {identity(d)};
    }
    const MatrixList hermitians = hermitian_generators(z.basis(), tol.rank_rel);
    for (int draw = 0; draw < kMaxDraws; ++draw) {
        Clustering c;
        if (!cluster_generic(random_real_combination(hermitians, d, rng), z.size(), tol, c)) continue;
        MatrixList projections;
        bool central = true;
        for (std::size_t k = 0; k < c.clusters.size(); ++k) {
            const Matrix v = cluster_columns(c, k);
            Matrix p = v * v.adjoint();
            if (!contains(z, p, tol).member) {
                central = false;
                break;
            }
            projections.push_back(std::move(p));
        }
        if (central) return projections;
    }
    throw NumericalError("minimal_central_projections: no generic central element separated the blocks after " +
                         std::to_string(kMaxDraws) + " draws");
}

BlockFactorization factorize_block(const StarAlgebra& algebra, const Matrix& p, Rng& rng, const Tolerances& tol)
{
    const Matrix range = projection_range(p);
    const Index rank = range.cols();
    if (rank == 0) {
        throw DomainError("factorize_block: projection is zero");
    }

    MatrixList corner;
    corner.reserve(algebra.basis().size());
    for (const auto& b : algebra.basis()) corner.push_back(range.adjoint() * b * range);
    const StarAlgebra compressed = StarAlgebra::from_span(rank, corner, tol);

    const Index size = compressed.size();
    const auto dim_k = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(size))));
    if (dim_k * dim_k != size) {
        throw StructuralError("structure", "dim(pAp) = " + std::to_string(size) + " is not a perfect square",
                              static_cast<double>(size));
    }
    if (rank % dim_k != 0) {
        throw StructuralError("structure", "rank(p) is not a multiple of dim k", static_cast<double>(rank));
    }
    const Index dim_m = rank / dim_k;
    if (const Index zsize = center(compressed, tol).size(); zsize != 1) {
        throw StructuralError("structure", "p A p is not a factor (center dimension " + std::to_string(zsize) + ")",
                              static_cast<double>(zsize));
    }

    // Columns of `frame` form the product basis: column r·m + s is the image of
    // |r> ⊗ |s> under U_p*.
    Matrix frame = identity(rank);
    if (dim_k > 1) {
        const MatrixList hermitians = hermitian_generators(compressed.basis(), tol.rank_rel);
        bool built = false;
        for (int draw = 0; draw < kMaxDraws && !built; ++draw) {
            Clustering c;
            if (!cluster_generic(random_real_combination(hermitians, rank, rng), dim_k, tol, c)) continue;
            bool equal_sizes = true;
            for (const auto& cl : c.clusters) equal_sizes = equal_sizes && static_cast<Index>(cl.size()) == dim_m;
            if (!equal_sizes) continue;

            Matrix connector_source = Matrix::Zero(rank, rank);
            for (const auto& b : compressed.basis()) connector_source += rng.complex_normal() * b;

            const Matrix q0 = cluster_columns(c, 0);
            frame.leftCols(dim_m) = q0;
            built = true;
            for (std::size_t r = 1; r < c.clusters.size() && built; ++r) {
                const Matrix qr = cluster_columns(c, r);
                const Matrix link = qr.adjoint() * connector_source * q0;
                Eigen::JacobiSVD<Matrix> svd(link, Eigen::ComputeFullU | Eigen::ComputeFullV);
                const RealVector& s = svd.singularValues();
                // In exact arithmetic q_r a q_0 is a multiple of a partial isometry.
                if (s(0) <= tol.rank_rel * connector_source.norm() || s(s.size() - 1) < 0.5 * s(0)) {
                    built = false;
                    break;
                }
                frame.middleCols(static_cast<Index>(r) * dim_m, dim_m) =
                    qr * (svd.matrixU() * svd.matrixV().adjoint());
            }
        }
        if (!built) {
            throw NumericalError("factorize_block: could not build matrix units after " + std::to_string(kMaxDraws) +
                                 " draws");
        }
    }

    BlockFactorization out;
    out.dim_k = dim_k;
    out.dim_m = dim_m;
    out.unitary = (range * frame).adjoint();

    // U (pAp) U* must coincide with B(k) ⊗ 1_m.
    MatrixList images;
    images.reserve(algebra.basis().size());
    for (const auto& b : algebra.basis()) images.push_back(out.unitary * b * out.unitary.adjoint());
    const MatrixList image_basis = hs_orthonormalize(images, tol);
    MatrixList target;
    const Matrix id_m = identity(dim_m) / std::sqrt(static_cast<double>(dim_m));
    for (Index j = 0; j < dim_k; ++j) {
        for (Index i = 0; i < dim_k; ++i) {
            Matrix e = Matrix::Zero(dim_k, dim_k);
            e(i, j) = 1.0;
            target.push_back(kron(e, id_m));
        }
    }
    out.residual = subspace_distance(stack_vecs(image_basis), stack_vecs(target));
    if (out.residual > tol.residual) {
        throw NumericalError("factorize_block: U (pAp) U* differs from B(k) x 1", out.residual);
    }
    return out;
}

AtomicDecomposition atomic_decomposition(const StarAlgebra& algebra, Rng& rng, const Tolerances& tol)
{
    const Index d = algebra.dim();
    MatrixList projections = minimal_central_projections(algebra, rng, tol);

    std::vector<std::size_t> order(projections.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Index ra = integer_rank(projections[a]);
        const Index rb = integer_rank(projections[b]);
        if (ra != rb) return ra > rb;
        const Index ia = first_touched_index(projections[a], tol.residual);
        const Index ib = first_touched_index(projections[b], tol.residual);
        if (ia != ib) return ia < ib;
        return entries_less(projections[a], projections[b]);
    });

    AtomicDecomposition out;
    out.unitary = Matrix::Zero(d, d);
    Index offset = 0;
    double factor_residual = 0.0;
    for (const std::size_t idx : order) {
        const BlockFactorization f = factorize_block(algebra, projections[idx], rng, tol);
        factor_residual = std::max(factor_residual, f.residual);
        Block block;
        block.projection = projections[idx];
        block.unitary = f.unitary;
        block.dim_k = f.dim_k;
        block.dim_m = f.dim_m;
        block.offset = offset;
        if (offset + block.rank() > d) {
            throw StructuralError("structure", "block dimensions exceed the ambient dimension",
                                  static_cast<double>(offset + block.rank()));
        }
        out.unitary.middleRows(offset, block.rank()) = f.unitary;
        offset += block.rank();
        out.blocks.push_back(std::move(block));
    }
    if (offset != d) {
        throw StructuralError("structure", "sum of dim k * dim m differs from d", static_cast<double>(d - offset));
    }

    Matrix total = Matrix::Zero(d, d);
    double orthogonality = 0.0;
    for (std::size_t i = 0; i < out.blocks.size(); ++i) {
        total += out.blocks[i].projection;
        for (std::size_t j = i + 1; j < out.blocks.size(); ++j) {
            orthogonality =
                std::max(orthogonality, (out.blocks[i].projection * out.blocks[j].projection).norm());
        }
    }
    out.residuals["structure.partition_of_unity"] = (total - identity(d)).norm();
    out.residuals["structure.projection_orthogonality"] = orthogonality;
    out.residuals["structure.unitarity"] = (out.unitary * out.unitary.adjoint() - identity(d)).norm();
    out.residuals["structure.factor_form"] = factor_residual;
    for (const auto& [name, value] : out.residuals) {
        if (value > tol.residual) {
            throw StructuralError("structure", name + " exceeds tolerance", value);
        }
    }
    return out;
}

AtomicDecomposition extract_block_operators(const GkslGenerator& gen, AtomicDecomposition decomp,
                                            const Tolerances& tol)
{
    const Index d = gen.dim();
    if (decomp.dim() != d) {
        throw DomainError("extract_block_operators: decomposition and generator dimensions differ");
    }
    const Matrix id = identity(d);
    const Matrix& h = gen.hamiltonian();
    double leakage = 0.0;
    double noise_residual = 0.0;
    double hamiltonian_residual = 0.0;

    for (std::size_t i = 0; i < decomp.blocks.size(); ++i) {
        Block& block = decomp.blocks[i];
        const Matrix& p = block.projection;
        const Matrix q = id - p;
        const Matrix& u = block.unitary;
        const TensorDims dims = block.dims();
        const Matrix id_k = identity(block.dim_k);
        const Matrix id_m = identity(block.dim_m);

        block.Ms.clear();
        for (std::size_t l = 0; l < gen.noise().size(); ++l) {
            const Matrix& op = gen.noise()[l];
            const double scale = std::max(1.0, op.norm());
            const double leak = ((p * op * q).norm() + (q * op * p).norm()) / scale;
            leakage = std::max(leakage, leak);
            if (leak > tol.residual) {
                throw StructuralError("structure",
                                      "noise operator " + std::to_string(l) + " couples central block " +
                                          std::to_string(i) + " to its complement",
                                      leak);
            }
            const Matrix local = u * op * u.adjoint();
            Matrix m = partial_trace(local, TraceOut::left, dims) / static_cast<double>(block.dim_k);
            const double res = (local - kron(id_k, m)).norm() / scale;
            noise_residual = std::max(noise_residual, res);
            if (res > tol.residual) {
                throw StructuralError("structure",
                                      "U p L p U* is not of the form 1 (x) M in block " + std::to_string(i), res);
            }
            block.Ms.push_back(std::move(m));
        }

        const double hscale = std::max(1.0, h.norm());
        const double hleak = ((p * h * q).norm() + (q * h * p).norm()) / hscale;
        leakage = std::max(leakage, hleak);
        if (hleak > tol.residual) {
            throw StructuralError("structure", "H couples central block " + std::to_string(i) + " to its complement",
                                  hleak);
        }
        const Matrix local = u * h * u.adjoint();
        const Matrix k_part = partial_trace(local, TraceOut::right, dims) / static_cast<double>(block.dim_m);
        const Matrix m_part = partial_trace(local, TraceOut::left, dims) / static_cast<double>(block.dim_k);
        block.K = hermitian_part(k_part);
        block.M0 = hermitian_part(m_part - (m_part.trace() / static_cast<double>(block.dim_m)) * id_m);
        const double res = (local - kron(block.K, id_m) - kron(id_k, block.M0)).norm() / hscale;
        hamiltonian_residual = std::max(hamiltonian_residual, res);
        if (res > tol.residual) {
            throw StructuralError("structure",
                                  "U p H p U* is not of the form K (x) 1 + 1 (x) M0 in block " + std::to_string(i),
                                  res);
        }
    }
    decomp.residuals["structure.block_leakage"] = leakage;
    decomp.residuals["structure.noise_factorization"] = noise_residual;
    decomp.residuals["structure.hamiltonian_factorization"] = hamiltonian_residual;
    decomp.has_operators = true;
    return decomp;
}

AtomicDecomposition decompose(const GkslGenerator& gen, const StarAlgebra& nt, Rng& rng, const Tolerances& tol)
{
    return extract_block_operators(gen, atomic_decomposition(nt, rng, tol), tol);
}

GkslGenerator block_generator(const Block& block, const Tolerances& tol)
{
    return GkslGenerator(block.M0, block.Ms, tol);
}

Matrix decoherence_free_hamiltonian(const AtomicDecomposition& decomp)
{
    const Index d = decomp.dim();
    Matrix k = Matrix::Zero(d, d);
    for (const auto& block : decomp.blocks) {
        k.block(block.offset, block.offset, block.rank(), block.rank()) = kron(block.K, identity(block.dim_m));
    }
    return k;
}

GkslGenerator decoherence_affected_generator(const AtomicDecomposition& decomp, const Tolerances& tol)
{
    if (!decomp.has_operators) {
        throw PreconditionError("decoherence_affected_generator: block operators have not been extracted");
    }
    const Index d = decomp.dim();
    Matrix h = Matrix::Zero(d, d);
    const std::size_t count = decomp.blocks.empty() ? 0 : decomp.blocks.front().Ms.size();
    MatrixList noise(count, Matrix::Zero(d, d));
    for (const auto& block : decomp.blocks) {
        const Matrix id_k = identity(block.dim_k);
        h.block(block.offset, block.offset, block.rank(), block.rank()) = kron(id_k, block.M0);
        for (std::size_t l = 0; l < count; ++l) {
            noise[l].block(block.offset, block.offset, block.rank(), block.rank()) = kron(id_k, block.Ms[l]);
        }
    }
    return GkslGenerator(std::move(h), std::move(noise), tol);
}

DfDaSplit build_df_da(const GkslGenerator& gen, const AtomicDecomposition& decomp, const Tolerances& tol)
{
    if (!decomp.has_operators) {
        throw PreconditionError("build_df_da: block operators have not been extracted");
    }
    const Index d = gen.dim();
    const Matrix id = identity(d);
    const Matrix& u = decomp.unitary;

    DfDaSplit out;
    out.k_total = decoherence_free_hamiltonian(decomp);
    out.df = {d, kI * (sandwich_superop(out.k_total, id) - sandwich_superop(id, out.k_total))};

    const Matrix forward = sandwich_superop(u, u.adjoint());
    const Matrix backward = sandwich_superop(u.adjoint(), u);
    const Matrix transformed = forward * lindbladian(gen).mat * backward;
    out.da = {d, transformed - out.df.mat};

    const double scale = std::max(1.0, out.df.mat.norm() * out.da.mat.norm());
    const double commutator = (out.df.mat * out.da.mat - out.da.mat * out.df.mat).norm() / scale;
    out.residuals["df_da.commutator"] = commutator;
    if (commutator > tol.residual) {
        throw StructuralError("structure", "[L_df, L_da] does not vanish", commutator);
    }

    const Matrix da_reference = lindbladian(decoherence_affected_generator(decomp, tol)).mat;
    out.residuals["df_da.da_generator"] = (out.da.mat - da_reference).norm() / std::max(1.0, transformed.norm());

    double product_residual = 0.0;
    double unitary_residual = 0.0;
    for (const double t : {0.5, 2.0}) {
        const Matrix full = matexp(transformed, t);
        const Matrix df = matexp(out.df.mat, t);
        const Matrix da = matexp(out.da.mat, t);
        product_residual = std::max(product_residual, (full - df * da).norm() / std::max(1.0, full.norm()));
        const Matrix w = matexp(kI * out.k_total, t);
        unitary_residual = std::max(unitary_residual, (df - sandwich_superop(w, w.adjoint())).norm());
    }
    out.residuals["df_da.exponential_factorization"] = product_residual;
    out.residuals["df_da.unitary_df_action"] = unitary_residual;
    return out;
}

} // namespace qmsdf
