#include "qmsdf/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "qmsdf/dfspaces.hpp"
#include "qmsdf/io.hpp"
#include "qmsdf/states.hpp"
#include "qmsdf/structure.hpp"

namespace qmsdf {

using nlohmann::json;

namespace {

void merge(ResidualLedger& into, const ResidualLedger& from)
{
    for (const auto& [name, value] : from) into[name] = value;
}

RealVector spectrum(const Matrix& herm, const Tolerances& tol)
{
    return hermitian_eig(hermitian_part(herm), tol).values;
}

std::string format_vector(const RealVector& v)
{
    std::ostringstream out;
    out << std::setprecision(6) << '[';
    for (Index i = 0; i < v.size(); ++i) {
        if (i > 0) out << ", ";
        // Avoid printing -0.
        out << (std::abs(v(i)) < 5e-13 ? 0.0 : v(i));
    }
    out << ']';
    return out.str();
}

std::string format_complex(Complex z)
{
    std::ostringstream out;
    out << std::setprecision(6) << z.real();
    if (std::abs(z.imag()) > 0.0) out << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return out.str();
}

} // namespace

Report analyze(const GkslGenerator& gen, const AnalysisOptions& options)
{
    const Tolerances& tol = options.tol;
    tol.validate();
    Rng rng(options.seed);
    const Index d = gen.dim();

    Report out;
    out.seed = options.seed;
    out.tol = tol;
    out.dim = d;
    out.warnings = gen.warnings();

    const Superoperator l = lindbladian(gen);
    out.residuals["gksl.unital"] = l.apply(identity(d)).norm();
    const Superoperator predual = predual_lindbladian(gen);
    out.residuals["gksl.trace_preserving"] = (vec(identity(d)).adjoint() * predual.mat).norm();

    const StarAlgebra nt = decoherence_free_subalgebra(gen, tol);
    out.nt_dim = nt.size();
    out.residuals["nt.star_algebra"] = star_algebra_residuals(nt).max();

    const FixedPointSpace ft = fixed_point_space(gen, nt, tol);
    out.ft_dim = static_cast<Index>(ft.basis.size());
    out.ft_is_algebra = ft.is_algebra;
    out.ft_contained_in_nt = ft.contained_in_nt;
    out.ft_product_defect = ft.closure_residual;
    out.ft_containment_defect = ft.containment_residual;
    if (ft.is_algebra) {
        out.residuals["ft.product_closure"] = ft.closure_residual;
        out.residuals["ft.containment_in_nt"] = ft.containment_residual;
    }

    const AtomicDecomposition decomp = decompose(gen, nt, rng, tol);
    merge(out.residuals, decomp.residuals);
    for (const auto& b : decomp.blocks) out.blocks.push_back({b.dim_k, b.dim_m, spectrum(b.K, tol)});

    const DfDaSplit split = build_df_da(gen, decomp, tol);
    merge(out.residuals, split.residuals);

    const RecurrentProjection rec = recurrent_projection(gen, tol);
    out.faithful_exists = rec.faithful_exists;
    out.p_R_rank = static_cast<Index>(std::llround(rec.p_R.trace().real()));
    out.residuals["states.p_R_maximality"] = rec.maximality_residual;

    if (rec.faithful_exists) {
        const InvariantStateStructure structure = analyze_invariant_state(gen, decomp, rec.rho_bar, tol);
        StatesSummary states;
        for (const auto& b : structure.blocks) {
            states.weights.push_back(b.weight);
            states.sigma_spectra.push_back(spectrum(b.sigma, tol));
            states.tau_spectra.push_back(spectrum(b.tau, tol));
        }
        out.states = std::move(states);
        merge(out.residuals, structure.residuals);

        const EidCertificate eid = eid_certificate(gen, nt, decomp, rng, tol);
        out.eid.faithful_exists = true;
        out.eid.eid_holds = eid.eid_holds;
        out.eid.m2_dim = eid.m2_dim;
        if (std::isfinite(eid.spectral_abscissa_m2)) out.eid.spectral_abscissa_m2 = eid.spectral_abscissa_m2;
        out.eid.reason = eid.reason;
        merge(out.residuals, eid.residuals);
    } else {
        out.eid.reason = "no faithful invariant state; reduce by p_R and retry";
        out.notes.push_back("No faithful invariant state: invariant-state structure and EID need the p_R-reduced "
                            "system (rerun with --reduce-pr).");
    }

    out.df = df_subsystems(gen, decomp, rng, tol);
    merge(out.residuals, out.df.residuals);

    if (options.reduce_pr && !rec.faithful_exists) {
        AnalysisOptions inner = options;
        inner.reduce_pr = false;
        out.reduced.push_back(analyze(reduce(gen, rec.p_R, tol), inner));
    }
    return out;
}

json to_json(const Report& report)
{
    json out;
    out["seed"] = report.seed;
    out["tolerances"] = tolerances_to_json(report.tol);
    out["dim"] = report.dim;
    out["warnings"] = report.warnings;
    out["notes"] = report.notes;

    json blocks = json::array();
    for (const auto& b : report.blocks) {
        blocks.push_back({{"dim_k", b.dim_k}, {"dim_m", b.dim_m}, {"K_spectrum", real_vector_to_json(b.k_spectrum)}});
    }
    out["nt"] = {{"dim", report.nt_dim}, {"blocks", std::move(blocks)}};
    out["ft"] = {{"dim", report.ft_dim},
                 {"is_algebra", report.ft_is_algebra},
                 {"contained_in_nt", report.ft_contained_in_nt},
                 {"product_defect", report.ft_product_defect},
                 {"containment_defect", report.ft_containment_defect}};

    json states = {{"faithful_exists", report.faithful_exists}, {"p_R_rank", report.p_R_rank}};
    if (report.states) {
        json per_block = json::array();
        for (std::size_t i = 0; i < report.states->weights.size(); ++i) {
            per_block.push_back({{"weight", report.states->weights[i]},
                                 {"sigma_spectrum", real_vector_to_json(report.states->sigma_spectra[i])},
                                 {"tau_spectrum", real_vector_to_json(report.states->tau_spectra[i])}});
        }
        states["blocks"] = std::move(per_block);
    }
    out["states"] = std::move(states);

    json eid = {{"faithful_exists", report.eid.faithful_exists},
                {"eid_holds", report.eid.eid_holds},
                {"m2_dim", report.eid.m2_dim},
                {"reason", report.eid.reason}};
    eid["spectral_abscissa_m2"] =
        report.eid.spectral_abscissa_m2 ? json(*report.eid.spectral_abscissa_m2) : json(nullptr);
    out["eid"] = std::move(eid);

    json entries = json::array();
    for (const auto& e : report.df.entries) {
        json lambda = json::array();
        for (const auto& z : e.lambda) lambda.push_back(complex_to_json(z));
        entries.push_back({{"block", e.block},
                           {"dim_k", e.dim_k},
                           {"dim_m", e.dim_m},
                           {"kind", to_string(e.kind)},
                           {"lambda", std::move(lambda)}});
    }
    out["df"] = {{"entries", std::move(entries)},
                 {"merged_subspaces", report.df.merged_subspaces},
                 {"merged_dynamics_residual", report.df.merged_dynamics_residual},
                 {"nonreal_scalars", report.df.nonreal_scalars}};

    json residuals = json::object();
    for (const auto& [name, value] : report.residuals) residuals[name] = value;
    out["residuals"] = std::move(residuals);

    if (!report.reduced.empty()) out["reduced"] = to_json(report.reduced.front());
    return out;
}

std::string to_text(const Report& report)
{
    std::ostringstream out;
    out << "dimension            " << report.dim << "\n";
    out << "seed                 " << report.seed << "\n";
    for (const auto& w : report.warnings) out << "warning: " << w << "\n";

    out << "\nN(T)                 dim " << report.nt_dim << ", " << report.blocks.size() << " central block(s)\n";
    for (std::size_t i = 0; i < report.blocks.size(); ++i) {
        const auto& b = report.blocks[i];
        out << "  block " << i << "  dim_k " << b.dim_k << "  dim_m " << b.dim_m
            << "  spec K " << format_vector(b.k_spectrum) << "\n";
    }
    out << "F(T)                 dim " << report.ft_dim << ", " << (report.ft_is_algebra ? "algebra" : "not an algebra")
        << (report.ft_contained_in_nt ? ", inside N(T)" : ", not inside N(T)") << "\n";

    out << "\ninvariant states     p_R rank " << report.p_R_rank << ", faithful state "
        << (report.faithful_exists ? "exists" : "absent") << "\n";
    if (report.states) {
        for (std::size_t i = 0; i < report.states->weights.size(); ++i) {
            out << "  block " << i << "  weight " << std::setprecision(6) << report.states->weights[i]
                << "  spec sigma " << format_vector(report.states->sigma_spectra[i]) << "  spec tau "
                << format_vector(report.states->tau_spectra[i]) << "\n";
        }
    }

    out << "\nEID                  " << (report.eid.eid_holds ? "holds" : "does not hold");
    if (report.eid.faithful_exists) out << ", dim M_2 " << report.eid.m2_dim;
    if (report.eid.spectral_abscissa_m2) {
        out << ", abscissa " << std::setprecision(6) << *report.eid.spectral_abscissa_m2;
    }
    out << "\n";
    if (!report.eid.reason.empty()) out << "  reason: " << report.eid.reason << "\n";

    out << "\nDF subsystems\n";
    for (const auto& e : report.df.entries) {
        out << "  block " << e.block << "  " << to_string(e.kind) << "  dim_k " << e.dim_k << "  dim_m " << e.dim_m;
        if (!e.lambda.empty()) {
            out << "  lambda (";
            for (std::size_t l = 0; l < e.lambda.size(); ++l) {
                if (l > 0) out << ", ";
                out << format_complex(e.lambda[l]);
            }
            out << ")";
        }
        out << "\n";
    }
    for (const auto& group : report.df.merged_subspaces) {
        out << "  subspace group {";
        for (std::size_t i = 0; i < group.size(); ++i) out << (i > 0 ? ", " : "") << group[i];
        out << "}\n";
    }
    if (report.df.nonreal_scalars) out << "  note: some scalar noise values are not real\n";

    for (const auto& n : report.notes) out << "\nnote: " << n << "\n";

    out << "\nresiduals\n";
    for (const auto& [name, value] : report.residuals) {
        out << "  " << std::left << std::setw(40) << name << std::scientific << std::setprecision(2) << value
            << std::defaultfloat << "\n";
    }
    if (!report.reduced.empty()) {
        out << "\n=== reduced to range(p_R) ===\n" << to_text(report.reduced.front());
    }
    return out.str();
}

} // namespace qmsdf
