// report.hpp: end-to-end analysis pipeline and its text/JSON renderings

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qmsdf/decoherence.hpp"
#include "qmsdf/gksl.hpp"

namespace qmsdf {

struct AnalysisOptions {
    Tolerances tol;
    std::uint64_t seed = kDefaultSeed;
    bool reduce_pr = false;
};

struct BlockSummary {
    Index dim_k = 0;
    Index dim_m = 0;
    RealVector k_spectrum;
};

struct StatesSummary {
    std::vector<double> weights;
    std::vector<RealVector> sigma_spectra;
    std::vector<RealVector> tau_spectra;
};

struct EidSummary {
    bool faithful_exists = false;
    bool eid_holds = false;
    Index m2_dim = 0;
    std::optional<double> spectral_abscissa_m2; // absent when M_2 = {0} or not computed
    std::string reason;
};

struct Report {
    std::uint64_t seed = kDefaultSeed;
    Tolerances tol;
    Index dim = 0;
    std::vector<std::string> warnings;
    std::vector<std::string> notes;

    Index nt_dim = 0;
    std::vector<BlockSummary> blocks;
    Index ft_dim = 0;
    bool ft_is_algebra = false;
    bool ft_contained_in_nt = false;
    double ft_product_defect = 0.0;     // distance of F(T) products from F(T)
    double ft_containment_defect = 0.0; // distance of F(T) from N(T)

    bool faithful_exists = false;
    Index p_R_rank = 0;
    std::optional<StatesSummary> states;
    EidSummary eid;
    DfSubsystemReport df;

    ResidualLedger residuals;
    std::vector<Report> reduced; // at most one entry, the p_R-reduced system
};

// Runs the full pipeline. Throws StructuralError / NumericalError on failed
// identities and DomainError on invalid input.
Report analyze(const GkslGenerator& gen, const AnalysisOptions& options);

nlohmann::json to_json(const Report& report);
std::string to_text(const Report& report);

} // namespace qmsdf
