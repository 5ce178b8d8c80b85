// qmsdf command-line front end.
//
//   qmsdf analyze <file> [--json PATH] [--tol-rank X] [--tol-residual X] [--seed N] [--reduce-pr]
//   qmsdf fixtures generate generic   --states N --rates i:j:g,... [--kappa k0,k1,...] -o FILE
//   qmsdf fixtures generate circulant --d D --n N [--z1 re,im] [--z2 re,im] [--hamiltonian zero|tridiagonal] -o FILE
//   qmsdf simulate <file> --t T --state-index k
//
// Exit codes: 0 success, 2 structural or numerical failure, 3 bad input.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "qmsdf/errors.hpp"
#include "qmsdf/io.hpp"
#include "qmsdf/models.hpp"
#include "qmsdf/report.hpp"

namespace {

constexpr int kExitFailure = 2;
constexpr int kExitBadInput = 3;

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& s)
{
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw qmsdf::ParseError("not a number: " + s);
    return v;
}

qmsdf::Complex parse_complex(const std::string& text)
{
    const auto parts = split(text, ',');
    if (parts.size() == 1) return {to_double(parts[0]), 0.0};
    if (parts.size() == 2) return {to_double(parts[0]), to_double(parts[1])};
    throw qmsdf::ParseError("complex value must be re or re,im: " + text);
}

// QMS_SEED, then the file, then the built-in default; --seed overrides all.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const std::optional<std::uint64_t>& file)
{
    if (flag) return *flag;
    if (const char* env = std::getenv("QMS_SEED"); env != nullptr && *env != '\0') {
        try {
            return std::stoull(env, nullptr, 0);
        } catch (const std::exception&) {
            throw qmsdf::ParseError(std::string("QMS_SEED is not an unsigned integer: ") + env);
        }
    }
    return file.value_or(qmsdf::kDefaultSeed);
}

struct AnalyzeArgs {
    std::string file;
    std::string json_path;
    std::optional<double> tol_rank;
    std::optional<double> tol_residual;
    std::optional<std::uint64_t> seed;
    bool reduce_pr = false;
};

int run_analyze(const AnalyzeArgs& args)
{
    const qmsdf::ProblemFile problem = qmsdf::load_problem(args.file);
    qmsdf::AnalysisOptions options;
    options.tol = problem.options.tol;
    if (args.tol_rank) options.tol.rank_rel = *args.tol_rank;
    if (args.tol_residual) options.tol.residual = *args.tol_residual;
    options.tol.validate();
    options.seed = resolve_seed(args.seed, problem.options.seed);
    options.reduce_pr = args.reduce_pr;

    const qmsdf::Report report = qmsdf::analyze(problem.generator(), options);
    if (!args.json_path.empty()) {
        std::ofstream out(args.json_path);
        if (!out) throw qmsdf::ParseError("cannot write " + args.json_path);
        out << qmsdf::to_json(report).dump(2) << '\n';
    }
    std::cout << qmsdf::to_text(report);
    return 0;
}

struct GenericArgs {
    qmsdf::Index states = 0;
    std::string rates;
    std::string kappa;
    std::string out;
};

// Writes a generated model, flushing round-off dust from the Fourier transform to zero.
void write_model(const std::string& path, const qmsdf::GkslGenerator& gen)
{
    constexpr double dust = 1e-14;
    const auto chop = [](qmsdf::Matrix m) {
        for (qmsdf::Index i = 0; i < m.size(); ++i) {
            auto& z = m.data()[i];
            z = {std::abs(z.real()) < dust ? 0.0 : z.real(), std::abs(z.imag()) < dust ? 0.0 : z.imag()};
        }
        return m;
    };
    qmsdf::ProblemFile problem = qmsdf::problem_from_generator(gen);
    problem.H = chop(problem.H);
    for (auto& l : problem.L) l = chop(l);
    qmsdf::save_problem(path, problem);
    std::cout << "wrote " << path << "\n";
}

int run_generate_generic(const GenericArgs& args)
{
    if (args.states < 1) throw qmsdf::DomainError("--states must be positive");
    qmsdf::GenericSpec spec;
    spec.gamma = qmsdf::RealMatrix::Zero(args.states, args.states);
    spec.kappa = qmsdf::RealVector::Zero(args.states);
    for (const auto& entry : split(args.rates, ',')) {
        const auto parts = split(entry, ':');
        if (parts.size() != 3) throw qmsdf::ParseError("rate must be i:j:gamma, got " + entry);
        const auto i = static_cast<qmsdf::Index>(std::stoll(parts[0]));
        const auto j = static_cast<qmsdf::Index>(std::stoll(parts[1]));
        if (i < 0 || j < 0 || i >= args.states || j >= args.states) {
            throw qmsdf::DomainError("rate index out of range: " + entry);
        }
        spec.gamma(i, j) = to_double(parts[2]);
    }
    const auto kappa = split(args.kappa, ',');
    if (!kappa.empty() && static_cast<qmsdf::Index>(kappa.size()) != args.states) {
        throw qmsdf::DomainError("--kappa needs one value per state");
    }
    for (std::size_t i = 0; i < kappa.size(); ++i) spec.kappa(static_cast<qmsdf::Index>(i)) = to_double(kappa[i]);
    write_model(args.out, qmsdf::build_generic(spec));
    return 0;
}

struct CirculantArgs {
    qmsdf::Index d = 0;
    qmsdf::Index n = 0;
    std::string z1 = "1";
    std::string z2 = "1";
    std::string hamiltonian = "zero";
    std::string out;
};

int run_generate_circulant(const CirculantArgs& args)
{
    qmsdf::CirculantSpec spec;
    spec.d = args.d;
    spec.n = args.n;
    spec.z1 = parse_complex(args.z1);
    spec.z2 = parse_complex(args.z2);
    if (args.hamiltonian == "tridiagonal") {
        if (spec.d < 2 || spec.n < 1 || spec.n >= spec.d) throw qmsdf::DomainError("circulant: need 1 <= n < d");
        spec.mode = qmsdf::CirculantHamiltonian::factor;
        spec.K = qmsdf::Matrix::Zero(spec.k(), spec.k());
        spec.M0 = qmsdf::circulant_tridiagonal_m0(spec.m());
    } else if (args.hamiltonian != "zero") {
        throw qmsdf::DomainError("--hamiltonian must be zero or tridiagonal");
    }
    write_model(args.out, qmsdf::build_circulant(spec));
    return 0;
}

struct SimulateArgs {
    std::string file;
    double t = 1.0;
    qmsdf::Index state_index = 0;
    int steps = 10;
};

int run_simulate(const SimulateArgs& args)
{
    const qmsdf::ProblemFile problem = qmsdf::load_problem(args.file);
    const qmsdf::GkslGenerator gen = problem.generator();
    const qmsdf::Index d = gen.dim();
    if (args.state_index < 0 || args.state_index >= d) throw qmsdf::DomainError("--state-index out of range");
    if (!(args.t > 0.0)) throw qmsdf::DomainError("--t must be positive");
    if (args.steps < 1) throw qmsdf::DomainError("--steps must be positive");

    const qmsdf::Superoperator predual = qmsdf::predual_lindbladian(gen);
    const qmsdf::Matrix limit_map =
        qmsdf::spectral_projection_at_zero(predual.mat, problem.options.tol).projector;
    qmsdf::Matrix rho = qmsdf::Matrix::Zero(d, d);
    rho(args.state_index, args.state_index) = 1.0;
    const qmsdf::Matrix limit = qmsdf::unvec(limit_map * qmsdf::vec(rho), d);

    std::cout << std::setw(12) << "t" << std::setw(20) << "trace distance" << "\n";
    const double dt = args.t / args.steps;
    const qmsdf::Matrix step = qmsdf::matexp(predual.mat, dt);
    qmsdf::Vector state = qmsdf::vec(rho);
    for (int i = 0; i <= args.steps; ++i) {
        if (i > 0) state = step * state;
        const double distance = 0.5 * qmsdf::trace_norm(qmsdf::unvec(state, d) - limit);
        std::cout << std::setw(12) << std::setprecision(6) << dt * i << std::setw(20) << std::scientific
                  << std::setprecision(6) << distance << std::defaultfloat << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"qmsdf: decoherence-free structure of finite-dimensional quantum Markov semigroups"};
    app.require_subcommand(1);

    AnalyzeArgs analyze;
    auto* cmd_analyze = app.add_subcommand("analyze", "Run the full analysis on a problem file");
    cmd_analyze->add_option("file", analyze.file, "Problem file (JSON)")->required();
    cmd_analyze->add_option("--json", analyze.json_path, "Write the full report as JSON");
    cmd_analyze->add_option("--tol-rank", analyze.tol_rank, "Relative singular-value cutoff");
    cmd_analyze->add_option("--tol-residual", analyze.tol_residual, "Residual bound for structural identities");
    cmd_analyze->add_option("--seed", analyze.seed, "Random seed (overrides QMS_SEED and the file)");
    cmd_analyze->add_flag("--reduce-pr", analyze.reduce_pr, "Also analyze the system reduced by p_R");

    auto* cmd_fixtures = app.add_subcommand("fixtures", "Fixture utilities");
    auto* cmd_generate = cmd_fixtures->add_subcommand("generate", "Write a model problem file");
    cmd_fixtures->require_subcommand(1);
    cmd_generate->require_subcommand(1);

    GenericArgs generic;
    auto* cmd_generic = cmd_generate->add_subcommand("generic", "Generic QMS from classical rates");
    cmd_generic->add_option("--states", generic.states, "Number of states")->required();
    cmd_generic->add_option("--rates", generic.rates, "Comma-separated i:j:gamma entries");
    cmd_generic->add_option("--kappa", generic.kappa, "Comma-separated energies, one per state");
    cmd_generic->add_option("-o,--out", generic.out, "Output file")->required();

    CirculantArgs circulant;
    auto* cmd_circulant = cmd_generate->add_subcommand("circulant", "Circulant QMS z1 J^n, z2 J^-n");
    cmd_circulant->add_option("--d", circulant.d, "Dimension")->required();
    cmd_circulant->add_option("--n", circulant.n, "Power of the shift")->required();
    cmd_circulant->add_option("--z1", circulant.z1, "re or re,im");
    cmd_circulant->add_option("--z2", circulant.z2, "re or re,im");
    cmd_circulant->add_option("--hamiltonian", circulant.hamiltonian, "zero or tridiagonal");
    cmd_circulant->add_option("-o,--out", circulant.out, "Output file")->required();

    SimulateArgs simulate;
    auto* cmd_simulate = app.add_subcommand("simulate", "Trace distance of T_*t(|k><k|) to its ergodic limit");
    cmd_simulate->add_option("file", simulate.file, "Problem file (JSON)")->required();
    cmd_simulate->add_option("--t", simulate.t, "Final time")->required();
    cmd_simulate->add_option("--state-index", simulate.state_index, "Basis state k")->required();
    cmd_simulate->add_option("--steps", simulate.steps, "Number of time steps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }

    try {
        if (cmd_analyze->parsed()) return run_analyze(analyze);
        if (cmd_generic->parsed()) return run_generate_generic(generic);
        if (cmd_circulant->parsed()) return run_generate_circulant(circulant);
        if (cmd_simulate->parsed()) return run_simulate(simulate);
    } catch (const qmsdf::StructuralError& e) {
        std::cerr << "structural error [" << e.module() << "]: " << e.what() << "\n";
        return kExitFailure;
    } catch (const qmsdf::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const qmsdf::PreconditionError& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return kExitFailure;
    } catch (const qmsdf::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const qmsdf::DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::out_of_range& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitBadInput;
}
