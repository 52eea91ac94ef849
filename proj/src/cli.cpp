#include "loclab/cli.hpp"

#include "loclab/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef LOCLAB_VERSION
#define LOCLAB_VERSION "0.0.0"
#endif

namespace loclab {

const char* version() { return LOCLAB_VERSION; }

Json to_json(const RunManifest& m) {
    Json j{{"tool", "loclab"},
           {"version", m.version},
           {"command", m.command},
           {"inputs", m.inputs},
           {"config", m.config}};
    if (m.duration_seconds) j["duration_seconds"] = *m.duration_seconds;
    return j;
}

const std::vector<CatalogEntry>& zoo_catalog() {
    static const std::vector<CatalogEntry> catalog{
        {"constant_pure", "family", "pure",
         "Discards A and prepares |0> on B; the environment keeps the branch <0|_A psi, "
         "renormalized.",
         "fails no_signaling and update_commutativity"},
        {"constant_mixed", "family", "mixed", "Discards A and prepares |0><0| on B.",
         "passes all axioms; certifies as a channel"},
        {"nonlinear_phase", "family", "pure",
         "Rotates A by exp(i theta <Z_A> Z_A), a state-dependent phase.",
         "fails update_commutativity"},
        {"transpose_mixed", "family", "mixed", "Transposes A and leaves the environment alone.",
         "invalid output on entangled inputs (min eigenvalue -1/2 on Phi+)"},
        {"constant", "map", "pure", "Sends every pure state to |0>.",
         "zero convex-linearity gap but not implemented by any linear operator"},
        {"renormalize", "map", "pure", "Squares each amplitude and renormalizes.",
         "positive convex-linearity and signaling gaps"},
        {"nonlinear_phase", "map", "pure", "psi -> exp(i theta <psi|Z|psi> Z) psi.",
         "positive convex-linearity and signaling gaps"},
    };
    return catalog;
}

namespace {

constexpr std::uint64_t kSaltConvex = 0xc0ffee;
constexpr std::uint64_t kSaltSteering = 0x57ee4;
constexpr std::uint64_t kSaltWitness = 0x1ea4;

struct Options {
    std::uint64_t seed = 0;
    bool seed_given = false;
    int trials = 200;
    double tol = 0.0;
    bool tol_given = false;
    std::vector<int> env_dims{1, 2, 3, 4};
    std::string format = "json";
    double theta = 0.7;
    int dim = 2;
    int pairs = 50;
    int scenarios = 20;
    bool timing = false;
    std::string input;
    std::string zoo_action;
    std::string zoo_name;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool is_zoo_ref(const std::string& s) { return s.rfind("zoo:", 0) == 0; }

Json load_spec(const std::string& input) {
    if (is_zoo_ref(input)) return Json{{"kind", "zoo"}, {"name", input.substr(4)}};
    return parse_json(read_file(input));
}

ZooParams zoo_params(const Options& o) { return ZooParams{o.dim, o.theta}; }

SamplingConfig sampling_config(const Options& o) {
    SamplingConfig cfg;
    cfg.trials = o.trials;
    cfg.env_dims = o.env_dims;
    cfg.seed = RngSeed{o.seed};
    if (o.tol_given) cfg.tolerance = o.tol;
    cfg.validate();
    return cfg;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

std::string fmt(double x) {
    std::ostringstream ss;
    ss.precision(6);
    ss << x;
    return ss.str();
}

void text_fragment(std::ostream& out, const AxiomFragment& f, double tol) {
    out << "  " << to_string(f.axiom) << ": " << (f.max_violation <= tol ? "pass" : "FAIL")
        << "  max_violation=" << fmt(f.max_violation) << "  evaluated=" << f.evaluated
        << "  skipped=" << f.skipped << "  invalid_outputs=" << f.invalid_outputs << '\n';
}

void text_witnesses(std::ostream& out, const std::vector<Witness>& ws) {
    for (const auto& w : ws) {
        out << "  witness: " << to_string(w.axiom) << " " << to_string(w.kind)
            << " trial=" << w.trial << " env_dim=" << w.env_dim << " gap=" << fmt(w.gap);
        if (w.min_eigenvalue) out << " min_eigenvalue=" << fmt(*w.min_eigenvalue);
        out << '\n';
    }
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

RunManifest manifest(const std::string& command, const Options& o, Json config,
                     const Timer& timer) {
    RunManifest m{command, {}, std::move(config), version(), std::nullopt};
    if (!o.input.empty()) m.inputs.push_back(o.input);
    if (o.timing) m.duration_seconds = timer.seconds();
    return m;
}

Json family_config(const SamplingConfig& cfg, const Options& o) {
    Json c = to_json(cfg);
    c["theta"] = o.theta;
    c["dim"] = o.dim;
    return c;
}

int cmd_check(const Options& o, std::ostream& out) {
    const Timer timer;
    const TransFamily family = family_from_json(load_spec(o.input), zoo_params(o));
    const SamplingConfig cfg = sampling_config(o);
    const AxiomReport report = check_all(family, cfg);
    const RunManifest m = manifest("check", o, family_config(cfg, o), timer);
    if (o.format == "text") {
        out << "check " << o.input << " (" << family.name() << ", " << to_string(family.theory())
            << "): " << (report.pass ? "pass" : "FAIL") << '\n';
        text_fragment(out, report.state_locality, cfg.tolerance);
        text_fragment(out, report.no_signaling, cfg.tolerance);
        text_fragment(out, report.update_commutativity, cfg.tolerance);
        text_witnesses(out, report.witnesses);
    } else {
        emit(out, Json{{"manifest", to_json(m)},
                       {"family", to_json(family)},
                       {"report", to_json(report)}});
    }
    return report.pass ? kExitPass : kExitViolation;
}

int cmd_extract(const Options& o, std::ostream& out) {
    const Timer timer;
    const TransFamily family = family_from_json(load_spec(o.input), zoo_params(o));
    const SamplingConfig cfg = sampling_config(o);
    const Certificate cert = certify(family, cfg);
    const RunManifest m = manifest("extract", o, family_config(cfg, o), timer);
    const bool ok = cert.verdict == Verdict::LocallyApplicable;
    if (o.format == "text") {
        out << "extract " << o.input << ": " << to_string(cert.verdict) << " ("
            << cert.classification << ")\n";
        if (cert.theory == TheoryTag::Pure) {
            out << "  isometry_defect=" << fmt(cert.isometry_defect) << '\n';
        } else {
            out << "  cp_defect=" << fmt(cert.cp_defect) << "  tp_defect=" << fmt(cert.tp_defect)
                << '\n';
        }
        out << "  equivalence_max_gap=" << fmt(cert.equivalence_max_gap) << '\n';
        text_witnesses(out, cert.witnesses);
    } else {
        emit(out, Json{{"manifest", to_json(m)},
                       {"family", to_json(family)},
                       {"certificate", to_json(cert)}});
    }
    return ok ? kExitPass : kExitViolation;
}

Ensemble uniform_basis_ensemble(const ComplexMatrix& basis) {
    const int d = static_cast<int>(basis.rows());
    std::vector<ComplexMatrix> kets;
    for (int i = 0; i < d; ++i) kets.emplace_back(basis.col(i));
    return Ensemble(d, std::vector<double>(d, 1.0 / d), std::move(kets));
}

ComplexMatrix fourier_matrix(int d) {
    ComplexMatrix f(d, d);
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(d)), 2.0 * M_PI * j * k / d);
        }
    }
    return f;
}

int cmd_gisin(const Options& o, std::ostream& out) {
    const Timer timer;
    const PureStateMap f = map_from_json(load_spec(o.input), zoo_params(o));
    if (o.pairs < 1) throw InvalidArgument("--pairs must be at least 1");
    if (o.scenarios < 0) throw InvalidArgument("--scenarios must be non-negative");
    const double tol = o.tol_given ? o.tol : kDefaultTolerance;
    const int d = f.dim_in();
    const RngSeed seed{o.seed};

    const double convex_gap = convex_linearity_gap(f, d, o.pairs, derive_seed(seed, kSaltConvex));

    const SteeringScenario canonical = build_steering_scenario(
        uniform_basis_ensemble(identity(d)), uniform_basis_ensemble(fourier_matrix(d)));
    const double canonical_gap = signaling_gap(f, canonical);
    double max_signal = canonical_gap;
    double max_defect = scenario_invariant_defect(canonical);
    const RngSeed steering_base = derive_seed(seed, kSaltSteering);
    for (int s = 0; s < o.scenarios; ++s) {
        Rng rng(derive_seed(steering_base, static_cast<std::uint64_t>(s)));
        const ComplexMatrix rho = random_density(d, rng);
        const int n1 = d + rng.uniform_int(0, 1);
        const int n2 = d + rng.uniform_int(0, 2);
        const RngSeed pair_seed{static_cast<std::uint64_t>(rng.uniform_int(0, 1 << 30))};
        const auto [e1, e2] = random_indistinguishable_pair(rho, {n1, n2}, pair_seed);
        const SteeringScenario sc = build_steering_scenario(e1, e2);
        max_signal = std::max(max_signal, signaling_gap(f, sc));
        max_defect = std::max(max_defect, scenario_invariant_defect(sc));
    }

    const NonlinearityReport nl = nonlinearity_witness(f, 1e-8, 64, derive_seed(seed, kSaltWitness));
    const bool gap = convex_gap > tol || max_signal > tol;

    Json config{{"seed", o.seed},        {"dim", d},     {"pairs", o.pairs},
                {"scenarios", o.scenarios}, {"tolerance", tol}, {"theta", o.theta}};
    const RunManifest m = manifest("gisin", o, std::move(config), timer);
    if (o.format == "text") {
        out << "gisin " << o.input << " (" << f.name() << ", dim " << d
            << "): " << (gap ? "gap" : "no_gap") << '\n'
            << "  convex_linearity_gap=" << fmt(convex_gap) << '\n'
            << "  canonical_signaling_gap=" << fmt(canonical_gap) << '\n'
            << "  max_signaling_gap=" << fmt(max_signal) << '\n'
            << "  max_invariant_defect=" << fmt(max_defect) << '\n'
            << "  linearizable=" << (nl.is_linearizable ? "true" : "false");
        if (nl.witness) out << " (witness " << nl.witness->probe << ", level " << nl.witness->level
                            << ", deviation " << fmt(nl.witness->deviation) << ")";
        out << '\n';
    } else {
        emit(out,
             Json{{"manifest", to_json(m)},
                  {"map",
                   Json{{"name", f.name()},
                        {"kind", to_string(f.kind())},
                        {"dim_in", f.dim_in()},
                        {"dim_out", f.dim_out()}}},
                  {"verdict", gap ? "gap" : "no_gap"},
                  {"convex_linearity", Json{{"pairs", o.pairs}, {"max_gap", convex_gap}}},
                  {"steering",
                   Json{{"scenarios", o.scenarios + 1},
                        {"canonical",
                         Json{{"ensembles", "computational_vs_fourier"},
                              {"signaling_gap", canonical_gap}}},
                        {"max_signaling_gap", max_signal},
                        {"max_invariant_defect", max_defect}}},
                  {"nonlinearity", to_json(nl)}});
    }
    return gap ? kExitViolation : kExitPass;
}

Json catalog_json(const CatalogEntry& e) {
    return Json{{"name", e.name},
                {"kind", e.kind},
                {"theory", e.theory},
                {"description", e.description},
                {"expected", e.expected},
                {"spec", "zoo:" + e.name}};
}

int cmd_zoo(const Options& o, std::ostream& out) {
    const Timer timer;
    std::vector<const CatalogEntry*> entries;
    if (o.zoo_action == "list") {
        for (const auto& e : zoo_catalog()) entries.push_back(&e);
    } else if (o.zoo_action == "describe") {
        if (o.zoo_name.empty()) throw InvalidArgument("zoo describe needs a name");
        for (const auto& e : zoo_catalog()) {
            if (e.name == o.zoo_name) entries.push_back(&e);
        }
        if (entries.empty()) throw UnknownName("no built-in named '" + o.zoo_name + "'");
    } else {
        throw InvalidArgument("zoo action must be 'list' or 'describe'");
    }
    if (o.format == "text") {
        for (const auto* e : entries) {
            out << e->name << "  [" << e->kind << ", " << e->theory << "]  " << e->description;
            if (o.zoo_action == "describe") out << "\n  expected: " << e->expected;
            out << '\n';
        }
        return kExitPass;
    }
    Json list = Json::array();
    for (const auto* e : entries) list.push_back(catalog_json(*e));
    Json config{{"action", o.zoo_action}};
    if (!o.zoo_name.empty()) config["name"] = o.zoo_name;
    emit(out, Json{{"manifest", to_json(manifest("zoo", o, std::move(config), timer))},
                   {"entries", std::move(list)}});
    return kExitPass;
}

void add_sampling_flags(CLI::App* sub, Options& o, CLI::Option*& seed_opt,
                        CLI::Option*& tol_opt) {
    sub->add_option("input", o.input, "family JSON file or zoo:<name>")->required();
    seed_opt = sub->add_option("--seed", o.seed, "RNG seed (default: $LOCLAB_SEED or 0)");
    sub->add_option("--trials", o.trials, "trials per axiom")->check(CLI::PositiveNumber);
    tol_opt = sub->add_option("--tol", o.tol, "violation tolerance")->check(CLI::NonNegativeNumber);
    sub->add_option("--env-dims", o.env_dims, "environment dimensions (csv)")->delimiter(',');
    sub->add_option("--theta", o.theta, "zoo parameter theta");
    sub->add_option("--dim", o.dim, "zoo dimension")->check(CLI::PositiveNumber);
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));
    sub->add_flag("--timing", o.timing, "record wall-clock duration in the manifest");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Local applicability checks, extraction and signaling analysis", "loclab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version()));

    CLI::Option* seed_check = nullptr;
    CLI::Option* tol_check = nullptr;
    CLI::Option* seed_extract = nullptr;
    CLI::Option* tol_extract = nullptr;
    CLI::Option* seed_gisin = nullptr;
    CLI::Option* tol_gisin = nullptr;

    auto* check = app.add_subcommand("check", "run the axiom checker on a family");
    add_sampling_flags(check, o, seed_check, tol_check);
    auto* extract = app.add_subcommand("extract", "certify a family and extract its operator");
    add_sampling_flags(extract, o, seed_extract, tol_extract);

    auto* gisin = app.add_subcommand("gisin", "convex linearity and steering analysis of a map");
    gisin->add_option("input", o.input, "map JSON file or zoo:<name>")->required();
    seed_gisin = gisin->add_option("--seed", o.seed, "RNG seed (default: $LOCLAB_SEED or 0)");
    tol_gisin = gisin->add_option("--tol", o.tol, "gap tolerance")->check(CLI::NonNegativeNumber);
    gisin->add_option("--dim", o.dim, "dimension for zoo maps")->check(CLI::PositiveNumber);
    gisin->add_option("--pairs", o.pairs, "indistinguishable ensemble pairs");
    gisin->add_option("--scenarios", o.scenarios, "random steering scenarios");
    gisin->add_option("--theta", o.theta, "zoo parameter theta");
    gisin->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));
    gisin->add_flag("--timing", o.timing, "record wall-clock duration in the manifest");

    auto* zoo_cmd = app.add_subcommand("zoo", "list or describe built-in families and maps");
    zoo_cmd->add_option("action", o.zoo_action, "list | describe")->required();
    zoo_cmd->add_option("name", o.zoo_name, "entry name for describe");
    zoo_cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == static_cast<int>(CLI::ExitCodes::Success) ? kExitPass : kExitInputError;
    }

    const bool seed_given = (seed_check && seed_check->count() > 0) ||
                            (seed_extract && seed_extract->count() > 0) ||
                            (seed_gisin && seed_gisin->count() > 0);
    o.tol_given = (tol_check && tol_check->count() > 0) ||
                  (tol_extract && tol_extract->count() > 0) ||
                  (tol_gisin && tol_gisin->count() > 0);

    try {
        if (!seed_given) {
            if (const char* env = std::getenv("LOCLAB_SEED"); env && *env) {
                std::size_t used = 0;
                const std::string text(env);
                o.seed = std::stoull(text, &used);
                if (used != text.size()) throw std::invalid_argument(text);
            }
        }
    } catch (const std::exception&) {
        err << "loclab: LOCLAB_SEED must be an unsigned 64-bit integer\n";
        return kExitInputError;
    }

    try {
        if (check->parsed()) return cmd_check(o, out);
        if (extract->parsed()) return cmd_extract(o, out);
        if (gisin->parsed()) return cmd_gisin(o, out);
        return cmd_zoo(o, out);
    } catch (const Error& e) {
        err << "loclab: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "loclab: " << e.what() << '\n';
        return kExitInputError;
    }
}

}  // namespace loclab
