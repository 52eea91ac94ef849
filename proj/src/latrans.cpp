#include "loclab/latrans.hpp"

#include "loclab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace loclab {

const char* to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::LiftedUnitary: return "lifted_unitary";
        case FamilyKind::LiftedIsometry: return "lifted_isometry";
        case FamilyKind::LiftedChannel: return "lifted_channel";
        case FamilyKind::BlackBox: return "black_box";
    }
    return "?";
}

const char* to_string(Axiom axiom) {
    switch (axiom) {
        case Axiom::StateLocality: return "state_locality";
        case Axiom::NoSignaling: return "no_signaling";
        case Axiom::UpdateCommutativity: return "update_commutativity";
    }
    return "?";
}

const char* to_string(WitnessKind kind) {
    switch (kind) {
        case WitnessKind::Gap: return "gap";
        case WitnessKind::InvalidOutputState: return "invalid_output_state";
        case WitnessKind::UndefinedUpdate: return "undefined_update";
    }
    return "?";
}

TransFamily::TransFamily(TheoryTag theory, int dim_in, int dim_out, FamilyKind kind,
                         std::string name, Evaluator evaluator,
                         std::vector<ComplexMatrix> matrices)
    : theory_(theory),
      dim_in_(dim_in),
      dim_out_(dim_out),
      kind_(kind),
      name_(std::move(name)),
      evaluator_(std::move(evaluator)),
      matrices_(std::move(matrices)) {
    if (dim_in_ < 1 || dim_out_ < 1) throw InvalidArgument("family dimensions must be positive");
    if (!evaluator_) throw InvalidArgument("family needs an evaluator");
}

ComplexMatrix TransFamily::apply(int env_dim, const ComplexMatrix& state) const {
    if (env_dim < 1) throw DimensionMismatch("environment dimension must be positive");
    const auto n = static_cast<Eigen::Index>(dim_in_) * env_dim;
    const bool ok = theory_ == TheoryTag::Pure ? (state.rows() == n && state.cols() == 1)
                                               : (state.rows() == n && state.cols() == n);
    if (!ok) {
        throw DimensionMismatch("family '" + name_ + "' expects a state on a space of dimension " +
                                std::to_string(n) + ", got " + std::to_string(state.rows()) +
                                "x" + std::to_string(state.cols()));
    }
    return evaluator_(env_dim, state);
}

TransFamily lift_isometry(const ComplexMatrix& v, double tol) {
    if (v.rows() < 1 || v.cols() < 1) throw NotIsometry("empty matrix");
    const double defect = isometry_defect(v);
    if (!(defect <= tol)) {
        throw NotIsometry("V†V differs from the identity by " + std::to_string(defect));
    }
    const bool square = v.rows() == v.cols();
    ComplexMatrix op = v;
    return TransFamily(
        TheoryTag::Pure, static_cast<int>(v.cols()), static_cast<int>(v.rows()),
        square ? FamilyKind::LiftedUnitary : FamilyKind::LiftedIsometry,
        square ? "unitary" : "isometry",
        [op](int env_dim, const ComplexMatrix& psi) { return apply_left_factor(op, psi, env_dim); },
        {v});
}

TransFamily lift_channel(const std::vector<ComplexMatrix>& kraus, double tol) {
    if (kraus.empty()) throw NotTracePreserving("empty Kraus list");
    const auto d_out = kraus.front().rows();
    const auto d_in = kraus.front().cols();
    ComplexMatrix completeness = ComplexMatrix::Zero(d_in, d_in);
    for (const auto& k : kraus) {
        if (k.rows() != d_out || k.cols() != d_in) {
            throw DimensionMismatch("Kraus operators must share one shape");
        }
        completeness += k.adjoint() * k;
    }
    const double defect = (completeness - ComplexMatrix::Identity(d_in, d_in)).norm();
    if (!(defect <= tol)) {
        throw NotTracePreserving("Σ K†K differs from the identity by " + std::to_string(defect));
    }
    auto ops = kraus;
    return TransFamily(
        TheoryTag::Mixed, static_cast<int>(d_in), static_cast<int>(d_out),
        FamilyKind::LiftedChannel, "channel",
        [ops](int env_dim, const ComplexMatrix& rho) {
            const auto n_out = ops.front().rows() * env_dim;
            ComplexMatrix out = ComplexMatrix::Zero(n_out, n_out);
            for (const auto& k : ops) {
                // (K⊗I) ρ (K⊗I)† = [(K⊗I) [(K⊗I) ρ]†]†
                const ComplexMatrix left = apply_left_factor(k, rho, env_dim);
                out += apply_left_factor(k, left.adjoint(), env_dim).adjoint();
            }
            return out;
        },
        kraus);
}

TransFamily identity_family(TheoryTag theory, int dim) {
    if (theory == TheoryTag::Pure) return lift_isometry(identity(dim));
    return lift_channel({identity(dim)});
}

TransFamily compose_families(const TransFamily& second, const TransFamily& first) {
    if (first.theory() != second.theory()) {
        throw TheoryMismatch("cannot compose families over different theories");
    }
    if (first.dim_out() != second.dim_in()) {
        throw DimensionMismatch("compose: output dimension " + std::to_string(first.dim_out()) +
                                " does not match input dimension " +
                                std::to_string(second.dim_in()));
    }
    return TransFamily(
        first.theory(), first.dim_in(), second.dim_out(), FamilyKind::BlackBox,
        "compose(" + second.name() + "," + first.name() + ")",
        [second, first](int env_dim, const ComplexMatrix& s) {
            return second.apply(env_dim, first.apply(env_dim, s));
        });
}

// ---------------------------------------------------------------------------

void SamplingConfig::validate() const {
    if (trials < 1) throw InvalidArgument("trials must be at least 1");
    if (env_dims.empty()) throw InvalidArgument("env_dims must not be empty");
    for (int d : env_dims) {
        if (d < 1) throw InvalidArgument("env_dims entries must be positive");
    }
    if (!(tolerance >= 0.0)) throw InvalidArgument("tolerance must be non-negative");
    if (!(entangled_fraction >= 0.0 && entangled_fraction <= 1.0)) {
        throw InvalidArgument("entangled_fraction must lie in [0, 1]");
    }
    if (max_witnesses < 0) throw InvalidArgument("max_witnesses must be non-negative");
}

const AxiomFragment& AxiomReport::fragment(Axiom axiom) const {
    switch (axiom) {
        case Axiom::StateLocality: return state_locality;
        case Axiom::NoSignaling: return no_signaling;
        case Axiom::UpdateCommutativity: return update_commutativity;
    }
    return state_locality;
}

void retain_worst(std::vector<Witness>& witnesses, int k) {
    std::stable_sort(witnesses.begin(), witnesses.end(), [](const Witness& a, const Witness& b) {
        if (a.gap != b.gap) return a.gap > b.gap;
        if (a.axiom != b.axiom) return a.axiom < b.axiom;
        return a.trial < b.trial;
    });
    if (static_cast<int>(witnesses.size()) > k) witnesses.resize(k);
}

OutputCheck validate_output(TheoryTag theory, const ComplexMatrix& m, int expected_dim,
                            double tol) {
    OutputCheck check;
    auto fail = [&](double defect, std::string reason) {
        check.valid = false;
        check.defect = std::max(check.defect, defect);
        if (check.reason.empty()) check.reason = std::move(reason);
    };
    const bool shape_ok = theory == TheoryTag::Pure
                              ? (m.rows() == expected_dim && m.cols() == 1)
                              : (m.rows() == expected_dim && m.cols() == expected_dim);
    if (!shape_ok) {
        fail(1.0, "output has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
        return check;
    }
    if (!all_finite(m)) {
        fail(1.0, "output has non-finite entries");
        return check;
    }
    if (theory == TheoryTag::Pure) {
        const double norm_defect = std::abs(m.norm() - 1.0);
        if (norm_defect > tol) fail(norm_defect, "output ket is not normalized");
        return check;
    }
    const double herm_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > tol) fail(herm_defect, "output is not Hermitian");
    const double trace_defect = std::abs(m.trace() - Complex(1.0, 0.0));
    if (trace_defect > tol) fail(trace_defect, "output trace differs from 1");
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues()(0);
    check.min_eigenvalue = min_eig;
    if (min_eig < -tol) fail(-min_eig, "output has a negative eigenvalue");
    return check;
}

double state_distance(TheoryTag theory, const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("state_distance: shapes differ");
    }
    if (theory == TheoryTag::Pure) return (a - b).norm();
    return 0.5 * trace_norm(a - b);
}

ComplexMatrix sample_state(TheoryTag theory, int dim_a, int dim_x, bool entangled, Rng& rng) {
    if (theory == TheoryTag::Pure) {
        if (entangled) return random_pure(dim_a * dim_x, rng);
        const ComplexMatrix a = random_pure(dim_a, rng);
        return tensor(a, random_pure(dim_x, rng));
    }
    if (entangled) return random_density(dim_a * dim_x, rng);
    const ComplexMatrix a = random_density(dim_a, rng);
    return tensor(a, random_density(dim_x, rng));
}

namespace {

constexpr std::uint64_t kSaltStateLocality = 0x51a7e10c;
constexpr std::uint64_t kSaltNoSignaling = 0x5167a11;
constexpr std::uint64_t kSaltUpdate = 0x0bda7e;

// Local measurement on the environment, lifted to the system ⊗ environment.
ComplexMatrix on_environment(int system_dim, const ComplexMatrix& env_projector) {
    return tensor(identity(system_dim), env_projector);
}

ComplexMatrix env_state(TheoryTag theory, int dim_x, Rng& rng) {
    return theory == TheoryTag::Pure ? random_pure(dim_x, rng) : random_density(dim_x, rng);
}

ComplexMatrix as_theory_state(TheoryTag theory, const ComplexMatrix& ket) {
    return theory == TheoryTag::Pure ? ket : projector(ket);
}

double born_any(TheoryTag theory, const ComplexMatrix& s, const ComplexMatrix& p) {
    return theory == TheoryTag::Pure ? rules::born_ket(s, p) : rules::born_density(s, p);
}

ComplexMatrix update_any(TheoryTag theory, const ComplexMatrix& s, const ComplexMatrix& p) {
    return theory == TheoryTag::Pure ? rules::update_ket(s, p) : rules::update_density(s, p);
}

bool bell_probes_apply(const TransFamily& l, const SamplingConfig& cfg) {
    return cfg.bell_probes &&
           std::find(cfg.env_dims.begin(), cfg.env_dims.end(), l.dim_in()) != cfg.env_dims.end();
}

// Runs the evaluator and records an InvalidOutputState witness on failure.
class TrialContext {
public:
    TrialContext(const TransFamily& l, const SamplingConfig& cfg, AxiomFragment& fragment)
        : l_(l), cfg_(cfg), fragment_(fragment) {}

    std::optional<ComplexMatrix> evaluate(int trial, int env_dim, const ComplexMatrix& input,
                                          const ComplexMatrix& outcome = {}) {
        ComplexMatrix out = l_.apply(env_dim, input);
        const OutputCheck check =
            validate_output(l_.theory(), out, l_.dim_out() * env_dim, cfg_.tolerance);
        if (check.valid) return out;
        ++fragment_.invalid_outputs;
        Witness w;
        w.axiom = fragment_.axiom;
        w.kind = WitnessKind::InvalidOutputState;
        w.trial = trial;
        w.env_dim = env_dim;
        w.gap = check.defect;
        w.detail = check.reason;
        w.state = input;
        w.outcome = outcome;
        w.min_eigenvalue = check.min_eigenvalue;
        record(std::move(w));
        return std::nullopt;
    }

    void record_gap(int trial, int env_dim, double gap, const ComplexMatrix& state,
                    const ComplexMatrix& outcome, WitnessKind kind = WitnessKind::Gap,
                    std::string detail = {}) {
        ++fragment_.evaluated;
        if (gap <= cfg_.tolerance) {
            fragment_.max_violation = std::max(fragment_.max_violation, gap);
            return;
        }
        Witness w;
        w.axiom = fragment_.axiom;
        w.kind = kind;
        w.trial = trial;
        w.env_dim = env_dim;
        w.gap = gap;
        w.detail = std::move(detail);
        w.state = state;
        w.outcome = outcome;
        record(std::move(w));
    }

private:
    void record(Witness w) {
        fragment_.max_violation = std::max(fragment_.max_violation, w.gap);
        fragment_.witnesses.push_back(std::move(w));
        // Bound memory while keeping the canonical worst-k set.
        if (static_cast<int>(fragment_.witnesses.size()) > 4 * cfg_.max_witnesses + 16) {
            retain_worst(fragment_.witnesses, cfg_.max_witnesses);
        }
    }

    const TransFamily& l_;
    const SamplingConfig& cfg_;
    AxiomFragment& fragment_;
};

// One draw of (environment dimension, system state, environment projector).
struct MeasuredDraw {
    int env_dim;
    ComplexMatrix state;
    ComplexMatrix env_projector;
};

std::vector<MeasuredDraw> bell_measured_draws(const TransFamily& l) {
    const int d = l.dim_in();
    std::vector<MeasuredDraw> draws;
    const ComplexMatrix phi = as_theory_state(l.theory(), bell_state(d));
    for (int k = 0; k < d; ++k) draws.push_back({d, phi, projector(basis_ket(d, k))});
    return draws;
}

MeasuredDraw random_measured_draw(const TransFamily& l, const SamplingConfig& cfg, int trial,
                                  Rng& rng) {
    const int dim_x = cfg.env_dims[trial % cfg.env_dims.size()];
    const bool entangled = rng.uniform() < cfg.entangled_fraction;
    ComplexMatrix s = sample_state(l.theory(), l.dim_in(), dim_x, entangled, rng);
    const int rank = rng.uniform_int(1, dim_x);
    ComplexMatrix pi = random_projector(dim_x, rank, rng);
    return {dim_x, std::move(s), std::move(pi)};
}

}  // namespace

AxiomFragment check_state_locality(const TransFamily& l, const SamplingConfig& cfg) {
    cfg.validate();
    AxiomFragment fragment;
    fragment.axiom = Axiom::StateLocality;
    TrialContext ctx(l, cfg, fragment);
    const TheoryTag theory = l.theory();
    int trial = 0;

    if (bell_probes_apply(l, cfg)) {
        // L_{XX'}(Φ+ ⊗ |0>) against L_X(Φ+) ⊗ |0>, with X = A.
        const int d = l.dim_in();
        int dim_x2 = 1;
        for (int e : cfg.env_dims) {
            if (e > 1) {
                dim_x2 = e;
                break;
            }
        }
        const ComplexMatrix phi = as_theory_state(theory, bell_state(d));
        const ComplexMatrix anc = as_theory_state(theory, basis_ket(dim_x2, 0));
        const ComplexMatrix input = tensor(phi, anc);
        ++fragment.trials;
        const auto joint = ctx.evaluate(trial, d * dim_x2, input);
        const auto single = ctx.evaluate(trial, d, phi);
        if (joint && single) {
            ctx.record_gap(trial, d * dim_x2,
                           state_distance(theory, *joint, tensor(*single, anc)), input, {});
        }
        ++trial;
    }

    const RngSeed base = derive_seed(cfg.seed, kSaltStateLocality);
    for (int t = 0; t < cfg.trials; ++t, ++trial) {
        Rng rng(derive_seed(base, static_cast<std::uint64_t>(t)));
        ++fragment.trials;
        const int dim_x = cfg.env_dims[t % cfg.env_dims.size()];
        const int dim_x2 =
            cfg.env_dims[rng.uniform_int(0, static_cast<int>(cfg.env_dims.size()) - 1)];

        // L_X(ψ_A ⊗ φ_X) = L_[-](ψ_A) ⊗ φ_X
        const ComplexMatrix psi_a = sample_state(theory, l.dim_in(), 1, true, rng);
        const ComplexMatrix phi_x = env_state(theory, dim_x, rng);
        const ComplexMatrix product_in = tensor(psi_a, phi_x);

        // L_{XX'}(ψ_AX ⊗ φ_X') = L_X(ψ_AX) ⊗ φ_X'
        const bool entangled = rng.uniform() < cfg.entangled_fraction;
        const ComplexMatrix psi_ax = sample_state(theory, l.dim_in(), dim_x, entangled, rng);
        const ComplexMatrix phi_x2 = env_state(theory, dim_x2, rng);
        const ComplexMatrix joint_in = tensor(psi_ax, phi_x2);

        const auto out_product = ctx.evaluate(trial, dim_x, product_in);
        if (!out_product) continue;
        const auto out_bare = ctx.evaluate(trial, 1, psi_a);
        if (!out_bare) continue;
        const auto out_joint = ctx.evaluate(trial, dim_x * dim_x2, joint_in);
        if (!out_joint) continue;
        const auto out_partial = ctx.evaluate(trial, dim_x, psi_ax);
        if (!out_partial) continue;

        const double gap_product = state_distance(theory, *out_product, tensor(*out_bare, phi_x));
        const double gap_joint = state_distance(theory, *out_joint, tensor(*out_partial, phi_x2));
        if (gap_product >= gap_joint) {
            ctx.record_gap(trial, dim_x, gap_product, product_in, {});
        } else {
            ctx.record_gap(trial, dim_x * dim_x2, gap_joint, joint_in, {});
        }
    }
    retain_worst(fragment.witnesses, cfg.max_witnesses);
    return fragment;
}

AxiomFragment check_no_signaling(const TransFamily& l, const SamplingConfig& cfg) {
    cfg.validate();
    AxiomFragment fragment;
    fragment.axiom = Axiom::NoSignaling;
    TrialContext ctx(l, cfg, fragment);
    const TheoryTag theory = l.theory();

    auto run = [&](int trial, const MeasuredDraw& draw) {
        ++fragment.trials;
        const auto out = ctx.evaluate(trial, draw.env_dim, draw.state, draw.env_projector);
        if (!out) return;
        const double before =
            born_any(theory, draw.state, on_environment(l.dim_in(), draw.env_projector));
        const double after =
            born_any(theory, *out, on_environment(l.dim_out(), draw.env_projector));
        ctx.record_gap(trial, draw.env_dim, std::abs(after - before), draw.state,
                       draw.env_projector);
    };

    int trial = 0;
    if (bell_probes_apply(l, cfg)) {
        for (const auto& draw : bell_measured_draws(l)) run(trial++, draw);
    }
    const RngSeed base = derive_seed(cfg.seed, kSaltNoSignaling);
    for (int t = 0; t < cfg.trials; ++t) {
        Rng rng(derive_seed(base, static_cast<std::uint64_t>(t)));
        run(trial++, random_measured_draw(l, cfg, t, rng));
    }
    retain_worst(fragment.witnesses, cfg.max_witnesses);
    return fragment;
}

AxiomFragment check_update_commutativity(const TransFamily& l, const SamplingConfig& cfg) {
    cfg.validate();
    AxiomFragment fragment;
    fragment.axiom = Axiom::UpdateCommutativity;
    TrialContext ctx(l, cfg, fragment);
    const TheoryTag theory = l.theory();

    auto run = [&](int trial, const MeasuredDraw& draw) {
        ++fragment.trials;
        const ComplexMatrix p_in = on_environment(l.dim_in(), draw.env_projector);
        const double p = born_any(theory, draw.state, p_in);
        if (p <= kZeroProbability) {
            ++fragment.skipped;
            return;
        }
        const auto out = ctx.evaluate(trial, draw.env_dim, draw.state, draw.env_projector);
        if (!out) return;
        const ComplexMatrix updated = update_any(theory, draw.state, p_in);
        const auto transformed_update =
            ctx.evaluate(trial, draw.env_dim, updated, draw.env_projector);
        if (!transformed_update) return;

        const ComplexMatrix p_out = on_environment(l.dim_out(), draw.env_projector);
        const double p_after = born_any(theory, *out, p_out);
        if (p_after <= kZeroProbability) {
            ctx.record_gap(trial, draw.env_dim, 1.0, draw.state, draw.env_projector,
                           WitnessKind::UndefinedUpdate,
                           "update of the transformed state is undefined (probability " +
                               std::to_string(p_after) + ") while the original outcome has "
                               "probability " + std::to_string(p));
            return;
        }
        const ComplexMatrix update_transformed = update_any(theory, *out, p_out);
        ctx.record_gap(trial, draw.env_dim,
                       state_distance(theory, update_transformed, *transformed_update),
                       draw.state, draw.env_projector);
    };

    int trial = 0;
    if (bell_probes_apply(l, cfg)) {
        for (const auto& draw : bell_measured_draws(l)) run(trial++, draw);
    }
    const RngSeed base = derive_seed(cfg.seed, kSaltUpdate);
    for (int t = 0; t < cfg.trials; ++t) {
        Rng rng(derive_seed(base, static_cast<std::uint64_t>(t)));
        run(trial++, random_measured_draw(l, cfg, t, rng));
    }
    retain_worst(fragment.witnesses, cfg.max_witnesses);
    return fragment;
}

AxiomReport check_all(const TransFamily& l, const SamplingConfig& cfg) {
    AxiomReport report;
    report.tolerance = cfg.tolerance;
    report.state_locality = check_state_locality(l, cfg);
    report.no_signaling = check_no_signaling(l, cfg);
    report.update_commutativity = check_update_commutativity(l, cfg);
    report.trials = report.state_locality.trials + report.no_signaling.trials +
                    report.update_commutativity.trials;
    for (const AxiomFragment* f :
         {&report.state_locality, &report.no_signaling, &report.update_commutativity}) {
        report.witnesses.insert(report.witnesses.end(), f->witnesses.begin(),
                                f->witnesses.end());
    }
    retain_worst(report.witnesses, cfg.max_witnesses);
    report.pass = report.state_locality.max_violation <= cfg.tolerance &&
                  report.no_signaling.max_violation <= cfg.tolerance &&
                  report.update_commutativity.max_violation <= cfg.tolerance;
    return report;
}

}  // namespace loclab
