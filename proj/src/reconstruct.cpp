#include "loclab/reconstruct.hpp"

#include "loclab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace loclab {

const char* to_string(OperatorClass c) {
    switch (c) {
        case OperatorClass::Unitary: return "unitary";
        case OperatorClass::Isometry: return "isometry";
        case OperatorClass::NonIsometric: return "non_isometric";
    }
    return "?";
}

const char* to_string(Verdict v) {
    return v == Verdict::LocallyApplicable ? "locally_applicable" : "violating";
}

bool ChoiMatrix::completely_positive(double rel_tol) const {
    const double scale = std::max(std::abs(matrix.trace()), 1.0);
    return cp_defect <= rel_tol * scale;
}

bool ChoiMatrix::trace_preserving(double tol) const { return tp_defect <= tol; }

ExtractedOperator extract_pure_operator(const TransFamily& l, double tol) {
    if (l.theory() != TheoryTag::Pure) {
        throw TheoryMismatch("extract_pure_operator needs a pure-theory family");
    }
    const int d_in = l.dim_in();
    const int d_out = l.dim_out();
    const ComplexMatrix chi = l.apply(d_in, bell_state(d_in));
    ExtractedOperator ex;
    ex.matrix = std::sqrt(static_cast<double>(d_in)) * unvec(chi, d_out, d_in);
    ex.isometry_defect = all_finite(ex.matrix) ? isometry_defect(ex.matrix)
                                               : std::numeric_limits<double>::infinity();
    if (ex.isometry_defect <= tol) {
        ex.classification = d_in == d_out ? OperatorClass::Unitary : OperatorClass::Isometry;
    } else {
        ex.classification = OperatorClass::NonIsometric;
    }
    return ex;
}

ChoiMatrix make_choi(ComplexMatrix j, int dim_in, int dim_out) {
    const auto n = static_cast<Eigen::Index>(dim_in) * dim_out;
    if (j.rows() != n || j.cols() != n) {
        throw DimensionMismatch("Choi matrix must be " + std::to_string(n) + "x" +
                                std::to_string(n));
    }
    ChoiMatrix c;
    c.matrix = std::move(j);
    c.dim_in = dim_in;
    c.dim_out = dim_out;
    if (!all_finite(c.matrix)) {
        c.cp_defect = c.tp_defect = std::numeric_limits<double>::infinity();
        return c;
    }
    const ComplexMatrix h = 0.5 * (c.matrix + c.matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    c.cp_defect = std::max(0.0, -solver.eigenvalues()(0));
    const std::array<int, 2> dims{dim_out, dim_in};
    const std::array<int, 1> keep_a{1};
    c.tp_defect = (partial_trace(c.matrix, dims, keep_a) - identity(dim_in)).norm();
    return c;
}

ChoiMatrix extract_choi(const TransFamily& l) {
    if (l.theory() != TheoryTag::Mixed) {
        throw TheoryMismatch("extract_choi needs a mixed-theory family");
    }
    const int d_in = l.dim_in();
    ComplexMatrix j = static_cast<double>(d_in) * l.apply(d_in, bell_projector(d_in));
    return make_choi(std::move(j), d_in, l.dim_out());
}

namespace {

void require_input(const ChoiMatrix& j, const ComplexMatrix& rho, int env_dim) {
    const auto n = static_cast<Eigen::Index>(j.dim_in) * env_dim;
    if (rho.rows() != n || rho.cols() != n) {
        throw DimensionMismatch("channel input must be " + std::to_string(n) + "x" +
                                std::to_string(n));
    }
}

}  // namespace

ComplexMatrix apply_choi(const ChoiMatrix& j, const ComplexMatrix& rho) {
    require_input(j, rho, 1);
    const ComplexMatrix product = j.matrix * tensor(identity(j.dim_out), rho.transpose());
    const std::array<int, 2> dims{j.dim_out, j.dim_in};
    const std::array<int, 1> keep_b{0};
    return partial_trace(product, dims, keep_b);
}

ComplexMatrix apply_choi_extended(const ChoiMatrix& j, const ComplexMatrix& rho, int env_dim) {
    require_input(j, rho, env_dim);
    const int d_in = j.dim_in;
    const int d_out = j.dim_out;
    const int x = env_dim;
    ComplexMatrix out = ComplexMatrix::Zero(d_out * x, d_out * x);
    // out[(b,x),(b',x')] = Σ_{i,i'} J[(b,i),(b',i')] ρ[(i,x),(i',x')]
    for (int i = 0; i < d_in; ++i) {
        for (int ip = 0; ip < d_in; ++ip) {
            const auto block = rho.block(i * x, ip * x, x, x);
            for (int b = 0; b < d_out; ++b) {
                for (int bp = 0; bp < d_out; ++bp) {
                    const Complex c = j.matrix(b * d_in + i, bp * d_in + ip);
                    if (c != Complex(0.0, 0.0)) out.block(b * x, bp * x, x, x) += c * block;
                }
            }
        }
    }
    return out;
}

ComplexMatrix apply_choi_sandwich(const ChoiMatrix& j, const ComplexMatrix& rho) {
    require_input(j, rho, 1);
    const ComplexMatrix cup = tensor(identity(j.dim_out), bell_state(j.dim_in));
    return static_cast<double>(j.dim_in) * (cup.adjoint() * tensor(j.matrix, rho) * cup);
}

ChoiMatrix compose_choi(const ChoiMatrix& second, const ChoiMatrix& first) {
    if (first.dim_out != second.dim_in) {
        throw DimensionMismatch("compose_choi: dimensions do not chain");
    }
    // (E_2 ⊗ id_A) applied to J_1, whose second factor plays the environment.
    return make_choi(apply_choi_extended(second, first.matrix, first.dim_in), first.dim_in,
                     second.dim_out);
}

namespace {

constexpr std::uint64_t kSaltEquivalence = 0xe9a1;
constexpr std::uint64_t kSaltSwap = 0x5a9;

template <typename Expected>
EquivalenceReport run_equivalence(const TransFamily& l, const SamplingConfig& cfg,
                                  Expected&& expected) {
    cfg.validate();
    EquivalenceReport report;
    report.env_dims = cfg.env_dims;
    report.tolerance = cfg.tolerance;
    const RngSeed base = derive_seed(cfg.seed, kSaltEquivalence);
    for (int t = 0; t < cfg.trials; ++t) {
        Rng rng(derive_seed(base, static_cast<std::uint64_t>(t)));
        const int dim_x = cfg.env_dims[t % cfg.env_dims.size()];
        const bool entangled = rng.uniform() < cfg.entangled_fraction;
        const ComplexMatrix s = sample_state(l.theory(), l.dim_in(), dim_x, entangled, rng);
        const ComplexMatrix actual = l.apply(dim_x, s);
        double distance = std::numeric_limits<double>::infinity();
        if (all_finite(actual)) distance = state_distance(l.theory(), actual, expected(s, dim_x));
        ++report.trials;
        if (report.worst_trial < 0 || distance > report.max_distance) {
            report.max_distance = distance;
            report.worst_trial = t;
            report.worst_env_dim = dim_x;
            report.worst_state = s;
        }
    }
    report.pass = report.max_distance <= cfg.tolerance;
    return report;
}

}  // namespace

EquivalenceReport verify_equivalence(const TransFamily& l, const ExtractedOperator& extracted,
                                     const SamplingConfig& cfg) {
    if (l.theory() != TheoryTag::Pure) throw TheoryMismatch("operator equivalence needs pure theory");
    return run_equivalence(l, cfg, [&](const ComplexMatrix& psi, int env_dim) {
        return apply_left_factor(extracted.matrix, psi, env_dim);
    });
}

EquivalenceReport verify_equivalence(const TransFamily& l, const ChoiMatrix& extracted,
                                     const SamplingConfig& cfg) {
    if (l.theory() != TheoryTag::Mixed) throw TheoryMismatch("channel equivalence needs mixed theory");
    return run_equivalence(l, cfg, [&](const ComplexMatrix& rho, int env_dim) {
        return apply_choi_extended(extracted, rho, env_dim);
    });
}

SwapReport check_swap_compatibility(const TransFamily& l, const SamplingConfig& cfg) {
    if (l.theory() != TheoryTag::Mixed) {
        throw TheoryMismatch("swap compatibility is defined for mixed-theory families");
    }
    cfg.validate();
    SwapReport report;
    report.tolerance = cfg.tolerance;
    const RngSeed base = derive_seed(cfg.seed, kSaltSwap);
    for (int t = 0; t < cfg.trials; ++t) {
        Rng rng(derive_seed(base, static_cast<std::uint64_t>(t)));
        const int dim_x = cfg.env_dims[t % cfg.env_dims.size()];
        const int dim_x2 =
            cfg.env_dims[rng.uniform_int(0, static_cast<int>(cfg.env_dims.size()) - 1)];
        // ρ lives on A ⊗ X' ⊗ X; S maps X' ⊗ X onto X ⊗ X'.
        const ComplexMatrix rho = random_density(l.dim_in() * dim_x2 * dim_x, rng);
        const ComplexMatrix s = swap_operator(dim_x2, dim_x);
        const ComplexMatrix s_in = tensor(identity(l.dim_in()), s);
        const ComplexMatrix s_out = tensor(identity(l.dim_out()), s);
        const int env = dim_x * dim_x2;
        const ComplexMatrix lhs = l.apply(env, s_in * rho * s_in.adjoint());
        const ComplexMatrix rhs = s_out * l.apply(env, rho) * s_out.adjoint();
        report.max_gap = std::max(report.max_gap, trace_norm(lhs - rhs));
        ++report.trials;
    }
    report.pass = report.max_gap <= cfg.tolerance;
    return report;
}

Certificate certify(const TransFamily& l, const SamplingConfig& cfg) {
    Certificate cert;
    cert.theory = l.theory();
    cert.axioms = check_all(l, cfg);
    cert.witnesses = cert.axioms.witnesses;
    bool ok = cert.axioms.pass;
    if (l.theory() == TheoryTag::Pure) {
        const ExtractedOperator ex = extract_pure_operator(l, cfg.tolerance);
        cert.matrix = ex.matrix;
        cert.isometry_defect = ex.isometry_defect;
        cert.classification = to_string(ex.classification);
        const EquivalenceReport eq = verify_equivalence(l, ex, cfg);
        cert.equivalence_max_gap = eq.max_distance;
        ok = ok && eq.pass && ex.classification != OperatorClass::NonIsometric;
    } else {
        const ChoiMatrix choi = extract_choi(l);
        cert.matrix = choi.matrix;
        cert.cp_defect = choi.cp_defect;
        cert.tp_defect = choi.tp_defect;
        const bool cp = choi.completely_positive(cfg.tolerance);
        const bool tp = choi.trace_preserving(cfg.tolerance);
        cert.classification = !cp ? "not_completely_positive"
                              : !tp ? "not_trace_preserving"
                                    : "channel";
        const EquivalenceReport eq = verify_equivalence(l, choi, cfg);
        cert.equivalence_max_gap = eq.max_distance;
        ok = ok && eq.pass && cp && tp;
    }
    cert.verdict = ok ? Verdict::LocallyApplicable : Verdict::Violating;
    return cert;
}

}  // namespace loclab
