#pragma once

// Transformation families L = {L_X}, indexed by the dimension of the
// environment X, and a randomized checker for the three local-applicability
// axioms (state locality, no signaling, update commutativity).

#include "loclab/linalg.hpp"
#include "loclab/smt.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace loclab {

enum class FamilyKind { LiftedUnitary, LiftedIsometry, LiftedChannel, BlackBox };

const char* to_string(FamilyKind kind);

/// A transformation family on pure or mixed quantum theory.
///
/// The evaluator maps a state on A ⊗ X (a ket for pure theory, a density
/// matrix for mixed theory) to a matrix on B ⊗ X. It is not trusted to
/// return a valid state; the axiom checker validates every output.
class TransFamily {
public:
    using Evaluator = std::function<ComplexMatrix(int env_dim, const ComplexMatrix& state)>;

    TransFamily(TheoryTag theory, int dim_in, int dim_out, FamilyKind kind, std::string name,
                Evaluator evaluator, std::vector<ComplexMatrix> matrices = {});

    TheoryTag theory() const { return theory_; }
    int dim_in() const { return dim_in_; }
    int dim_out() const { return dim_out_; }
    FamilyKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    /// Defining matrices of lifted families (the isometry, or the Kraus list).
    const std::vector<ComplexMatrix>& matrices() const { return matrices_; }

    /// L_X applied to a state on A ⊗ X with dim X = env_dim.
    ComplexMatrix apply(int env_dim, const ComplexMatrix& state) const;
    /// L_[-], the unextended action (trivial environment).
    ComplexMatrix apply_unextended(const ComplexMatrix& state) const { return apply(1, state); }

private:
    TheoryTag theory_;
    int dim_in_;
    int dim_out_;
    FamilyKind kind_;
    std::string name_;
    Evaluator evaluator_;
    std::vector<ComplexMatrix> matrices_;
};

/// ψ ↦ (V ⊗ I_X) ψ. Throws NotIsometry unless V†V = I within `tol`.
TransFamily lift_isometry(const ComplexMatrix& v, double tol = kDefaultTolerance);

/// ρ ↦ Σ_j (K_j ⊗ I_X) ρ (K_j ⊗ I_X)†. Throws NotTracePreserving unless
/// Σ_j K_j†K_j = I within `tol`.
TransFamily lift_channel(const std::vector<ComplexMatrix>& kraus,
                         double tol = kDefaultTolerance);

TransFamily identity_family(TheoryTag theory, int dim);

/// Sequential composition: `first` is applied, then `second`.
TransFamily compose_families(const TransFamily& second, const TransFamily& first);

// Built-in candidate families.
//   constant_pure        ψ_AX ↦ |0>_B ⊗ normalize((<0|_A ⊗ I) ψ)
//   constant_mixed       ρ ↦ |0><0| ⊗ Tr_A ρ
//   nonlinear_phase      ψ ↦ exp(iθ <ψ|Z_A ⊗ I|ψ> Z_A ⊗ I) ψ
//   transpose_mixed      ρ ↦ (T_A ⊗ id) ρ
struct ZooParams {
    int dim = 2;
    double theta = 0.7;
};

TransFamily zoo(std::string_view name, const ZooParams& params = {});
const std::vector<std::string>& zoo_family_names();

// Axiom checking ------------------------------------------------------------

enum class Axiom { StateLocality, NoSignaling, UpdateCommutativity };

const char* to_string(Axiom axiom);

struct SamplingConfig {
    int trials = 200;
    std::vector<int> env_dims{1, 2, 3, 4};
    RngSeed seed{};
    double tolerance = 1e-8;
    double entangled_fraction = 0.5;
    int max_witnesses = 5;
    /// Prepend deterministic probes built from Φ+ on A ⊗ A (and computational
    /// basis projectors on the environment) when dim A is among env_dims.
    bool bell_probes = true;

    void validate() const;
};

enum class WitnessKind { Gap, InvalidOutputState, UndefinedUpdate };

const char* to_string(WitnessKind kind);

struct Witness {
    Axiom axiom = Axiom::StateLocality;
    WitnessKind kind = WitnessKind::Gap;
    int trial = 0;
    int env_dim = 1;
    double gap = 0.0;
    std::string detail;
    ComplexMatrix state;
    ComplexMatrix outcome;  // empty when the axiom involves no measurement
    std::optional<double> min_eigenvalue;
};

struct AxiomFragment {
    Axiom axiom = Axiom::StateLocality;
    int trials = 0;
    int evaluated = 0;
    int skipped = 0;  // zero-probability draws
    int invalid_outputs = 0;
    double max_violation = 0.0;
    std::vector<Witness> witnesses;  // worst first
};

struct AxiomReport {
    int trials = 0;
    double tolerance = 0.0;
    AxiomFragment state_locality;
    AxiomFragment no_signaling;
    AxiomFragment update_commutativity;
    std::vector<Witness> witnesses;  // worst first, across all axioms
    bool pass = false;

    const AxiomFragment& fragment(Axiom axiom) const;
};

AxiomFragment check_state_locality(const TransFamily& l, const SamplingConfig& cfg);
AxiomFragment check_no_signaling(const TransFamily& l, const SamplingConfig& cfg);
AxiomFragment check_update_commutativity(const TransFamily& l, const SamplingConfig& cfg);
AxiomReport check_all(const TransFamily& l, const SamplingConfig& cfg);

/// Keeps the `k` worst witnesses ordered by gap (descending) then trial.
void retain_worst(std::vector<Witness>& witnesses, int k);

// Helpers shared with the extraction module.

/// Outcome of validating an evaluator output against the declared theory.
struct OutputCheck {
    bool valid = true;
    double defect = 0.0;
    std::optional<double> min_eigenvalue;
    std::string reason;
};

OutputCheck validate_output(TheoryTag theory, const ComplexMatrix& m, int expected_dim,
                            double tol);

/// Vector norm for kets, trace distance for density matrices.
double state_distance(TheoryTag theory, const ComplexMatrix& a, const ComplexMatrix& b);

/// Random state on A ⊗ X: globally random if `entangled`, else a product of
/// random marginals.
ComplexMatrix sample_state(TheoryTag theory, int dim_a, int dim_x, bool entangled, Rng& rng);

}  // namespace loclab
