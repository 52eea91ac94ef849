#pragma once

// Ensembles of pure states, convex linearity of pure-state dynamics, remote
// preparation of indistinguishable ensembles by steering, and a test for
// whether a pure-state map is implemented by a linear operator.
//
// All comparisons of pure states here are phase-insensitive (projectors).

#include "loclab/linalg.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace loclab {

class Ensemble {
public:
    /// Throws InvalidArgument unless weights are non-negative and sum to 1
    /// (within 1e-10), lengths match and every ket is a dim × 1 unit vector.
    Ensemble(int dim, std::vector<double> weights, std::vector<ComplexMatrix> kets);

    int dim() const { return dim_; }
    std::size_t size() const { return weights_.size(); }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<ComplexMatrix>& kets() const { return kets_; }

private:
    int dim_;
    std::vector<double> weights_;
    std::vector<ComplexMatrix> kets_;
};

ComplexMatrix ensemble_density(const Ensemble& e);
bool indistinguishable(const Ensemble& e1, const Ensemble& e2, double tol = kDefaultTolerance);

/// Two ensembles of the given sizes whose densities both equal ρ. The first
/// is the spectral ensemble when its size equals rank ρ; otherwise both mix
/// the weighted eigenvectors with Haar-random isometries.
std::pair<Ensemble, Ensemble> random_indistinguishable_pair(const ComplexMatrix& rho,
                                                            std::pair<int, int> sizes,
                                                            RngSeed seed);

/// Deterministic dynamics on pure states.
class PureStateMap {
public:
    enum class Kind { Linear, Constant, Custom };
    using Rule = std::function<ComplexMatrix(const ComplexMatrix&)>;

    static PureStateMap linear(const ComplexMatrix& v, double tol = kDefaultTolerance);
    static PureStateMap constant(const ComplexMatrix& target, int dim_in);
    static PureStateMap custom(std::string name, int dim_in, int dim_out, Rule rule);

    int dim_in() const { return dim_in_; }
    int dim_out() const { return dim_out_; }
    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    /// The operator of a Linear map; empty otherwise.
    const ComplexMatrix& matrix() const { return matrix_; }

    /// Applies the rule and renormalizes the result.
    ComplexMatrix operator()(const ComplexMatrix& ket) const;

private:
    PureStateMap(Kind kind, std::string name, int dim_in, int dim_out, Rule rule,
                 ComplexMatrix matrix);

    Kind kind_;
    std::string name_;
    int dim_in_;
    int dim_out_;
    Rule rule_;
    ComplexMatrix matrix_;
};

const char* to_string(PureStateMap::Kind kind);

// Built-in maps:
//   constant          ψ ↦ |0>
//   renormalize       ψ_i ↦ ψ_i² (then normalized)
//   nonlinear_phase   ψ ↦ exp(iθ <ψ|Z|ψ> Z) ψ
PureStateMap zoo_map(std::string_view name, int dim, double theta = 0.7);
const std::vector<std::string>& zoo_map_names();

ComplexMatrix pushforward(const PureStateMap& f, const Ensemble& e);

/// Max trace distance between pushforwards over `pairs` random
/// indistinguishable pairs. Zero means no violation was detected.
double convex_linearity_gap(const PureStateMap& f, int dim, int pairs, RngSeed seed);

struct ProjectiveMeasurement {
    std::vector<ComplexMatrix> projectors;
};

struct SteeringScenario {
    int alice_dim = 1;
    int bob_dim = 1;
    ComplexMatrix shared_state;  // on Alice ⊗ Bob
    ProjectiveMeasurement m1;    // computational basis
    ProjectiveMeasurement m2;    // steers Bob to target 2
    Ensemble target1;
    Ensemble target2;
};

/// Bob's (probability, conditional ket) pairs after Alice measures `m`.
std::vector<std::pair<double, ComplexMatrix>> bob_conditionals(const SteeringScenario& s,
                                                                const ProjectiveMeasurement& m);

/// Largest deviation from the scenario invariants (completeness of both
/// measurements, outcome probabilities, conditional states up to phase).
double scenario_invariant_defect(const SteeringScenario& s);

/// Throws NotIndistinguishable unless the densities agree within `tol`.
SteeringScenario build_steering_scenario(const Ensemble& e1, const Ensemble& e2,
                                         double tol = kDefaultTolerance);

/// Trace distance between Bob's post-dynamics densities for Alice's two
/// choices.
double signaling_gap(const PureStateMap& f, const SteeringScenario& s);

struct LinearityWitness {
    /// "plus_pair" (the |+>, |+i> probes on levels 0 and j) or "random".
    std::string probe;
    int level = 0;
    double deviation = 0.0;
    ComplexMatrix state;  // first probe state involved
};

struct NonlinearityReport {
    bool is_linearizable = false;
    ComplexMatrix candidate;  // column-fitted operator (possibly partial)
    std::optional<LinearityWitness> witness;
    double max_deviation = 0.0;
};

/// Fits L column by column from f on the basis and on the probes
/// (|0> + |j>)/√2 and (|0> + i|j>)/√2, then tests L ψψ† L† = f(ψ)f(ψ)† on
/// random states.
NonlinearityReport nonlinearity_witness(const PureStateMap& f, double tol = 1e-8,
                                        int random_probes = 64, RngSeed seed = RngSeed{1});

}  // namespace loclab
