#pragma once

// State-measurement theories: states, projective outcomes, the probability
// rule p and the (partial) update rule u, together with spatial composition.
// Two instances are provided, pure and mixed finite-dimensional quantum theory.

#include "loclab/linalg.hpp"

#include <variant>
#include <vector>

namespace loclab {

inline constexpr double kZeroProbability = 1e-12;

enum class TheoryTag { Pure, Mixed };

const char* to_string(TheoryTag tag);

/// A system as an ordered list of tensor factors. Composition concatenates.
class SystemLabel {
public:
    explicit SystemLabel(std::vector<int> dims);
    static SystemLabel of_dim(int d) { return SystemLabel({d}); }

    const std::vector<int>& dims() const { return dims_; }
    int total_dim() const { return total_dim_; }

    friend SystemLabel operator*(const SystemLabel& a, const SystemLabel& b);
    friend bool operator==(const SystemLabel& a, const SystemLabel& b) {
        return a.dims_ == b.dims_;
    }

private:
    std::vector<int> dims_;
    int total_dim_;
};

class PureState {
public:
    /// Throws InvalidState unless `ket` is a total_dim × 1 unit vector.
    PureState(SystemLabel system, ComplexMatrix ket, double tol = kDefaultTolerance);

    const SystemLabel& system() const { return system_; }
    const ComplexMatrix& ket() const { return ket_; }
    ComplexMatrix density() const { return projector(ket_); }

private:
    SystemLabel system_;
    ComplexMatrix ket_;
};

class MixedState {
public:
    /// Throws InvalidState unless `rho` is Hermitian, positive and of unit trace.
    MixedState(SystemLabel system, ComplexMatrix rho, double tol = kDefaultTolerance);
    static MixedState from_pure(const PureState& s);

    const SystemLabel& system() const { return system_; }
    const ComplexMatrix& rho() const { return rho_; }

private:
    SystemLabel system_;
    ComplexMatrix rho_;
};

/// A projective measurement outcome (shared by both theories).
class Outcome {
public:
    /// Throws InvalidOutcome unless `projector` is Hermitian and idempotent.
    Outcome(SystemLabel system, ComplexMatrix projector, double tol = kDefaultTolerance);

    const SystemLabel& system() const { return system_; }
    const ComplexMatrix& projector() const { return projector_; }

private:
    SystemLabel system_;
    ComplexMatrix projector_;
};

using State = std::variant<PureState, MixedState>;

TheoryTag theory_of(const State& s);
const SystemLabel& system_of(const State& s);

/// The "nothing happened" outcome: the identity projector.
Outcome null_outcome(const SystemLabel& system);

double born_pure(const PureState& s, const Outcome& m);
PureState update_pure(const PureState& s, const Outcome& m,
                      double threshold = kZeroProbability);

double born_mixed(const MixedState& s, const Outcome& m);
MixedState update_mixed(const MixedState& s, const Outcome& m,
                        double threshold = kZeroProbability);

double born(const State& s, const Outcome& m);
State update(const State& s, const Outcome& m, double threshold = kZeroProbability);

PureState compose_states(const PureState& a, const PureState& b);
MixedState compose_states(const MixedState& a, const MixedState& b);
/// Throws TheoryMismatch when the theories differ.
State compose_states(const State& a, const State& b);
Outcome compose_outcomes(const Outcome& a, const Outcome& b);

// Matrix-level rules. The axiom checker works on raw matrices because a
// candidate transformation may produce something that is not a state.
namespace rules {

double born_ket(const ComplexMatrix& ket, const ComplexMatrix& projector);
ComplexMatrix update_ket(const ComplexMatrix& ket, const ComplexMatrix& projector,
                         double threshold = kZeroProbability);
double born_density(const ComplexMatrix& rho, const ComplexMatrix& projector);
ComplexMatrix update_density(const ComplexMatrix& rho, const ComplexMatrix& projector,
                             double threshold = kZeroProbability);

/// Clamps p into [0, 1] when it lies within `tol` of the boundary.
double clamp_probability(double p, double tol = kDefaultTolerance);

}  // namespace rules

}  // namespace loclab
