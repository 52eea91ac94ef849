#include "loclab/smt.hpp"

#include "loclab/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace loclab {

const char* to_string(TheoryTag tag) { return tag == TheoryTag::Pure ? "pure" : "mixed"; }

SystemLabel::SystemLabel(std::vector<int> dims) : dims_(std::move(dims)), total_dim_(1) {
    if (dims_.empty()) throw DimensionMismatch("system label needs at least one factor");
    for (int d : dims_) {
        if (d < 1) throw DimensionMismatch("system factor dimensions must be positive");
        total_dim_ *= d;
    }
}

SystemLabel operator*(const SystemLabel& a, const SystemLabel& b) {
    std::vector<int> dims = a.dims_;
    dims.insert(dims.end(), b.dims_.begin(), b.dims_.end());
    return SystemLabel(std::move(dims));
}

PureState::PureState(SystemLabel system, ComplexMatrix ket, double tol)
    : system_(std::move(system)), ket_(std::move(ket)) {
    if (ket_.cols() != 1 || ket_.rows() != system_.total_dim()) {
        throw InvalidState("pure state: ket must be " + std::to_string(system_.total_dim()) +
                           "x1");
    }
    if (!all_finite(ket_)) throw InvalidState("pure state: non-finite amplitude");
    if (std::abs(ket_.norm() - 1.0) > tol) throw InvalidState("pure state: ket is not normalized");
}

MixedState::MixedState(SystemLabel system, ComplexMatrix rho, double tol)
    : system_(std::move(system)), rho_(std::move(rho)) {
    const int n = system_.total_dim();
    if (rho_.rows() != n || rho_.cols() != n) {
        throw InvalidState("mixed state: density matrix must be " + std::to_string(n) + "x" +
                           std::to_string(n));
    }
    if (!all_finite(rho_)) throw InvalidState("mixed state: non-finite entry");
    if (!is_hermitian(rho_, tol)) throw InvalidState("mixed state: not Hermitian");
    if (std::abs(rho_.trace().real() - 1.0) > tol) throw InvalidState("mixed state: trace != 1");
    if (eigvals_hermitian(rho_, tol).front() < -tol) {
        throw InvalidState("mixed state: negative eigenvalue");
    }
}

MixedState MixedState::from_pure(const PureState& s) {
    return MixedState(s.system(), s.density());
}

Outcome::Outcome(SystemLabel system, ComplexMatrix projector, double tol)
    : system_(std::move(system)), projector_(std::move(projector)) {
    const int n = system_.total_dim();
    if (projector_.rows() != n || projector_.cols() != n) {
        throw InvalidOutcome("outcome: projector must be " + std::to_string(n) + "x" +
                             std::to_string(n));
    }
    if (!is_hermitian(projector_, tol)) throw InvalidOutcome("outcome: not Hermitian");
    if ((projector_ * projector_ - projector_).norm() > tol) {
        throw InvalidOutcome("outcome: not idempotent");
    }
}

TheoryTag theory_of(const State& s) {
    return std::holds_alternative<PureState>(s) ? TheoryTag::Pure : TheoryTag::Mixed;
}

const SystemLabel& system_of(const State& s) {
    return std::visit([](const auto& x) -> const SystemLabel& { return x.system(); }, s);
}

Outcome null_outcome(const SystemLabel& system) {
    return Outcome(system, identity(system.total_dim()));
}

namespace rules {

double clamp_probability(double p, double tol) {
    if (p < 0.0 && p >= -tol) return 0.0;
    if (p > 1.0 && p <= 1.0 + tol) return 1.0;
    return p;
}

double born_ket(const ComplexMatrix& ket, const ComplexMatrix& projector) {
    if (projector.cols() != ket.rows() || projector.rows() != ket.rows()) {
        throw DimensionMismatch("born: outcome and state dimensions differ");
    }
    return clamp_probability((ket.adjoint() * projector * ket)(0, 0).real());
}

ComplexMatrix update_ket(const ComplexMatrix& ket, const ComplexMatrix& projector,
                         double threshold) {
    const double p = born_ket(ket, projector);
    if (p <= threshold) throw ZeroProbabilityUpdate(p);
    ComplexMatrix out = projector * ket;
    return out / out.norm();
}

double born_density(const ComplexMatrix& rho, const ComplexMatrix& projector) {
    if (projector.rows() != rho.rows() || projector.cols() != rho.cols() ||
        rho.rows() != rho.cols()) {
        throw DimensionMismatch("born: outcome and state dimensions differ");
    }
    // Tr(ρπ) without forming the product.
    return clamp_probability((rho.cwiseProduct(projector.transpose())).sum().real());
}

ComplexMatrix update_density(const ComplexMatrix& rho, const ComplexMatrix& projector,
                             double threshold) {
    const double p = born_density(rho, projector);
    if (p <= threshold) throw ZeroProbabilityUpdate(p);
    ComplexMatrix out = projector * rho * projector;
    return out / out.trace().real();
}

}  // namespace rules

namespace {

void require_same_system(const SystemLabel& a, const SystemLabel& b) {
    if (a.total_dim() != b.total_dim()) {
        throw DimensionMismatch("state and outcome live on systems of different dimension");
    }
}

}  // namespace

double born_pure(const PureState& s, const Outcome& m) {
    require_same_system(s.system(), m.system());
    return rules::born_ket(s.ket(), m.projector());
}

PureState update_pure(const PureState& s, const Outcome& m, double threshold) {
    require_same_system(s.system(), m.system());
    return PureState(s.system(), rules::update_ket(s.ket(), m.projector(), threshold));
}

double born_mixed(const MixedState& s, const Outcome& m) {
    require_same_system(s.system(), m.system());
    return rules::born_density(s.rho(), m.projector());
}

MixedState update_mixed(const MixedState& s, const Outcome& m, double threshold) {
    require_same_system(s.system(), m.system());
    return MixedState(s.system(), rules::update_density(s.rho(), m.projector(), threshold));
}

double born(const State& s, const Outcome& m) {
    return std::visit(
        [&](const auto& x) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, PureState>) {
                return born_pure(x, m);
            } else {
                return born_mixed(x, m);
            }
        },
        s);
}

State update(const State& s, const Outcome& m, double threshold) {
    return std::visit(
        [&](const auto& x) -> State {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, PureState>) {
                return update_pure(x, m, threshold);
            } else {
                return update_mixed(x, m, threshold);
            }
        },
        s);
}

PureState compose_states(const PureState& a, const PureState& b) {
    return PureState(a.system() * b.system(), tensor(a.ket(), b.ket()));
}

MixedState compose_states(const MixedState& a, const MixedState& b) {
    return MixedState(a.system() * b.system(), tensor(a.rho(), b.rho()));
}

State compose_states(const State& a, const State& b) {
    if (theory_of(a) != theory_of(b)) {
        throw TheoryMismatch("cannot compose a pure state with a mixed state");
    }
    if (theory_of(a) == TheoryTag::Pure) {
        return compose_states(std::get<PureState>(a), std::get<PureState>(b));
    }
    return compose_states(std::get<MixedState>(a), std::get<MixedState>(b));
}

Outcome compose_outcomes(const Outcome& a, const Outcome& b) {
    return Outcome(a.system() * b.system(), tensor(a.projector(), b.projector()));
}

}  // namespace loclab
