#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loclab/errors.hpp"
#include "loclab/smt.hpp"
#include "oracles.hpp"

using namespace loclab;

namespace {

ComplexMatrix plus_ket() {
    ComplexMatrix k(2, 1);
    k << M_SQRT1_2, M_SQRT1_2;
    return k;
}

const SystemLabel qubit = SystemLabel::of_dim(2);

}  // namespace

TEST_CASE("system labels compose by concatenation") {
    const SystemLabel ab = qubit * SystemLabel({3, 2});
    CHECK(ab.dims() == std::vector<int>{2, 3, 2});
    CHECK(ab.total_dim() == 12);
    CHECK_THROWS_AS(SystemLabel({}), DimensionMismatch);
    CHECK_THROWS_AS(SystemLabel({2, 0}), DimensionMismatch);
}

TEST_CASE("state and outcome validation") {
    CHECK_THROWS_AS(PureState(qubit, 2.0 * basis_ket(2, 0)), InvalidState);
    CHECK_THROWS_AS(PureState(qubit, basis_ket(3, 0)), InvalidState);
    CHECK_THROWS_AS(MixedState(qubit, identity(2)), InvalidState);
    ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(MixedState(qubit, neg), InvalidState);
    CHECK_THROWS_AS(Outcome(qubit, 0.5 * identity(2)), InvalidOutcome);
    CHECK_NOTHROW(Outcome(qubit, projector(plus_ket())));
}

TEST_CASE("Born rule and update, pure theory") {
    const PureState plus(qubit, plus_ket());
    const Outcome zero(qubit, projector(basis_ket(2, 0)));
    CHECK(born_pure(plus, zero) == doctest::Approx(0.5));
    const PureState after = update_pure(plus, zero);
    CHECK(oracle::max_abs(after.ket() - basis_ket(2, 0)) < 1e-14);

    const PureState one(qubit, basis_ket(2, 1));
    CHECK(born_pure(one, zero) == doctest::Approx(0.0));
    CHECK_THROWS_AS(update_pure(one, zero), ZeroProbabilityUpdate);
}

TEST_CASE("Born rule and update, mixed theory") {
    const MixedState rho = MixedState::from_pure(PureState(qubit, plus_ket()));
    const Outcome zero(qubit, projector(basis_ket(2, 0)));
    CHECK(born_mixed(rho, zero) == doctest::Approx(0.5));
    CHECK(oracle::max_abs(update_mixed(rho, zero).rho() - projector(basis_ket(2, 0))) < 1e-14);

    const MixedState maximally(qubit, 0.5 * identity(2));
    CHECK(born_mixed(maximally, Outcome(qubit, projector(plus_ket()))) == doctest::Approx(0.5));
}

TEST_CASE("the null outcome is certain and leaves states alone") {
    const PureState plus(qubit, plus_ket());
    const Outcome nothing = null_outcome(qubit);
    CHECK(born_pure(plus, nothing) == doctest::Approx(1.0));
    CHECK(oracle::max_abs(update_pure(plus, nothing).ket() - plus.ket()) < 1e-15);
}

TEST_CASE("composition of states and outcomes") {
    const PureState a(qubit, plus_ket());
    const PureState b(SystemLabel::of_dim(3), basis_ket(3, 2));
    const PureState ab = compose_states(a, b);
    CHECK(ab.system().dims() == std::vector<int>{2, 3});
    CHECK(oracle::max_abs(ab.ket() - oracle::kron(a.ket(), b.ket())) < 1e-15);

    const Outcome m = compose_outcomes(Outcome(qubit, projector(basis_ket(2, 0))),
                                       Outcome(SystemLabel::of_dim(3), projector(basis_ket(3, 2))));
    CHECK(born_pure(ab, m) == doctest::Approx(0.5));

    const State s1 = a;
    const State s2 = MixedState::from_pure(a);
    CHECK_THROWS_AS(compose_states(s1, s2), TheoryMismatch);
    CHECK(theory_of(compose_states(s2, s2)) == TheoryTag::Mixed);
}

TEST_CASE("variant dispatch") {
    const State s = PureState(qubit, plus_ket());
    const Outcome zero(qubit, projector(basis_ket(2, 0)));
    CHECK(born(s, zero) == doctest::Approx(0.5));
    CHECK(theory_of(update(s, zero)) == TheoryTag::Pure);
    CHECK_THROWS_AS(born(s, Outcome(SystemLabel::of_dim(3), identity(3))), DimensionMismatch);
}

TEST_CASE("matrix-level rules agree with the typed ones") {
    Rng rng(RngSeed{3});
    const ComplexMatrix psi = random_pure(4, rng);
    const ComplexMatrix p = random_projector(4, 2, rng);
    CHECK(rules::born_ket(psi, p) == doctest::Approx(rules::born_density(projector(psi), p)));
    const ComplexMatrix k = rules::update_ket(psi, p);
    CHECK(oracle::max_abs(projector(k) - rules::update_density(projector(psi), p)) < 1e-12);
    CHECK(rules::clamp_probability(1.0 + 1e-12) == 1.0);
    CHECK(rules::clamp_probability(-1e-12) == 0.0);
}
