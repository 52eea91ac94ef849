#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loclab/errors.hpp"
#include "loclab/json_io.hpp"
#include "loclab/latrans.hpp"
#include "oracles.hpp"

#include <algorithm>

using namespace loclab;

namespace {

SamplingConfig quick(std::uint64_t seed = 5, int trials = 60) {
    SamplingConfig cfg;
    cfg.trials = trials;
    cfg.seed = RngSeed{seed};
    return cfg;
}

bool has_witness(const AxiomReport& r, Axiom a, WitnessKind k) {
    return std::any_of(r.witnesses.begin(), r.witnesses.end(),
                       [&](const Witness& w) { return w.axiom == a && w.kind == k; });
}

}  // namespace

TEST_CASE("lifted isometries satisfy every axiom") {
    Rng rng(RngSeed{21});
    for (const auto [din, dout] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 5}, std::pair{1, 2}}) {
        const TransFamily l = lift_isometry(haar_isometry(dout, din, rng));
        CHECK(l.kind() == (din == dout ? FamilyKind::LiftedUnitary : FamilyKind::LiftedIsometry));
        const AxiomReport r = check_all(l, quick());
        CHECK(r.pass);
        CHECK(r.state_locality.max_violation < 1e-10);
        CHECK(r.no_signaling.max_violation < 1e-10);
        CHECK(r.update_commutativity.max_violation < 1e-10);
        CHECK(r.witnesses.empty());
    }
}

TEST_CASE("lifted channels satisfy every axiom") {
    Rng rng(RngSeed{22});
    for (const auto [din, dout, rank] : {std::tuple{2, 2, 4}, std::tuple{2, 3, 1}, std::tuple{3, 2, 2}}) {
        const TransFamily l = lift_channel(random_kraus_channel(din, dout, rank, rng));
        const AxiomReport r = check_all(l, quick());
        CHECK(r.pass);
        CHECK(r.no_signaling.max_violation < 1e-10);
    }
}

TEST_CASE("lifting rejects bad inputs") {
    ComplexMatrix not_iso = identity(2);
    not_iso(0, 0) = 2.0;
    CHECK_THROWS_AS(lift_isometry(not_iso), NotIsometry);
    CHECK_THROWS_AS(lift_channel({not_iso}), NotTracePreserving);
    CHECK_THROWS_AS(lift_channel({}), NotTracePreserving);

    const TransFamily l = lift_isometry(identity(2));
    CHECK_THROWS_AS(l.apply(2, basis_ket(3, 0)), DimensionMismatch);
}

TEST_CASE("lifted actions match (V ⊗ I) and Σ (K ⊗ I) ρ (K ⊗ I)†") {
    Rng rng(RngSeed{23});
    const ComplexMatrix v = haar_isometry(3, 2, rng);
    const ComplexMatrix psi = random_pure(2 * 3, rng);
    CHECK(oracle::max_abs(lift_isometry(v).apply(3, psi) - oracle::kron(v, oracle::eye(3)) * psi) < 1e-13);

    const auto kraus = random_kraus_channel(2, 2, 3, rng);
    const ComplexMatrix rho = random_density(2 * 4, rng);
    CHECK(oracle::max_abs(lift_channel(kraus).apply(4, rho) - oracle::kraus_apply_extended(kraus, rho, 4)) < 1e-13);
}

TEST_CASE("composition applies the first family first") {
    Rng rng(RngSeed{24});
    const ComplexMatrix u1 = haar_unitary(2, rng), u2 = haar_isometry(3, 2, rng);
    const TransFamily c = compose_families(lift_isometry(u2), lift_isometry(u1));
    CHECK(c.dim_in() == 2);
    CHECK(c.dim_out() == 3);
    const ComplexMatrix psi = random_pure(4, rng);
    CHECK(oracle::max_abs(c.apply(2, psi) - oracle::kron(u2 * u1, oracle::eye(2)) * psi) < 1e-13);
    CHECK_THROWS_AS(compose_families(lift_isometry(u1), lift_isometry(u2)), DimensionMismatch);
    CHECK_THROWS_AS(compose_families(lift_channel({u1}), lift_isometry(u1)), TheoryMismatch);
}

TEST_CASE("identity family") {
    const TransFamily id = identity_family(TheoryTag::Mixed, 3);
    const ComplexMatrix rho = random_density(6, RngSeed{4});
    CHECK(oracle::max_abs(id.apply(2, rho) - rho) < 1e-15);
}

TEST_CASE("nonlinear_phase: no signaling holds, update commutativity fails") {
    const TransFamily l = zoo("nonlinear_phase");
    const AxiomReport r = check_all(l, quick(7, 200));
    CHECK_FALSE(r.pass);
    CHECK(r.state_locality.max_violation < 1e-10);
    CHECK(r.no_signaling.max_violation < 1e-10);
    CHECK(r.update_commutativity.max_violation > 0.01);
    REQUIRE_FALSE(r.witnesses.empty());
    CHECK(r.witnesses.front().axiom == Axiom::UpdateCommutativity);
}

TEST_CASE("nonlinear_phase at theta = 0 is the identity") {
    const AxiomReport r = check_all(zoo("nonlinear_phase", {2, 0.0}), quick());
    CHECK(r.pass);
}

TEST_CASE("constant_pure signals and breaks update commutativity") {
    const AxiomReport r = check_all(zoo("constant_pure"), quick(9, 200));
    CHECK_FALSE(r.pass);
    CHECK(r.state_locality.max_violation < 1e-10);
    CHECK(r.no_signaling.max_violation > 0.1);
    CHECK(r.update_commutativity.max_violation > 0.1);
    CHECK(has_witness(r, Axiom::UpdateCommutativity, WitnessKind::UndefinedUpdate));
}

TEST_CASE("transpose_mixed yields invalid output on the Bell state") {
    const TransFamily l = zoo("transpose_mixed");
    const ComplexMatrix out = l.apply(2, bell_projector(2));
    CHECK(eigvals_hermitian(out).front() == doctest::Approx(-0.5).epsilon(1e-12));

    const AxiomReport r = check_all(l, quick());
    CHECK_FALSE(r.pass);
    REQUIRE(has_witness(r, Axiom::StateLocality, WitnessKind::InvalidOutputState));
    const Witness& w = r.witnesses.front();
    CHECK(w.kind == WitnessKind::InvalidOutputState);
    REQUIRE(w.min_eigenvalue.has_value());
    CHECK(std::abs(*w.min_eigenvalue + 0.5) < 1e-9);
}

TEST_CASE("constant_mixed is locally applicable") {
    const AxiomReport r = check_all(zoo("constant_mixed", {3, 0.7}), quick());
    CHECK(r.pass);
}

TEST_CASE("zoo lookup") {
    CHECK(zoo_family_names().size() >= 4);
    for (const auto& name : zoo_family_names()) CHECK_NOTHROW(zoo(name));
    CHECK_THROWS_AS(zoo("nope"), UnknownName);
}

TEST_CASE("sampling config validation") {
    SamplingConfig cfg;
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = SamplingConfig{};
    cfg.env_dims = {};
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg.env_dims = {0};
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("checker is deterministic in the seed") {
    const TransFamily l = zoo("nonlinear_phase");
    const std::string a = to_json(check_all(l, quick(3))).dump();
    const std::string b = to_json(check_all(l, quick(3))).dump();
    const std::string c = to_json(check_all(l, quick(4))).dump();
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("retain_worst keeps the largest gaps") {
    std::vector<Witness> ws;
    for (int i = 0; i < 8; ++i) {
        Witness w;
        w.trial = i;
        w.gap = 0.1 * ((i * 5) % 8);
        ws.push_back(w);
    }
    retain_worst(ws, 3);
    REQUIRE(ws.size() == 3);
    CHECK(ws[0].gap >= ws[1].gap);
    CHECK(ws[1].gap >= ws[2].gap);
    CHECK(ws[0].gap == doctest::Approx(0.7));
}

TEST_CASE("output validation") {
    CHECK(validate_output(TheoryTag::Pure, basis_ket(2, 0), 2, 1e-9).valid);
    CHECK_FALSE(validate_output(TheoryTag::Pure, 2.0 * basis_ket(2, 0), 2, 1e-9).valid);
    CHECK_FALSE(validate_output(TheoryTag::Mixed, identity(2), 2, 1e-9).valid);
    CHECK_FALSE(validate_output(TheoryTag::Mixed, identity(3) / 3.0, 2, 1e-9).valid);
}
