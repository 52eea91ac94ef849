#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loclab/errors.hpp"
#include "loclab/reconstruct.hpp"
#include "oracles.hpp"

using namespace loclab;

namespace {

ComplexMatrix hadamard() {
    ComplexMatrix h(2, 2);
    h << 1, 1, 1, -1;
    return h * M_SQRT1_2;
}

SamplingConfig quick(int trials = 40) {
    SamplingConfig cfg;
    cfg.trials = trials;
    cfg.seed = RngSeed{17};
    return cfg;
}

}  // namespace

TEST_CASE("extracting the Hadamard") {
    const ExtractedOperator ex = extract_pure_operator(lift_isometry(hadamard()));
    CHECK(oracle::max_abs(ex.matrix - hadamard()) < 1e-14);
    CHECK(ex.classification == OperatorClass::Unitary);
    CHECK(ex.isometry_defect < 1e-14);
}

TEST_CASE("extracting rectangular isometries") {
    Rng rng(RngSeed{31});
    const ComplexMatrix v = haar_isometry(5, 3, rng);
    const ExtractedOperator ex = extract_pure_operator(lift_isometry(v));
    CHECK((ex.matrix - v).norm() < 1e-12);
    CHECK(ex.classification == OperatorClass::Isometry);
    const EquivalenceReport eq = verify_equivalence(lift_isometry(v), ex, quick());
    CHECK(eq.pass);
    CHECK(eq.max_distance < 1e-12);
}

TEST_CASE("a non-linear family extracts to something that fails") {
    const TransFamily l = zoo("nonlinear_phase");
    const Certificate c = certify(l, quick());
    CHECK(c.verdict == Verdict::Violating);
    CHECK_FALSE(c.witnesses.empty());
}

TEST_CASE("Choi matrix of a lifted channel matches the Kraus oracle") {
    Rng rng(RngSeed{32});
    for (const auto [din, dout, rank] : {std::tuple{2, 2, 1}, std::tuple{2, 3, 4}, std::tuple{3, 2, 5}}) {
        const auto kraus = random_kraus_channel(din, dout, rank, rng);
        const ChoiMatrix j = extract_choi(lift_channel(kraus));
        CHECK(oracle::max_abs(j.matrix - oracle::kraus_to_choi(kraus)) < 1e-13);
        CHECK(j.cp_defect < 1e-12);
        CHECK(j.tp_defect < 1e-12);
        CHECK(j.completely_positive());
        CHECK(j.trace_preserving());
    }
}

TEST_CASE("three ways of applying a Choi matrix agree with Kraus action") {
    Rng rng(RngSeed{33});
    const auto kraus = random_kraus_channel(3, 2, 3, rng);
    const ChoiMatrix j = make_choi(oracle::kraus_to_choi(kraus), 3, 2);
    for (int t = 0; t < 5; ++t) {
        const ComplexMatrix rho = random_density(3, rng);
        const ComplexMatrix expected = oracle::kraus_apply(kraus, rho);
        CHECK(oracle::max_abs(apply_choi(j, rho) - expected) < 1e-13);
        CHECK(oracle::max_abs(apply_choi_sandwich(j, rho) - expected) < 1e-13);
        const ComplexMatrix rho_x = random_density(3 * 2, rng);
        CHECK(oracle::max_abs(apply_choi_extended(j, rho_x, 2) - oracle::kraus_apply_extended(kraus, rho_x, 2)) < 1e-13);
    }
    CHECK_THROWS_AS(apply_choi(j, random_density(2, rng)), DimensionMismatch);
}

TEST_CASE("Choi composition follows Kraus products") {
    Rng rng(RngSeed{34});
    const auto k1 = random_kraus_channel(2, 3, 2, rng);
    const auto k2 = random_kraus_channel(3, 2, 3, rng);
    std::vector<ComplexMatrix> k21;
    for (const auto& b : k2)
        for (const auto& a : k1) k21.push_back(b * a);
    const ChoiMatrix j = compose_choi(make_choi(oracle::kraus_to_choi(k2), 3, 2),
                                      make_choi(oracle::kraus_to_choi(k1), 2, 3));
    CHECK(j.dim_in == 2);
    CHECK(j.dim_out == 2);
    CHECK(oracle::max_abs(j.matrix - oracle::kraus_to_choi(k21)) < 1e-13);
}

TEST_CASE("transposition is positive but not completely positive") {
    const ChoiMatrix j = extract_choi(zoo("transpose_mixed"));
    CHECK(j.cp_defect == doctest::Approx(1.0));
    CHECK(j.tp_defect < 1e-12);
    CHECK_FALSE(j.completely_positive());
    const Certificate c = certify(zoo("transpose_mixed"), quick());
    CHECK(c.verdict == Verdict::Violating);
    CHECK(c.classification == "not_completely_positive");
}

TEST_CASE("constant_mixed certifies as a channel") {
    const Certificate c = certify(zoo("constant_mixed"), quick());
    CHECK(c.verdict == Verdict::LocallyApplicable);
    CHECK(c.classification == "channel");
    CHECK(c.cp_defect < 1e-12);
    CHECK(c.tp_defect < 1e-12);
}

TEST_CASE("certificates of lifted families") {
    const Certificate c = certify(lift_isometry(hadamard()), quick());
    CHECK(c.verdict == Verdict::LocallyApplicable);
    CHECK(c.classification == "unitary");
    CHECK(c.equivalence_max_gap < 1e-12);
}

TEST_CASE("swap compatibility") {
    Rng rng(RngSeed{35});
    const SwapReport r = check_swap_compatibility(lift_channel(random_kraus_channel(2, 2, 2, rng)), quick(20));
    CHECK(r.pass);
    CHECK(r.max_gap < 1e-12);
    CHECK_THROWS_AS(check_swap_compatibility(lift_isometry(hadamard()), quick()), TheoryMismatch);
}

TEST_CASE("theory and shape errors") {
    CHECK_THROWS_AS(extract_choi(lift_isometry(hadamard())), TheoryMismatch);
    CHECK_THROWS_AS(extract_pure_operator(zoo("constant_mixed")), TheoryMismatch);
    CHECK_THROWS_AS(make_choi(identity(3), 2, 2), DimensionMismatch);
    CHECK_THROWS_AS(compose_choi(make_choi(identity(4), 2, 2), make_choi(identity(6), 2, 3)),
                    DimensionMismatch);
}
