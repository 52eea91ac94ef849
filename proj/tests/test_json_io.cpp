#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loclab/errors.hpp"
#include "loclab/json_io.hpp"
#include "oracles.hpp"

using namespace loclab;

TEST_CASE("matrix round trip") {
    Rng rng(RngSeed{51});
    const ComplexMatrix m = haar_isometry(3, 2, rng);
    const ComplexMatrix back = matrix_from_json(parse_json(to_json(m).dump()));
    CHECK(back == m);
}

TEST_CASE("malformed matrices") {
    CHECK_THROWS_AS(parse_json("{"), ParseError);
    CHECK_THROWS_AS(matrix_from_json(parse_json(R"({"rows":1,"cols":2,"data":[[1,0]]})")), ParseError);
    CHECK_THROWS_AS(matrix_from_json(parse_json(R"({"rows":1,"cols":1,"data":[[1]]})")), ParseError);
    CHECK_THROWS_AS(matrix_from_json(parse_json(R"({"rows":1,"cols":1,"data":[["a",0]]})")), ParseError);
    CHECK_THROWS_AS(matrix_from_json(parse_json(R"({"cols":1,"data":[[1,0]]})")), ParseError);
    CHECK_THROWS_AS(matrix_from_json(parse_json(R"({"rows":0,"cols":1,"data":[]})")), ParseError);
}

TEST_CASE("state and outcome round trip") {
    const State s = MixedState(SystemLabel({2, 2}), bell_projector(2));
    const State back = state_from_json(to_json(s));
    CHECK(theory_of(back) == TheoryTag::Mixed);
    CHECK(system_of(back).dims() == std::vector<int>{2, 2});

    const Outcome o(SystemLabel::of_dim(2), projector(basis_ket(2, 1)));
    CHECK(outcome_from_json(to_json(o)).projector() == o.projector());
    CHECK_THROWS_AS(state_from_json(parse_json(R"({"theory":"quantum","dims":[1],"matrix":{"rows":1,"cols":1,"data":[[1,0]]}})")),
                    ParseError);
}

TEST_CASE("family specs") {
    const Json h = parse_json(R"({"theory":"pure","kind":"unitary","matrices":[
        {"rows":2,"cols":2,"data":[[0.7071067811865476,0],[0.7071067811865476,0],
                                   [0.7071067811865476,0],[-0.7071067811865476,0]]}]})");
    const TransFamily f = family_from_json(h);
    CHECK(f.theory() == TheoryTag::Pure);
    CHECK(f.kind() == FamilyKind::LiftedUnitary);

    Json as_mixed = h;
    as_mixed["theory"] = "mixed";
    CHECK(family_from_json(as_mixed).theory() == TheoryTag::Mixed);

    const TransFamily z = family_from_json(parse_json(R"({"kind":"zoo","name":"constant_mixed","dim":3})"));
    CHECK(z.dim_in() == 3);
    CHECK_THROWS_AS(family_from_json(parse_json(R"({"kind":"zoo","name":"constant_mixed","theory":"pure"})")), ParseError);
    CHECK_THROWS_AS(family_from_json(parse_json(R"({"kind":"zoo","name":"missing"})")), UnknownName);
    CHECK_THROWS_AS(family_from_json(parse_json(R"({"kind":"magic"})")), ParseError);
    CHECK_THROWS_AS(family_from_json(parse_json(R"([1,2])")), ParseError);

    const Json again = to_json(f);
    CHECK(again["kind"] == "unitary");
    CHECK(family_from_json(again).kind() == FamilyKind::LiftedUnitary);
}

TEST_CASE("kraus family spec") {
    Rng rng(RngSeed{52});
    Json j{{"theory", "mixed"}, {"kind", "kraus"}, {"matrices", Json::array()}};
    for (const auto& k : random_kraus_channel(2, 2, 3, rng)) j["matrices"].push_back(to_json(k));
    const TransFamily f = family_from_json(j);
    CHECK(f.kind() == FamilyKind::LiftedChannel);
    CHECK(f.matrices().size() == 3);
    j["theory"] = "pure";
    CHECK_THROWS_AS(family_from_json(j), ParseError);
}

TEST_CASE("map specs") {
    CHECK(map_from_json(parse_json(R"({"kind":"zoo","name":"constant"})"), {4, 0.7}).dim_in() == 4);
    CHECK_THROWS_AS(map_from_json(parse_json(R"({"kind":"kraus","matrices":[]})")), ParseError);
}

TEST_CASE("ensemble round trip") {
    const Ensemble e(2, {0.25, 0.75}, {basis_ket(2, 0), basis_ket(2, 1)});
    const Ensemble back = ensemble_from_json(parse_json(to_json(e).dump()));
    CHECK(back.weights() == e.weights());
    CHECK(oracle::max_abs(ensemble_density(back) - ensemble_density(e)) < 1e-15);
}

TEST_CASE("report serialization is stable") {
    SamplingConfig cfg;
    cfg.trials = 20;
    const AxiomReport r = check_all(zoo("transpose_mixed"), cfg);
    const Json j = to_json(r);
    CHECK(j["verdict"] == "fail");
    REQUIRE(!j["witnesses"].empty());
    CHECK(j["witnesses"][0]["kind"] == "invalid_output_state");
    CHECK(j["witnesses"][0].contains("min_eigenvalue"));
    CHECK(j.dump() == to_json(check_all(zoo("transpose_mixed"), cfg)).dump());
}
