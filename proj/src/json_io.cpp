#include "loclab/json_io.hpp"

#include "loclab/errors.hpp"

#include <cmath>

namespace loclab {

namespace {

template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

std::vector<int> dims_from_json(const Json& j) {
    std::vector<int> dims = j.get<std::vector<int>>();
    if (dims.empty()) throw ParseError("dims must be a non-empty list");
    return dims;
}

Json dims_to_json(const SystemLabel& s) { return Json(s.dims()); }

}  // namespace

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

Json to_json(const ComplexMatrix& m) {
    Json data = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            data.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        }
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
    return guarded("matrix", [&] {
        const int rows = j.at("rows").get<int>();
        const int cols = j.at("cols").get<int>();
        const Json& data = j.at("data");
        if (rows < 1 || cols < 1) throw ParseError("matrix: rows and cols must be positive");
        if (!data.is_array() || data.size() != static_cast<std::size_t>(rows) * cols) {
            throw ParseError("matrix: data must hold rows*cols entries");
        }
        ComplexMatrix m(rows, cols);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                const Json& entry = data[static_cast<std::size_t>(r) * cols + c];
                if (!entry.is_array() || entry.size() != 2) {
                    throw ParseError("matrix: each entry must be [re, im]");
                }
                m(r, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
            }
        }
        if (!all_finite(m)) throw ParseError("matrix: entries must be finite");
        return m;
    });
}

TheoryTag theory_from_string(const std::string& s) {
    if (s == "pure") return TheoryTag::Pure;
    if (s == "mixed") return TheoryTag::Mixed;
    throw ParseError("theory must be \"pure\" or \"mixed\", got \"" + s + "\"");
}

Json to_json(const State& s) {
    if (const auto* p = std::get_if<PureState>(&s)) {
        return Json{{"theory", "pure"}, {"dims", dims_to_json(p->system())}, {"matrix", to_json(p->ket())}};
    }
    const auto& m = std::get<MixedState>(s);
    return Json{{"theory", "mixed"}, {"dims", dims_to_json(m.system())}, {"matrix", to_json(m.rho())}};
}

State state_from_json(const Json& j) {
    return guarded("state", [&]() -> State {
        const TheoryTag theory = theory_from_string(j.at("theory").get<std::string>());
        SystemLabel system(dims_from_json(j.at("dims")));
        ComplexMatrix m = matrix_from_json(j.at("matrix"));
        if (theory == TheoryTag::Pure) return PureState(std::move(system), std::move(m));
        return MixedState(std::move(system), std::move(m));
    });
}

Json to_json(const Outcome& o) {
    return Json{{"dims", dims_to_json(o.system())}, {"matrix", to_json(o.projector())}};
}

Outcome outcome_from_json(const Json& j) {
    return guarded("outcome", [&] {
        return Outcome(SystemLabel(dims_from_json(j.at("dims"))), matrix_from_json(j.at("matrix")));
    });
}

Json to_json(const TransFamily& f) {
    Json j{{"theory", to_string(f.theory())}};
    switch (f.kind()) {
        case FamilyKind::LiftedUnitary: j["kind"] = "unitary"; break;
        case FamilyKind::LiftedIsometry: j["kind"] = "isometry"; break;
        case FamilyKind::LiftedChannel: j["kind"] = "kraus"; break;
        case FamilyKind::BlackBox:
            j["kind"] = "zoo";
            j["name"] = f.name();
            break;
    }
    j["dim_in"] = f.dim_in();
    j["dim_out"] = f.dim_out();
    if (!f.matrices().empty()) {
        Json ms = Json::array();
        for (const auto& m : f.matrices()) ms.push_back(to_json(m));
        j["matrices"] = std::move(ms);
    }
    return j;
}

namespace {

std::vector<ComplexMatrix> matrices_of(const Json& j) {
    const Json& list = j.at("matrices");
    if (!list.is_array() || list.empty()) throw ParseError("family: matrices must be a non-empty list");
    std::vector<ComplexMatrix> out;
    for (const auto& m : list) out.push_back(matrix_from_json(m));
    return out;
}

ZooParams zoo_params(const Json& j, const ZooParams& defaults) {
    ZooParams p = defaults;
    if (j.contains("dim")) p.dim = j.at("dim").get<int>();
    if (j.contains("theta")) p.theta = j.at("theta").get<double>();
    return p;
}

}  // namespace

TransFamily family_from_json(const Json& j, const ZooParams& defaults) {
    return guarded("family", [&]() -> TransFamily {
        if (!j.is_object()) throw ParseError("family spec must be a JSON object");
        const std::string kind = j.at("kind").get<std::string>();
        std::optional<TheoryTag> theory;
        if (j.contains("theory")) theory = theory_from_string(j.at("theory").get<std::string>());

        auto checked = [&](TransFamily f) {
            if (theory && *theory != f.theory()) {
                throw ParseError(std::string("family '") + f.name() + "' belongs to " +
                                 to_string(f.theory()) + " theory");
            }
            return f;
        };

        if (kind == "unitary" || kind == "isometry") {
            const auto ms = matrices_of(j);
            if (ms.size() != 1) throw ParseError("family: " + kind + " takes exactly one matrix");
            if (kind == "unitary" && ms[0].rows() != ms[0].cols()) {
                throw ParseError("family: unitary matrix must be square");
            }
            if (theory == TheoryTag::Mixed) return lift_channel(ms);
            return lift_isometry(ms[0]);
        }
        if (kind == "kraus") {
            if (theory == TheoryTag::Pure) throw ParseError("family: kraus lists need mixed theory");
            return lift_channel(matrices_of(j));
        }
        if (kind == "zoo") {
            return checked(zoo(j.at("name").get<std::string>(), zoo_params(j, defaults)));
        }
        throw ParseError("family: unknown kind '" + kind + "'");
    });
}

PureStateMap map_from_json(const Json& j, const ZooParams& defaults) {
    return guarded("map", [&]() -> PureStateMap {
        if (!j.is_object()) throw ParseError("map spec must be a JSON object");
        const std::string kind = j.at("kind").get<std::string>();
        if (j.contains("theory") && j.at("theory").get<std::string>() != "pure") {
            throw ParseError("map spec must describe pure-state dynamics");
        }
        if (kind == "unitary" || kind == "isometry") {
            const auto ms = matrices_of(j);
            if (ms.size() != 1) throw ParseError("map: " + kind + " takes exactly one matrix");
            return PureStateMap::linear(ms[0]);
        }
        if (kind == "zoo") {
            const ZooParams p = zoo_params(j, defaults);
            return zoo_map(j.at("name").get<std::string>(), p.dim, p.theta);
        }
        throw ParseError("map: unsupported kind '" + kind + "'");
    });
}

Json to_json(const Ensemble& e) {
    Json kets = Json::array();
    for (const auto& k : e.kets()) kets.push_back(to_json(k));
    return Json{{"dim", e.dim()}, {"weights", e.weights()}, {"kets", std::move(kets)}};
}

Ensemble ensemble_from_json(const Json& j) {
    return guarded("ensemble", [&] {
        std::vector<ComplexMatrix> kets;
        for (const auto& k : j.at("kets")) kets.push_back(matrix_from_json(k));
        return Ensemble(j.at("dim").get<int>(), j.at("weights").get<std::vector<double>>(),
                        std::move(kets));
    });
}

Json to_json(const SamplingConfig& cfg) {
    return Json{{"trials", cfg.trials},
                {"env_dims", cfg.env_dims},
                {"seed", cfg.seed.value},
                {"tolerance", cfg.tolerance},
                {"entangled_fraction", cfg.entangled_fraction},
                {"max_witnesses", cfg.max_witnesses},
                {"bell_probes", cfg.bell_probes}};
}

Json to_json(const Witness& w) {
    Json j{{"axiom", to_string(w.axiom)},
           {"kind", to_string(w.kind)},
           {"trial", w.trial},
           {"env_dim", w.env_dim},
           {"gap", w.gap}};
    if (!w.detail.empty()) j["detail"] = w.detail;
    if (w.min_eigenvalue) j["min_eigenvalue"] = *w.min_eigenvalue;
    j["state"] = to_json(w.state);
    j["outcome"] = w.outcome.size() > 0 ? to_json(w.outcome) : Json(nullptr);
    return j;
}

Json to_json(const AxiomFragment& f) {
    Json ws = Json::array();
    for (const auto& w : f.witnesses) ws.push_back(to_json(w));
    return Json{{"axiom", to_string(f.axiom)},
                {"trials", f.trials},
                {"evaluated", f.evaluated},
                {"skipped", f.skipped},
                {"invalid_outputs", f.invalid_outputs},
                {"max_violation", f.max_violation},
                {"witnesses", std::move(ws)}};
}

Json to_json(const AxiomReport& r) {
    Json ws = Json::array();
    for (const auto& w : r.witnesses) ws.push_back(to_json(w));
    return Json{{"verdict", r.pass ? "pass" : "fail"},
                {"tolerance", r.tolerance},
                {"trials", r.trials},
                {"state_locality", to_json(r.state_locality)},
                {"no_signaling", to_json(r.no_signaling)},
                {"update_commutativity", to_json(r.update_commutativity)},
                {"witnesses", std::move(ws)}};
}

Json to_json(const ExtractedOperator& e) {
    return Json{{"classification", to_string(e.classification)},
                {"isometry_defect", e.isometry_defect},
                {"matrix", to_json(e.matrix)}};
}

Json to_json(const ChoiMatrix& c) {
    return Json{{"dim_in", c.dim_in},
                {"dim_out", c.dim_out},
                {"cp_defect", c.cp_defect},
                {"tp_defect", c.tp_defect},
                {"matrix", to_json(c.matrix)}};
}

Json to_json(const EquivalenceReport& r) {
    Json j{{"verdict", r.pass ? "pass" : "fail"},
           {"env_dims", r.env_dims},
           {"trials", r.trials},
           {"tolerance", r.tolerance},
           {"max_distance", r.max_distance}};
    if (r.worst_trial >= 0) {
        j["witness"] = Json{{"trial", r.worst_trial},
                            {"env_dim", r.worst_env_dim},
                            {"state", to_json(r.worst_state)}};
    }
    return j;
}

Json to_json(const SwapReport& r) {
    return Json{{"verdict", r.pass ? "pass" : "fail"},
                {"trials", r.trials},
                {"tolerance", r.tolerance},
                {"max_gap", r.max_gap}};
}

Json to_json(const Certificate& c) {
    Json ws = Json::array();
    for (const auto& w : c.witnesses) ws.push_back(to_json(w));
    Json j{{"verdict", to_string(c.verdict)},
           {"theory", to_string(c.theory)},
           {"classification", c.classification},
           {"isometry_defect", c.isometry_defect},
           {"cp_defect", c.cp_defect},
           {"tp_defect", c.tp_defect},
           {"equivalence_max_gap", c.equivalence_max_gap},
           {"witnesses", std::move(ws)}};
    j[c.theory == TheoryTag::Pure ? "operator" : "choi"] = to_json(c.matrix);
    j["axioms"] = to_json(c.axioms);
    return j;
}

Json to_json(const SteeringScenario& s) {
    auto measurement = [](const ProjectiveMeasurement& m) {
        Json ps = Json::array();
        for (const auto& p : m.projectors) ps.push_back(to_json(p));
        return ps;
    };
    return Json{{"alice_dim", s.alice_dim},
                {"bob_dim", s.bob_dim},
                {"shared_state", to_json(s.shared_state)},
                {"m1", measurement(s.m1)},
                {"m2", measurement(s.m2)},
                {"target1", to_json(s.target1)},
                {"target2", to_json(s.target2)}};
}

Json to_json(const NonlinearityReport& r) {
    Json j{{"is_linearizable", r.is_linearizable},
           {"max_deviation", r.max_deviation},
           {"candidate", to_json(r.candidate)}};
    if (r.witness) {
        j["witness"] = Json{{"probe", r.witness->probe},
                            {"level", r.witness->level},
                            {"deviation", r.witness->deviation},
                            {"state", to_json(r.witness->state)}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

}  // namespace loclab
