#pragma once

// JSON wire formats.
//
//   matrix    {"rows":n,"cols":m,"data":[[re,im],...]}        row-major
//   state     {"theory":"pure"|"mixed","dims":[...],"matrix":<matrix>}
//   outcome   {"dims":[...],"matrix":<matrix>}
//   family    {"theory":...,"kind":"unitary"|"isometry"|"kraus"|"zoo",
//              "name":?,"matrices":[<matrix>...],"dim":?,"theta":?}
//   ensemble  {"dim":d,"weights":[...],"kets":[<matrix>...]}

#include "loclab/gisin.hpp"
#include "loclab/latrans.hpp"
#include "loclab/reconstruct.hpp"
#include "loclab/smt.hpp"

#include <json.hpp>

#include <string>

namespace loclab {

using Json = nlohmann::ordered_json;

Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json to_json(const State& s);
State state_from_json(const Json& j);

Json to_json(const Outcome& o);
Outcome outcome_from_json(const Json& j);

TheoryTag theory_from_string(const std::string& s);

/// Family description for lifted families; zoo and composite families are
/// described by name only.
Json to_json(const TransFamily& f);
/// `defaults` supplies dim/theta for zoo entries that omit them.
TransFamily family_from_json(const Json& j, const ZooParams& defaults = {});
/// Pure-state map from a family-style spec: unitary/isometry give a linear
/// map, zoo names refer to the built-in maps.
PureStateMap map_from_json(const Json& j, const ZooParams& defaults = {});

Json to_json(const Ensemble& e);
Ensemble ensemble_from_json(const Json& j);

Json to_json(const SamplingConfig& cfg);
Json to_json(const Witness& w);
Json to_json(const AxiomFragment& f);
Json to_json(const AxiomReport& r);
Json to_json(const ExtractedOperator& e);
Json to_json(const ChoiMatrix& c);
Json to_json(const EquivalenceReport& r);
Json to_json(const SwapReport& r);
Json to_json(const Certificate& c);
Json to_json(const SteeringScenario& s);
Json to_json(const NonlinearityReport& r);

/// Parses text, mapping every JSON error to ParseError.
Json parse_json(const std::string& text);

}  // namespace loclab
