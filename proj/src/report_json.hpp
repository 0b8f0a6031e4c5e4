#pragma once

#include <json.hpp>

#include "pcomp/asymptotics.hpp"
#include "pcomp/eigen.hpp"
#include "pcomp/evolution.hpp"
#include "pcomp/front.hpp"
#include "pcomp/model.hpp"
#include "pcomp/scenario.hpp"
#include "pcomp/stationary.hpp"

namespace pcomp {

using json = nlohmann::ordered_json;

json to_json(const SystemParams& p);
json to_json(const HypothesisReport& r);
json to_json(const Scenario& s);
json to_json(const ExtinctionStabilityReport& r);
json to_json(const MaxPrincipleAudit& a);
json to_json(const InstabilityCertificate& c);
json to_json(const StationaryReport& r);
json to_json(const StepTelemetry& t);
json to_json(const FrontResult& r);
json to_json(const FrontVerification& v);
json to_json(const CounterPropagation& c);
json to_json(const BasinCounts& b);
json to_json(const SweepRecord& r);
json to_json(const SweepSummary& s);
json to_json(const SegregatedSolution& s);
json to_json(const NodalReport& r);
json to_json(const RadiusResult& r);

}  // namespace pcomp
