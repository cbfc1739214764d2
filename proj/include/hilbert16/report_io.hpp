#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "hilbert16/bounds.hpp"
#include "hilbert16/ode_oracle.hpp"
#include "hilbert16/variational.hpp"

namespace hilbert16 {

using json = nlohmann::ordered_json;

// Serialization with doubles printed to 17 significant digits, so identical
// runs produce byte-identical output.
std::string dump_json(const json& j, int indent = 2);

// System files: {"P": "<poly>", "Q": "<poly>", "name": "..."} .
struct SystemFile {
    std::string P;
    std::string Q;
    std::string name;
};

SystemFile read_system_file(const std::string& path);
PlanarSystem parse_system(const SystemFile& sf);

json to_json(const Root2& r);
json to_json(const ContactReport& r, const Box2& window);
json to_json(const DivCurveReport& r);
json to_json(const BehaviorCensus& c);
json to_json(const BoundReport& r);
json to_json(const QuadraticVerdict& v);
json to_json(const Orbit& o);
json to_json(const DescendResult& r);

// CSV emitters (exact schemas documented in the README).
std::string polylines_csv(const std::vector<CurveComponent>& comps);
std::string path_csv(const DiscretizedPath& p);
std::string trace_csv(const std::vector<TracePoint>& trace);
std::string orbit_csv(const Orbit& o);

// Validation of reports produced by this tool: checks the "kind" field and
// the schema of each known report type. Throws on malformed input.
void validate_report_text(const std::string& text);

std::string format_double(double v);  // %.17g

}  // namespace hilbert16
