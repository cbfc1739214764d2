#include "hilbert16/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hilbert16 {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void dump_value(const json& j, std::string& out, int indent, int depth) {
    const std::string pad(std::size_t(indent) * depth, ' ');
    const std::string pad_in(std::size_t(indent) * (depth + 1), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                out += json(it.key()).dump();
                out += ": ";
                dump_value(it.value(), out, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& el : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_value(el, out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

json window_json(const Box2& w) {
    return json{{"x_lo", w.x_lo}, {"x_hi", w.x_hi}, {"y_lo", w.y_lo}, {"y_hi", w.y_hi}};
}

}  // namespace

std::string dump_json(const json& j, int indent) {
    std::string out;
    dump_value(j, out, indent, 0);
    out += "\n";
    return out;
}

SystemFile read_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::usage, "cannot open system file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(errc::usage, "system file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.contains("P") || !j.contains("Q"))
        throw Error(errc::usage, "system file needs string fields P and Q");
    SystemFile sf;
    sf.P = j.at("P").get<std::string>();
    sf.Q = j.at("Q").get<std::string>();
    sf.name = j.value("name", "");
    return sf;
}

PlanarSystem parse_system(const SystemFile& sf) {
    return PlanarSystem(parse_poly(sf.P), parse_poly(sf.Q));
}

json to_json(const Root2& r) {
    return json{{"x", r.point.x},
                {"y", r.point.y},
                {"radius", r.radius},
                {"simple", r.simple},
                {"jacobian_det", r.jacobian_det}};
}

json to_json(const ContactReport& r, const Box2& window) {
    json roots = json::array();
    for (const auto& root : r.points) roots.push_back(to_json(root));
    json undecided = json::array();
    for (const auto& b : r.undecided) undecided.push_back(window_json(b));
    return json{{"kind", "contacts"},
                {"N", r.N},
                {"roots", roots},
                {"undecided_boxes", undecided},
                {"window", window_json(window)}};
}

json to_json(const DivCurveReport& r) {
    json comps = json::array();
    for (const auto& c : r.components) {
        json pl = json::array();
        for (const auto& v : c.polyline) pl.push_back(json::array({v.x, v.y}));
        comps.push_back(json{{"kind", c.kind == ComponentKind::Oval ? "oval" : "line"},
                             {"touches_boundary", c.touches_boundary},
                             {"vertices", (int)c.polyline.size()},
                             {"polyline", pl}});
    }
    json sing = json::array();
    for (const auto& p : r.singular_points) sing.push_back(json::array({p.x, p.y}));
    return json{{"kind", "divcurve"},   {"M", r.M},
                {"generic", r.generic}, {"components", comps},
                {"singular_points", sing}, {"window", window_json(r.window)},
                {"grid", r.grid},       {"warnings", r.warnings}};
}

json to_json(const BehaviorCensus& c) {
    json per = json::array();
    for (const auto& b : c.per_component)
        per.push_back(json{{"component", b.component_id},
                           {"kind", b.kind == ComponentKind::Oval ? "oval" : "line"},
                           {"contacts", b.contacts},
                           {"behaviors", b.behaviors},
                           {"boundary_terminated", b.boundary_terminated}});
    return json{{"kind", "census"}, {"behaviors", c.total}, {"per_component", per}};
}

json to_json(const BoundReport& r) {
    return json{{"kind", "bounds"},
                {"n", r.n},
                {"M", r.M},
                {"N", r.N},
                {"master_bound", r.master_bound},
                {"quartic_bound", r.quartic_bound},
                {"harnack_cap_on_M", r.harnack_cap_on_M},
                {"bezout_cap_on_N", r.bezout_cap_on_N},
                {"behaviors", r.behaviors},
                {"notes", r.notes}};
}

json to_json(const QuadraticVerdict& v) {
    json j{{"kind", "quadratic_verdict"},
           {"verdict", v.verdict},
           {"branch", v.branch},
           {"H2", v.hilbert_h2}};
    if (v.bound) j["bound"] = *v.bound;
    return j;
}

json to_json(const Orbit& o) {
    json j{{"kind", "orbit"}, {"samples", (int)o.points.size()}};
    if (o.period) j["period"] = *o.period;
    if (o.return_map_derivative) j["return_map_derivative"] = *o.return_map_derivative;
    json pts = json::array();
    for (std::size_t i = 0; i < o.points.size(); ++i)
        pts.push_back(json::array({o.times[i], o.points[i].x, o.points[i].y}));
    j["points"] = pts;
    return j;
}

json to_json(const DescendResult& r) {
    const char* reason = r.reason == StopReason::Converged
                             ? "converged"
                             : r.reason == StopReason::MaxIters ? "max_iters" : "step_floor";
    json path = json::array();
    for (int i = 0; i < r.path.K(); ++i)
        path.push_back(json::array({double(i) / r.path.K(), r.path.x[i], r.path.y[i]}));
    return json{{"kind", "descend"},
                {"energy", r.energy},
                {"grad_norm", r.grad_norm},
                {"iterations", r.trace.empty() ? 0 : r.trace.back().iter},
                {"stop_reason", reason},
                {"K", r.path.K()},
                {"path", path}};
}

std::string polylines_csv(const std::vector<CurveComponent>& comps) {
    std::string out = "component_id,kind,x,y\n";
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const char* kind = comps[i].kind == ComponentKind::Oval ? "oval" : "line";
        for (const auto& v : comps[i].polyline)
            out += std::to_string(i) + "," + kind + "," + format_double(v.x) + "," +
                   format_double(v.y) + "\n";
    }
    return out;
}

std::string path_csv(const DiscretizedPath& p) {
    std::string out = "t,x,y\n";
    for (int i = 0; i < p.K(); ++i)
        out += format_double(double(i) / p.K()) + "," + format_double(p.x[i]) + "," +
               format_double(p.y[i]) + "\n";
    return out;
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
    std::string out = "iter,energy,grad_norm,winding\n";
    for (const auto& t : trace)
        out += std::to_string(t.iter) + "," + format_double(t.energy) + "," +
               format_double(t.grad_norm) + "," + std::to_string(t.winding) + "\n";
    return out;
}

std::string orbit_csv(const Orbit& o) {
    std::string out = "t,x,y\n";
    for (std::size_t i = 0; i < o.points.size(); ++i)
        out += format_double(o.times[i]) + "," + format_double(o.points[i].x) + "," +
               format_double(o.points[i].y) + "\n";
    return out;
}

void validate_report_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw Error(errc::usage, std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw Error(errc::usage, "report must be an object with a string 'kind' field");
    const std::string kind = j.at("kind").get<std::string>();
    auto need = [&](std::initializer_list<const char*> fields) {
        for (const char* f : fields)
            if (!j.contains(f))
                throw Error(errc::usage,
                            "report of kind '" + kind + "' is missing field '" + f + "'");
    };
    if (kind == "bounds")
        need({"n", "M", "N", "master_bound", "quartic_bound", "behaviors"});
    else if (kind == "divcurve")
        need({"M", "generic", "components", "singular_points", "window", "grid"});
    else if (kind == "contacts")
        need({"N", "roots", "undecided_boxes"});
    else if (kind == "census")
        need({"behaviors", "per_component"});
    else if (kind == "orbit")
        need({"samples", "points"});
    else if (kind == "descend")
        need({"energy", "grad_norm", "stop_reason", "K", "path"});
    else if (kind == "quadratic_verdict")
        need({"verdict", "branch", "H2"});
    else if (kind == "bounds_table")
        need({"rows"});
    else
        throw Error(errc::usage, "unknown report kind '" + kind + "'");
}

}  // namespace hilbert16
