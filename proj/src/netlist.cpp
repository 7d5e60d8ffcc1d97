#include "fluxcharge/netlist.hpp"

#include "fluxcharge/errors.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace fluxcharge {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail_parse(const std::string& message) {
    throw CircuitError(ErrorKind::parse, "netlist: " + message);
}

const json& require(const json& obj, const char* key, const char* where) {
    if (!obj.contains(key)) fail_parse(std::string(where) + ": missing field \"" + key + "\"");
    return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const char* where) {
    const json& v = require(obj, key, where);
    if (!v.is_string()) fail_parse(std::string(where) + ": field \"" + key + "\" must be a string");
    return v.get<std::string>();
}

Rational parse_parameter(const json& v, const std::string& edge_id) {
    std::string text;
    if (v.is_string()) {
        text = v.get<std::string>();
    } else if (v.is_number_integer()) {
        text = std::to_string(v.get<long long>());
    } else if (v.is_number_float()) {
        // Round-trip through the shortest decimal so exact decimals stay exact.
        std::array<char, 32> buf{};
        const auto out = std::to_chars(buf.data(), buf.data() + buf.size(), v.get<double>());
        text.assign(buf.data(), out.ptr);
    } else {
        fail_parse("edge \"" + edge_id + "\": parameter must be a rational string or number");
    }
    auto r = parse_rational(text);
    if (!r) fail_parse("edge \"" + edge_id + "\": cannot parse rational \"" + text + "\"");
    return *r;
}

WalkStep parse_walk_step(const json& v, const std::string& loop_id) {
    if (!v.is_string())
        fail_parse("loop \"" + loop_id + "\": walk entries must be edge-id strings");
    std::string s = v.get<std::string>();
    WalkStep step;
    if (!s.empty() && s[0] == '-') {
        step.forward = false;
        s = s.substr(1);
    }
    if (s.empty()) fail_parse("loop \"" + loop_id + "\": empty edge reference in walk");
    step.edge = s;
    return step;
}

std::vector<RationalVector> parse_choice_rows(const json& arr, const char* which) {
    if (!arr.is_array()) fail_parse(std::string("variable_choice.") + which + " must be an array of rows");
    std::vector<RationalVector> rows;
    for (const auto& row : arr) {
        if (!row.is_array()) fail_parse(std::string("variable_choice.") + which + ": each row must be an array");
        RationalVector out;
        for (const auto& cell : row) {
            std::string text;
            if (cell.is_string()) text = cell.get<std::string>();
            else if (cell.is_number_integer()) text = std::to_string(cell.get<long long>());
            else fail_parse(std::string("variable_choice.") + which + ": entries must be rational strings or integers");
            auto r = parse_rational(text);
            if (!r) fail_parse(std::string("variable_choice.") + which + ": cannot parse rational \"" + text + "\"");
            out.push_back(*r);
        }
        rows.push_back(std::move(out));
    }
    return rows;
}

} // namespace

NetlistDocument parse_netlist(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail_parse(std::string("syntax error: ") + e.what());
    }
    if (!j.is_object()) fail_parse("document root must be an object");

    NetlistDocument doc;
    doc.version = require_string(j, "version", "document");
    if (doc.version != kNetlistVersion)
        fail_parse("unsupported version \"" + doc.version + "\" (expected \"" + kNetlistVersion + "\")");

    const json& verts = require(j, "vertices", "document");
    if (!verts.is_array() || verts.empty()) fail_parse("\"vertices\" must be a non-empty array");
    std::set<std::string> vertex_ids;
    for (const auto& v : verts) {
        if (!v.is_string()) fail_parse("vertex ids must be strings");
        const std::string id = v.get<std::string>();
        if (id.empty() || id[0] == '-') fail_parse("vertex id \"" + id + "\" is empty or starts with '-'");
        if (!vertex_ids.insert(id).second) fail_parse("duplicate vertex id \"" + id + "\"");
        doc.vertices.push_back(id);
    }

    const json& edges = require(j, "edges", "document");
    if (!edges.is_array() || edges.empty()) fail_parse("\"edges\" must be a non-empty array");
    std::set<std::string> edge_ids;
    std::map<std::pair<std::string, std::string>, int> endpoint_multiplicity;
    for (const auto& e : edges) {
        if (!e.is_object()) fail_parse("each edge must be an object");
        NetlistEdge edge;
        edge.id = require_string(e, "id", "edge");
        if (edge.id.empty() || edge.id[0] == '-')
            fail_parse("edge id \"" + edge.id + "\" is empty or starts with '-'");
        if (!edge_ids.insert(edge.id).second) fail_parse("duplicate edge id \"" + edge.id + "\"");
        edge.from = require_string(e, "from", ("edge \"" + edge.id + "\"").c_str());
        edge.to = require_string(e, "to", ("edge \"" + edge.id + "\"").c_str());
        if (!vertex_ids.count(edge.from))
            fail_parse("edge \"" + edge.id + "\" references unknown vertex \"" + edge.from + "\"");
        if (!vertex_ids.count(edge.to))
            fail_parse("edge \"" + edge.id + "\" references unknown vertex \"" + edge.to + "\"");
        edge.kind = require_string(e, "kind", ("edge \"" + edge.id + "\"").c_str());
        if (edge.kind != "capacitor" && edge.kind != "inductor" && edge.kind != "josephson" &&
            edge.kind != "phase_slip")
            fail_parse("edge \"" + edge.id + "\" has unknown kind \"" + edge.kind + "\"");
        edge.parameter = parse_parameter(require(e, "parameter", ("edge \"" + edge.id + "\"").c_str()), edge.id);
        auto key = std::minmax(edge.from, edge.to);
        endpoint_multiplicity[{key.first, key.second}]++;
        doc.edges.push_back(std::move(edge));
    }

    auto is_multi = [&](const NetlistEdge& e) {
        auto key = std::minmax(e.from, e.to);
        return endpoint_multiplicity[{key.first, key.second}] > 1;
    };
    std::map<std::string, const NetlistEdge*> edge_by_id;
    for (const auto& e : doc.edges) edge_by_id[e.id] = &e;

    const json& emb = require(j, "embedding", "document");
    if (!emb.is_array()) fail_parse("\"embedding\" must be an array of {vertex, order} entries");
    for (const auto& item : emb) {
        if (!item.is_object()) fail_parse("embedding entries must be objects");
        VertexRotation rot;
        rot.vertex = require_string(item, "vertex", "embedding entry");
        if (!vertex_ids.count(rot.vertex))
            fail_parse("embedding references unknown vertex \"" + rot.vertex + "\"");
        const json& order = require(item, "order", ("embedding of \"" + rot.vertex + "\"").c_str());
        if (!order.is_array()) fail_parse("embedding order for \"" + rot.vertex + "\" must be an array");
        for (const auto& entry : order) {
            EdgeEndRef ref;
            if (entry.is_string()) {
                ref.edge = entry.get<std::string>();
                ref.shorthand = true;
                auto it = edge_by_id.find(ref.edge);
                if (it == edge_by_id.end())
                    fail_parse("embedding of \"" + rot.vertex + "\" references unknown edge \"" + ref.edge + "\"");
                const NetlistEdge& e = *it->second;
                if (is_multi(e))
                    fail_parse("embedding of \"" + rot.vertex + "\": edge \"" + ref.edge +
                               "\" is a multi-edge; use the {edge, end} object form");
                if (e.from == rot.vertex) ref.at_head = false;
                else if (e.to == rot.vertex) ref.at_head = true;
                else
                    fail_parse("embedding of \"" + rot.vertex + "\": edge \"" + ref.edge +
                               "\" is not incident to this vertex");
            } else if (entry.is_object()) {
                ref.edge = require_string(entry, "edge", "embedding order entry");
                const std::string end = require_string(entry, "end", ("embedding entry for edge \"" + ref.edge + "\"").c_str());
                if (end == "tail") ref.at_head = false;
                else if (end == "head") ref.at_head = true;
                else fail_parse("embedding entry for edge \"" + ref.edge + "\": end must be \"tail\" or \"head\"");
                auto it = edge_by_id.find(ref.edge);
                if (it == edge_by_id.end())
                    fail_parse("embedding of \"" + rot.vertex + "\" references unknown edge \"" + ref.edge + "\"");
                const NetlistEdge& e = *it->second;
                const std::string endpoint = ref.at_head ? e.to : e.from;
                if (endpoint != rot.vertex)
                    fail_parse("embedding of \"" + rot.vertex + "\": the " + end + " end of edge \"" +
                               ref.edge + "\" is at \"" + endpoint + "\", not here");
            } else {
                fail_parse("embedding order entries must be edge ids or {edge, end} objects");
            }
            rot.order.push_back(std::move(ref));
        }
        doc.embedding.push_back(std::move(rot));
    }

    auto parse_walk_list = [&](const json& arr, const char* what) {
        if (!arr.is_array()) fail_parse(std::string("\"") + what + "\" must be an array");
        std::vector<NamedWalk> walks;
        std::set<std::string> ids;
        for (const auto& item : arr) {
            if (!item.is_object()) fail_parse(std::string(what) + " entries must be objects");
            NamedWalk w;
            w.id = require_string(item, "id", what);
            if (!ids.insert(w.id).second) fail_parse(std::string(what) + ": duplicate loop id \"" + w.id + "\"");
            const json& walk = require(item, "walk", (std::string(what) + " \"" + w.id + "\"").c_str());
            if (!walk.is_array() || walk.empty())
                fail_parse(std::string(what) + " \"" + w.id + "\": walk must be a non-empty array");
            for (const auto& s : walk) {
                WalkStep step = parse_walk_step(s, w.id);
                if (!edge_ids.count(step.edge))
                    fail_parse(std::string(what) + " \"" + w.id + "\" references unknown edge \"" + step.edge + "\"");
                w.walk.push_back(std::move(step));
            }
            walks.push_back(std::move(w));
        }
        return walks;
    };

    if (j.contains("faces")) doc.faces = parse_walk_list(j.at("faces"), "faces");
    if (j.contains("topological_loops"))
        doc.topological_loops = parse_walk_list(j.at("topological_loops"), "topological_loops");

    if (j.contains("variable_choice")) {
        const json& vc = j.at("variable_choice");
        if (!vc.is_object()) fail_parse("\"variable_choice\" must be an object with Q and Phi");
        VariableChoice choice;
        choice.charge_rows = parse_choice_rows(require(vc, "Q", "variable_choice"), "Q");
        choice.flux_rows = parse_choice_rows(require(vc, "Phi", "variable_choice"), "Phi");
        doc.variable_choice = std::move(choice);
    }

    return doc;
}

std::string serialize_netlist(const NetlistDocument& doc) {
    json j;
    j["version"] = doc.version;
    j["vertices"] = doc.vertices;
    j["edges"] = json::array();
    for (const auto& e : doc.edges) {
        json je;
        je["id"] = e.id;
        je["from"] = e.from;
        je["to"] = e.to;
        je["kind"] = e.kind;
        je["parameter"] = to_string(e.parameter);
        j["edges"].push_back(std::move(je));
    }

    std::map<std::pair<std::string, std::string>, int> endpoint_multiplicity;
    for (const auto& e : doc.edges) {
        auto key = std::minmax(e.from, e.to);
        endpoint_multiplicity[{key.first, key.second}]++;
    }
    std::map<std::string, const NetlistEdge*> edge_by_id;
    for (const auto& e : doc.edges) edge_by_id[e.id] = &e;

    j["embedding"] = json::array();
    for (const auto& rot : doc.embedding) {
        json jr;
        jr["vertex"] = rot.vertex;
        jr["order"] = json::array();
        for (const auto& ref : rot.order) {
            const NetlistEdge* e = edge_by_id.count(ref.edge) ? edge_by_id.at(ref.edge) : nullptr;
            const bool multi = e != nullptr &&
                               endpoint_multiplicity[{std::min(e->from, e->to), std::max(e->from, e->to)}] > 1;
            if (multi) {
                json jo;
                jo["edge"] = ref.edge;
                jo["end"] = ref.at_head ? "head" : "tail";
                jr["order"].push_back(std::move(jo));
            } else {
                jr["order"].push_back(ref.edge);
            }
        }
        j["embedding"].push_back(std::move(jr));
    }

    auto walk_list = [](const std::vector<NamedWalk>& walks) {
        json arr = json::array();
        for (const auto& w : walks) {
            json jw;
            jw["id"] = w.id;
            jw["walk"] = json::array();
            for (const auto& step : w.walk)
                jw["walk"].push_back(step.forward ? step.edge : "-" + step.edge);
            arr.push_back(std::move(jw));
        }
        return arr;
    };
    if (doc.faces) j["faces"] = walk_list(*doc.faces);
    if (doc.topological_loops) j["topological_loops"] = walk_list(*doc.topological_loops);

    if (doc.variable_choice) {
        auto rows = [](const std::vector<RationalVector>& rs) {
            json arr = json::array();
            for (const auto& r : rs) {
                json row = json::array();
                for (const auto& x : r) row.push_back(to_string(x));
                arr.push_back(std::move(row));
            }
            return arr;
        };
        j["variable_choice"] = json::object();
        j["variable_choice"]["Q"] = rows(doc.variable_choice->charge_rows);
        j["variable_choice"]["Phi"] = rows(doc.variable_choice->flux_rows);
    }

    return j.dump(2) + "\n";
}

} // namespace fluxcharge
