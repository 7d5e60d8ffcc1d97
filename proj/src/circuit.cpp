#include "fluxcharge/circuit.hpp"

#include "fluxcharge/errors.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace fluxcharge {

namespace {

[[noreturn]] void fail(const std::string& message) {
    throw CircuitError(ErrorKind::validation, "circuit: " + message);
}

std::size_t dart_head(const Circuit& c, Dart d) {
    return d.forward ? c.edges[d.edge].head : c.edges[d.edge].tail;
}

ElementKind kind_from_name(const std::string& name, const std::string& edge_id) {
    if (name == "capacitor") return ElementKind::capacitor;
    if (name == "inductor") return ElementKind::inductor;
    if (name == "josephson") return ElementKind::josephson;
    if (name == "phase_slip") return ElementKind::phase_slip;
    fail("edge \"" + edge_id + "\" has unknown kind \"" + name + "\"");
}

/// GF(2) echelon basis over edge-membership vectors; insert returns false
/// when the row is already in the span.
struct Gf2Basis {
    std::vector<std::vector<unsigned char>> rows;
    std::vector<std::size_t> pivots;

    bool insert(std::vector<unsigned char> row) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (row[pivots[i]]) {
                for (std::size_t j = 0; j < row.size(); ++j) row[j] ^= rows[i][j];
            }
        }
        auto it = std::find(row.begin(), row.end(), 1);
        if (it == row.end()) return false;
        pivots.push_back(static_cast<std::size_t>(it - row.begin()));
        rows.push_back(std::move(row));
        return true;
    }
};

std::vector<unsigned char> walk_parity(const Circuit& c, const std::vector<Dart>& darts) {
    std::vector<unsigned char> row(c.edges.size(), 0);
    for (const Dart& d : darts) row[d.edge] ^= 1;
    return row;
}

struct SpanningForest {
    std::vector<std::size_t> parent;
    std::vector<Dart> parent_dart; ///< dart running parent -> vertex
    std::vector<std::size_t> depth;
    std::vector<bool> in_tree;     ///< per edge
    std::vector<std::size_t> component;
    std::size_t component_count = 0;
};

/// BFS forest over the edges selected by `keep`, visiting vertices and edges
/// in index order so the result is deterministic.
SpanningForest build_forest(const Circuit& c, const std::vector<bool>& keep) {
    const std::size_t nv = c.vertices.size();
    SpanningForest f;
    f.parent.assign(nv, nv);
    f.parent_dart.assign(nv, Dart{});
    f.depth.assign(nv, 0);
    f.in_tree.assign(c.edges.size(), false);
    f.component.assign(nv, nv);

    std::vector<std::vector<Dart>> out(nv);
    for (std::size_t e = 0; e < c.edges.size(); ++e) {
        if (!keep[e]) continue;
        out[c.edges[e].tail].push_back(Dart{e, true});
        out[c.edges[e].head].push_back(Dart{e, false});
    }

    for (std::size_t root = 0; root < nv; ++root) {
        if (f.component[root] != nv) continue;
        const std::size_t comp = f.component_count++;
        f.component[root] = comp;
        std::queue<std::size_t> queue;
        queue.push(root);
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop();
            for (const Dart& d : out[v]) {
                const std::size_t w = dart_head(c, d);
                if (f.component[w] != nv) continue;
                f.component[w] = comp;
                f.parent[w] = v;
                f.parent_dart[w] = d;
                f.depth[w] = f.depth[v] + 1;
                f.in_tree[d.edge] = true;
                queue.push(w);
            }
        }
    }
    return f;
}

/// Closed walk for a non-forest edge: the edge forward, then back to its
/// tail through the forest.
std::vector<Dart> fundamental_cycle(const Circuit& c, const SpanningForest& f, std::size_t e) {
    std::vector<Dart> walk{Dart{e, true}};
    std::size_t u = c.edges[e].head;
    std::size_t v = c.edges[e].tail;
    std::vector<Dart> tail_side;
    while (u != v) {
        if (f.depth[u] >= f.depth[v]) {
            walk.push_back(f.parent_dart[u].twin());
            u = f.parent[u];
        } else {
            tail_side.push_back(f.parent_dart[v]);
            v = f.parent[v];
        }
    }
    walk.insert(walk.end(), tail_side.rbegin(), tail_side.rend());
    return walk;
}

} // namespace

bool is_capacitive(ElementKind kind) {
    return kind == ElementKind::capacitor || kind == ElementKind::phase_slip;
}

bool is_quadratic(ElementKind kind) {
    return kind == ElementKind::capacitor || kind == ElementKind::inductor;
}

std::string kind_name(ElementKind kind) {
    switch (kind) {
    case ElementKind::capacitor: return "capacitor";
    case ElementKind::inductor: return "inductor";
    case ElementKind::josephson: return "josephson";
    case ElementKind::phase_slip: return "phase_slip";
    }
    return "?";
}

std::size_t Circuit::vertex_index(const std::string& id) const {
    for (std::size_t v = 0; v < vertices.size(); ++v)
        if (vertices[v] == id) return v;
    fail("unknown vertex \"" + id + "\"");
}

std::size_t Circuit::edge_index(const std::string& id) const {
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (edges[e].id == id) return e;
    fail("unknown edge \"" + id + "\"");
}

Dart RotationSystem::successor(const Circuit& c, Dart d) const {
    const std::vector<Dart>& cycle = order[c.dart_origin(d)];
    for (std::size_t i = 0; i < cycle.size(); ++i)
        if (cycle[i] == d) return cycle[(i + 1) % cycle.size()];
    fail("rotation at vertex \"" + c.vertices[c.dart_origin(d)] +
         "\" does not contain edge \"" + c.edges[d.edge].id + "\"");
}

std::vector<std::string> LoopSet::labels() const {
    std::vector<std::string> out;
    for (const auto& f : faces) out.push_back(f.id);
    for (const auto& t : topological) out.push_back(t.id);
    return out;
}

EmbeddedCircuit build_circuit(const NetlistDocument& doc) {
    EmbeddedCircuit ec;
    Circuit& c = ec.circuit;

    std::map<std::string, std::size_t> vertex_of;
    for (const auto& id : doc.vertices) {
        if (vertex_of.count(id)) fail("duplicate vertex id \"" + id + "\"");
        vertex_of[id] = c.vertices.size();
        c.vertices.push_back(id);
    }
    if (c.vertices.empty()) fail("no vertices");

    std::map<std::string, std::size_t> edge_of;
    for (const auto& e : doc.edges) {
        if (edge_of.count(e.id)) fail("duplicate edge id \"" + e.id + "\"");
        auto from = vertex_of.find(e.from);
        auto to = vertex_of.find(e.to);
        if (from == vertex_of.end())
            fail("edge \"" + e.id + "\" references unknown vertex \"" + e.from + "\"");
        if (to == vertex_of.end())
            fail("edge \"" + e.id + "\" references unknown vertex \"" + e.to + "\"");
        if (from->second == to->second)
            fail("edge \"" + e.id + "\" is a self-loop at vertex \"" + e.from + "\"");
        CircuitEdge edge;
        edge.id = e.id;
        edge.tail = from->second;
        edge.head = to->second;
        edge.kind = kind_from_name(e.kind, e.id);
        edge.parameter = e.parameter;
        if (edge.parameter <= 0)
            fail("edge \"" + e.id + "\" has nonpositive parameter " + to_string(edge.parameter));
        edge_of[e.id] = c.edges.size();
        c.edges.push_back(std::move(edge));
    }
    if (c.edges.empty()) fail("no edges");

    std::vector<bool> all(c.edges.size(), true);
    SpanningForest forest = build_forest(c, all);
    if (forest.component_count != 1) fail("graph is not connected");

    ec.rotation.order.assign(c.vertices.size(), {});
    std::vector<bool> seen_vertex(c.vertices.size(), false);
    for (const auto& rot : doc.embedding) {
        auto vit = vertex_of.find(rot.vertex);
        if (vit == vertex_of.end())
            fail("embedding references unknown vertex \"" + rot.vertex + "\"");
        const std::size_t v = vit->second;
        if (seen_vertex[v]) fail("duplicate embedding entry for vertex \"" + rot.vertex + "\"");
        seen_vertex[v] = true;
        std::set<std::size_t> used;
        for (const auto& ref : rot.order) {
            auto eit = edge_of.find(ref.edge);
            if (eit == edge_of.end())
                fail("embedding of \"" + rot.vertex + "\" references unknown edge \"" + ref.edge + "\"");
            const Dart d{eit->second, !ref.at_head};
            if (c.dart_origin(d) != v)
                fail("embedding of \"" + rot.vertex + "\": edge \"" + ref.edge +
                     "\" does not leave from this vertex at the given end");
            if (!used.insert(d.index()).second)
                fail("embedding of \"" + rot.vertex + "\" lists edge \"" + ref.edge + "\" twice");
            ec.rotation.order[v].push_back(d);
        }
        std::size_t degree = 0;
        for (const auto& e : c.edges) degree += (e.tail == v) + (e.head == v);
        if (ec.rotation.order[v].size() != degree)
            fail("embedding of \"" + rot.vertex + "\" is incomplete: lists " +
                 std::to_string(ec.rotation.order[v].size()) + " of " + std::to_string(degree) +
                 " incident edge ends");
    }
    for (std::size_t v = 0; v < c.vertices.size(); ++v)
        if (!seen_vertex[v]) fail("embedding missing for vertex \"" + c.vertices[v] + "\"");

    return ec;
}

LoopSet trace_faces(const Circuit& c, const RotationSystem& rot) {
    LoopSet loops;
    const std::size_t ndarts = c.edges.size() * 2;
    std::vector<bool> visited(ndarts, false);
    for (std::size_t start = 0; start < ndarts; ++start) {
        if (visited[start]) continue;
        LoopWalk face;
        face.id = "l" + std::to_string(loops.faces.size() + 1);
        Dart d = Dart::from_index(start);
        do {
            visited[d.index()] = true;
            face.darts.push_back(d);
            d = rot.successor(c, d.twin());
        } while (d.index() != start);
        loops.faces.push_back(std::move(face));
    }

    const long long euler = static_cast<long long>(loops.faces.size()) -
                            static_cast<long long>(c.edges.size()) +
                            static_cast<long long>(c.vertices.size());
    const long long two_genus = 2 - euler;
    if (two_genus < 0 || two_genus % 2 != 0)
        throw CircuitError(ErrorKind::internal,
                           "face tracing produced impossible Euler characteristic " +
                               std::to_string(euler));
    loops.genus = static_cast<std::size_t>(two_genus / 2);
    return loops;
}

std::vector<LoopWalk> topological_loops(const Circuit& c, const LoopSet& faces) {
    std::vector<LoopWalk> extra;
    if (faces.genus == 0) return extra;

    Gf2Basis basis;
    for (const auto& f : faces.faces) basis.insert(walk_parity(c, f.darts));

    std::vector<bool> all(c.edges.size(), true);
    SpanningForest forest = build_forest(c, all);
    for (std::size_t e = 0; e < c.edges.size() && extra.size() < 2 * faces.genus; ++e) {
        if (forest.in_tree[e]) continue;
        std::vector<Dart> walk = fundamental_cycle(c, forest, e);
        if (!basis.insert(walk_parity(c, walk))) continue;
        LoopWalk lw;
        lw.id = "l" + std::to_string(faces.faces.size() + extra.size() + 1);
        lw.darts = std::move(walk);
        extra.push_back(std::move(lw));
    }
    if (extra.size() != 2 * faces.genus)
        throw CircuitError(ErrorKind::internal,
                           "could not complete the cycle space: found " +
                               std::to_string(extra.size()) + " of " +
                               std::to_string(2 * faces.genus) + " topological loops");
    return extra;
}

RationalMatrix incidence_matrix(const Circuit& c) {
    RationalMatrix a(c.edges.size(), c.vertices.size());
    for (std::size_t e = 0; e < c.edges.size(); ++e) {
        a.at(e, c.edges[e].head) += 1;
        a.at(e, c.edges[e].tail) -= 1;
        a.row_labels.push_back(c.edges[e].id);
    }
    a.col_labels = c.vertices;
    return a;
}

RationalMatrix orientation_matrix(const Circuit& c, const LoopSet& loops) {
    RationalMatrix b(loops.size(), c.edges.size());
    for (std::size_t l = 0; l < loops.size(); ++l) {
        for (const Dart& d : loops.loop(l).darts) b.at(l, d.edge) += d.forward ? 1 : -1;
        b.row_labels.push_back(loops.loop(l).id);
    }
    for (const auto& e : c.edges) b.col_labels.push_back(e.id);
    return b;
}

std::vector<std::size_t> subgraph_components(const Circuit& c, const std::vector<bool>& keep) {
    return build_forest(c, keep).component;
}

std::vector<std::vector<Dart>> subgraph_cycle_basis(const Circuit& c, const std::vector<bool>& keep) {
    SpanningForest forest = build_forest(c, keep);
    std::vector<std::vector<Dart>> cycles;
    for (std::size_t e = 0; e < c.edges.size(); ++e)
        if (keep[e] && !forest.in_tree[e]) cycles.push_back(fundamental_cycle(c, forest, e));
    return cycles;
}

bool walks_cyclically_equal(const std::vector<Dart>& a, const std::vector<Dart>& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    for (std::size_t shift = 0; shift < a.size(); ++shift) {
        bool match = true;
        for (std::size_t i = 0; i < a.size() && match; ++i)
            match = a[(shift + i) % a.size()] == b[i];
        if (match) return true;
    }
    return false;
}

NetlistDocument document_from_circuit(const Circuit& c, const RotationSystem& rot,
                                      const LoopSet* loops) {
    NetlistDocument doc;
    doc.version = kNetlistVersion;
    doc.vertices = c.vertices;
    for (const auto& e : c.edges) {
        NetlistEdge ne;
        ne.id = e.id;
        ne.from = c.vertices[e.tail];
        ne.to = c.vertices[e.head];
        ne.kind = kind_name(e.kind);
        ne.parameter = e.parameter;
        doc.edges.push_back(std::move(ne));
    }
    for (std::size_t v = 0; v < c.vertices.size(); ++v) {
        VertexRotation vr;
        vr.vertex = c.vertices[v];
        for (const Dart& d : rot.order[v]) {
            EdgeEndRef ref;
            ref.edge = c.edges[d.edge].id;
            ref.at_head = !d.forward;
            ref.shorthand = false;
            vr.order.push_back(std::move(ref));
        }
        doc.embedding.push_back(std::move(vr));
    }
    if (loops) {
        auto to_walks = [&](const std::vector<LoopWalk>& walks) {
            std::vector<NamedWalk> out;
            for (const auto& w : walks) {
                NamedWalk nw;
                nw.id = w.id;
                for (const Dart& d : w.darts) nw.walk.push_back({c.edges[d.edge].id, d.forward});
                out.push_back(std::move(nw));
            }
            return out;
        };
        doc.faces = to_walks(loops->faces);
        if (!loops->topological.empty()) doc.topological_loops = to_walks(loops->topological);
    }
    return doc;
}

} // namespace fluxcharge
