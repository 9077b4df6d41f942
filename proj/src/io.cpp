#include "confluent/io.hpp"

#include <fstream>
#include <sstream>

namespace confluent {

namespace {

std::string line_col(std::string_view bytes, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < bytes.size(); ++i) {
    if (bytes[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Rat parse_rat(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long long>());
  } catch (const RatError& e) {
    throw ParseError(where + ": " + e.what());
  }
  if (j.is_number_float()) throw ParseError(where + ": expected an exact rational, got a float");
  throw SchemaError(where + ": expected a rational string");
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where + ": missing '" + key + "'");
  return *it;
}

NodeId node_ref(const Network& net, const Json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where + ": node reference must be a string");
  auto v = net.find(j.get<std::string>());
  if (!v) throw SchemaError(where + ": unknown node '" + j.get<std::string>() + "'");
  return *v;
}

}  // namespace

Network read_network(std::string_view bytes) {
  Json doc;
  try {
    doc = Json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed JSON at " + line_col(bytes, e.byte > 0 ? e.byte - 1 : 0) +
                     ": " + e.what());
  }
  return network_from_json(doc);
}

Network network_from_json(const Json& doc) {
  if (!doc.is_object()) throw SchemaError("network document must be an object");
  NetworkSpec spec;
  if (auto it = doc.find("directed"); it != doc.end()) {
    if (!it->is_boolean()) throw SchemaError("directed: expected a boolean");
    spec.directed = it->get<bool>();
  }
  if (auto it = doc.find("monotone"); it != doc.end()) {
    if (!it->is_boolean()) throw SchemaError("monotone: expected a boolean");
    spec.monotone = it->get<bool>();
  }
  const Json& nodes = require(doc, "nodes", "network");
  if (!nodes.is_array()) throw SchemaError("nodes: expected an array");
  if (nodes.empty()) throw SchemaError("nodes: empty node list");
  std::unordered_map<std::string, NodeId> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].is_string()) throw SchemaError("nodes[" + std::to_string(i) + "]: expected a string");
    const std::string name = nodes[i].get<std::string>();
    if (!index.emplace(name, static_cast<NodeId>(i)).second) {
      throw SchemaError("nodes[" + std::to_string(i) + "]: duplicate node '" + name + "'");
    }
    spec.add_node(name);
  }
  auto lookup = [&index](const Json& j, const std::string& where) {
    if (!j.is_string()) throw SchemaError(where + ": node reference must be a string");
    auto it = index.find(j.get<std::string>());
    if (it == index.end()) throw SchemaError(where + ": unknown node '" + j.get<std::string>() + "'");
    return it->second;
  };
  const Json& edges = require(doc, "edges", "network");
  if (!edges.is_array()) throw SchemaError("edges: expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const Json& e = edges[i];
    if (!e.is_object()) throw SchemaError(where + ": expected an object");
    const NodeId u = lookup(require(e, "u", where), where + ".u");
    const NodeId v = lookup(require(e, "v", where), where + ".v");
    const Rat cap = parse_rat(require(e, "cap", where), where + ".cap");
    const Json& len = require(e, "len", where);
    if (len.is_number_float()) throw ParseError(where + ".len: fractional length rejected");
    if (len.is_string()) throw ParseError(where + ".len: lengths must be integers");
    if (!len.is_number_integer()) throw SchemaError(where + ".len: expected an integer");
    spec.add_edge(u, v, cap, len.get<std::int64_t>());
  }
  if (auto it = doc.find("supplies"); it != doc.end()) {
    if (!it->is_object()) throw SchemaError("supplies: expected an object");
    for (const auto& [name, val] : it->items()) {
      const NodeId v = lookup(Json(name), "supplies");
      spec.supply[v] = parse_rat(val, "supplies." + name);
    }
  }
  const Json& sinks = require(doc, "sinks", "network");
  if (!sinks.is_array()) throw SchemaError("sinks: expected an array");
  for (std::size_t i = 0; i < sinks.size(); ++i) {
    spec.sinks.push_back(lookup(sinks[i], "sinks[" + std::to_string(i) + "]"));
  }
  if (auto it = doc.find("node_caps"); it != doc.end()) {
    if (!it->is_object()) throw SchemaError("node_caps: expected an object");
    std::vector<Rat> caps(spec.nodes.size(), Rat(0));
    std::vector<bool> seen(spec.nodes.size(), false);
    for (const auto& [name, val] : it->items()) {
      const NodeId v = lookup(Json(name), "node_caps");
      caps[v] = parse_rat(val, "node_caps." + name);
      seen[v] = true;
    }
    for (std::size_t v = 0; v < seen.size(); ++v) {
      if (!seen[v]) throw SchemaError("node_caps: missing capacity for '" + spec.nodes[v] + "'");
    }
    spec.node_caps = std::move(caps);
  }
  return Network(std::move(spec));
}

Json rat_json(const Rat& r) { return r.str(); }

Json network_to_json(const Network& net) {
  Json doc;
  doc["directed"] = net.directed();
  if (net.monotone()) doc["monotone"] = true;
  Json nodes = Json::array();
  for (NodeId v = 0; v < net.n(); ++v) nodes.push_back(net.name(v));
  doc["nodes"] = std::move(nodes);
  Json edges = Json::array();
  for (EdgeId e = 0; e < net.m(); ++e) {
    const Edge& ed = net.edge(e);
    Json je;
    je["u"] = net.name(ed.u);
    je["v"] = net.name(ed.v);
    je["cap"] = ed.cap.str();
    je["len"] = ed.len;
    edges.push_back(std::move(je));
  }
  doc["edges"] = std::move(edges);
  Json supplies = Json::object();
  for (NodeId v = 0; v < net.n(); ++v) {
    if (!net.supply(v).is_zero()) supplies[net.name(v)] = net.supply(v).str();
  }
  doc["supplies"] = std::move(supplies);
  Json sinks = Json::array();
  for (NodeId t : net.sinks()) sinks.push_back(net.name(t));
  doc["sinks"] = std::move(sinks);
  if (net.has_node_caps()) {
    Json caps = Json::object();
    for (NodeId v = 0; v < net.n(); ++v) caps[net.name(v)] = net.node_cap(v).str();
    doc["node_caps"] = std::move(caps);
  }
  return doc;
}

std::string write_network(const Network& net) { return network_to_json(net).dump(2) + "\n"; }

Json path_to_json(const Network& net, const Path& p) {
  Json nodes = Json::array();
  for (NodeId v : p.nodes(net)) nodes.push_back(net.name(v));
  Json edges = Json::array();
  for (ArcId a : p.arcs) edges.push_back(net.arc_edge(a));
  return Json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

Json routing_to_json(const Network& net, const ConfluentRouting& r) {
  Json out = Json::array();
  for (NodeId v = 0; v < net.n(); ++v) {
    const ArcId a = r.out_arc[v];
    if (a == kNone) continue;
    out.push_back(Json{{"node", net.name(v)}, {"edge", net.arc_edge(a)}, {"to", net.name(net.head(a))}});
  }
  return out;
}

ConfluentRouting routing_from_json(const Network& net, const Json& doc) {
  const Json& list = doc.is_object() ? require(doc, "routing", "routing document") : doc;
  if (!list.is_array()) throw SchemaError("routing: expected an array");
  ConfluentRouting r = empty_routing(net);
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "routing[" + std::to_string(i) + "]";
    const Json& item = list[i];
    const NodeId v = node_ref(net, require(item, "node", where), where + ".node");
    const NodeId to = node_ref(net, require(item, "to", where), where + ".to");
    ArcId chosen = kNone;
    for (ArcId a : net.out_arcs(v)) {
      if (net.head(a) != to) continue;
      if (auto it = item.find("edge"); it != item.end() && it->get<int>() != net.arc_edge(a)) continue;
      chosen = a;
      break;
    }
    if (chosen == kNone) throw SchemaError(where + ": no arc from " + net.name(v) + " to " + net.name(to));
    if (r.out_arc[v] != kNone) throw SchemaError(where + ": node " + net.name(v) + " routed twice");
    r.out_arc[v] = chosen;
  }
  return r;
}

Json path_flow_to_json(const Network& net, const PathFlow& f) {
  Json out = Json::array();
  for (const FlowPath& fp : f.paths) {
    Json p = path_to_json(net, fp.path);
    p["value"] = fp.value.str();
    out.push_back(std::move(p));
  }
  return out;
}

Json dynamic_routing_to_json(const Network& net, const DynamicRouting& dr) {
  Json out;
  if (dr.tree) out["tree"] = routing_to_json(net, *dr.tree);
  Json streams = Json::array();
  for (const Stream& s : dr.streams) {
    Json js;
    js["source"] = net.name(s.source);
    js["path"] = path_to_json(net, s.path);
    Json sched = Json::array();
    for (const Release& r : s.schedule) {
      sched.push_back(Json{{"start", r.start}, {"rate", r.rate.str()}, {"duration", r.duration}});
    }
    js["schedule"] = std::move(sched);
    streams.push_back(std::move(js));
  }
  out["streams"] = std::move(streams);
  return out;
}

Path path_from_json(const Network& net, const Json& doc, const std::string& where) {
  const Json& nodes = require(doc, "nodes", where);
  const Json& edges = require(doc, "edges", where);
  if (!nodes.is_array() || !edges.is_array() || nodes.size() != edges.size() + 1) {
    throw SchemaError(where + ": expected nodes and edges arrays with one more node than edges");
  }
  Path p{node_ref(net, nodes[0], where + ".nodes[0]"), {}};
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string at = where + ".edges[" + std::to_string(i) + "]";
    if (!edges[i].is_number_integer()) throw SchemaError(at + ": expected an edge index");
    const int e = edges[i].get<int>();
    if (e < 0 || e >= net.m()) throw SchemaError(at + ": edge " + std::to_string(e) + " out of range");
    const NodeId u = node_ref(net, nodes[i], at);
    const NodeId w = node_ref(net, nodes[i + 1], at);
    if (net.edge(e).u == u && net.edge(e).v == w) {
      p.arcs.push_back(2 * e);
    } else if (!net.directed() && net.edge(e).v == u && net.edge(e).u == w) {
      p.arcs.push_back(2 * e + 1);
    } else {
      throw SchemaError(at + ": edge " + std::to_string(e) + " does not join " + net.name(u) +
                        " to " + net.name(w));
    }
  }
  return p;
}

DynamicRouting dynamic_routing_from_json(const Network& net, const Json& doc) {
  if (!doc.is_object()) throw SchemaError("dynamic routing: expected an object");
  DynamicRouting dr;
  if (auto it = doc.find("tree"); it != doc.end()) dr.tree = routing_from_json(net, *it);
  const Json& streams = require(doc, "streams", "dynamic routing");
  if (!streams.is_array()) throw SchemaError("dynamic routing: 'streams' must be an array");
  for (std::size_t i = 0; i < streams.size(); ++i) {
    const std::string where = "streams[" + std::to_string(i) + "]";
    const Json& js = streams[i];
    Stream s;
    s.source = node_ref(net, require(js, "source", where), where + ".source");
    s.path = path_from_json(net, require(js, "path", where), where + ".path");
    const Json& sched = require(js, "schedule", where);
    if (!sched.is_array()) throw SchemaError(where + ".schedule: expected an array");
    for (std::size_t k = 0; k < sched.size(); ++k) {
      const std::string at = where + ".schedule[" + std::to_string(k) + "]";
      Release r;
      r.start = require(sched[k], "start", at).get<std::int64_t>();
      r.rate = parse_rat(require(sched[k], "rate", at), at + ".rate");
      r.duration = require(sched[k], "duration", at).get<std::int64_t>();
      if (r.start < 0 || r.duration < 0 || r.rate < 0) throw SchemaError(at + ": negative value");
      s.schedule.push_back(r);
    }
    dr.streams.push_back(std::move(s));
  }
  return dr;
}

std::string write_dimacs(const Network& net) {
  Int scale = 1;
  for (EdgeId e = 0; e < net.m(); ++e) scale = lcm(scale, net.edge(e).cap.den());
  for (NodeId v : net.sources()) scale = lcm(scale, net.supply(v).den());
  const NodeId t = net.sink();
  const int super = net.n() + 1;  // 1-based ids, super source last
  std::vector<std::string> arcs;
  auto arc = [&arcs](int u, int v, const Rat& cap, const Int& s) {
    arcs.push_back("a " + std::to_string(u) + " " + std::to_string(v) + " " + (cap * Rat(s)).str());
  };
  for (EdgeId e = 0; e < net.m(); ++e) {
    const Edge& ed = net.edge(e);
    arc(ed.u + 1, ed.v + 1, ed.cap, scale);
    if (!net.directed()) arc(ed.v + 1, ed.u + 1, ed.cap, scale);
  }
  for (NodeId v : net.sources()) arc(super, v + 1, net.supply(v), scale);
  std::ostringstream os;
  os << "c max-flow projection, capacities multiplied by " << scale.str() << "\n";
  for (NodeId v = 0; v < net.n(); ++v) os << "c node " << (v + 1) << " " << net.name(v) << "\n";
  os << "p max " << super << " " << arcs.size() << "\n";
  os << "n " << super << " s\n";
  os << "n " << (t + 1) << " t\n";
  for (const auto& line : arcs) os << line << "\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << data;
}

}  // namespace confluent
