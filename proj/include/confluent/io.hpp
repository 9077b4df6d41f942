// JSON network documents, routing documents and DIMACS export.
#pragma once

#include "confluent/network.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace confluent {

using Json = nlohmann::ordered_json;

// Throws ParseError (malformed JSON or numbers, with line/element context) or
// SchemaError (structural problems).
Network read_network(std::string_view bytes);
Network network_from_json(const Json& doc);
Json network_to_json(const Network& net);
// Canonical text: fixed key order, two-space indent, trailing newline.
std::string write_network(const Network& net);

Json rat_json(const Rat& r);
Json path_to_json(const Network& net, const Path& p);
Json routing_to_json(const Network& net, const ConfluentRouting& r);
ConfluentRouting routing_from_json(const Network& net, const Json& doc);
Json path_flow_to_json(const Network& net, const PathFlow& f);
Json dynamic_routing_to_json(const Network& net, const DynamicRouting& dr);
Path path_from_json(const Network& net, const Json& doc, const std::string& where = "path");
DynamicRouting dynamic_routing_from_json(const Network& net, const Json& doc);

// Max-flow projection in DIMACS format: a super source feeds every source with
// its supply, capacities are scaled to integers by the common denominator.
std::string write_dimacs(const Network& net);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view data);

}  // namespace confluent
