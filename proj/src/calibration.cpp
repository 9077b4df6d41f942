#include "confluent/calibration.hpp"

#include "confluent/network.hpp"

#include <cstdlib>
#include <filesystem>

#ifndef CONFLUENT_DEFAULT_CALIBRATION
#define CONFLUENT_DEFAULT_CALIBRATION "config/calibration.json"
#endif

namespace confluent {

Json Calibration::to_json() const {
  Json j;
  j["rounding_c"] = rounding_c;
  j["height_c"] = height_c;
  j["trials_c"] = trials_c;
  j["monotone_nc_c"] = monotone_nc_c;
  j["length_c"] = length_c;
  j["selection_c"] = selection_c;
  j["demand_c"] = demand_c;
  j["budget_multiplier"] = rat_json(budget_multiplier);
  j["source"] = source;
  return j;
}

Calibration calibration_from_json(const Json& doc) {
  if (!doc.is_object()) throw SchemaError("calibration: expected an object");
  Calibration c;
  auto num = [&](const char* key, double& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number() || doc[key].get<double>() <= 0) {
      throw SchemaError(std::string("calibration: '") + key + "' must be a positive number");
    }
    out = doc[key].get<double>();
  };
  num("rounding_c", c.rounding_c);
  num("height_c", c.height_c);
  num("trials_c", c.trials_c);
  num("monotone_nc_c", c.monotone_nc_c);
  num("length_c", c.length_c);
  num("selection_c", c.selection_c);
  num("demand_c", c.demand_c);
  if (doc.contains("budget_multiplier")) {
    const Json& b = doc["budget_multiplier"];
    c.budget_multiplier = b.is_string() ? Rat::parse(b.get<std::string>())
                                        : Rat::parse(std::to_string(b.get<std::int64_t>()));
    if (c.budget_multiplier < 1) throw SchemaError("calibration: budget_multiplier must be >= 1");
  }
  return c;
}

std::string calibration_path() {
  if (const char* env = std::getenv("CONFLUENT_CALIBRATION"); env && *env) return env;
  return CONFLUENT_DEFAULT_CALIBRATION;
}

Calibration load_calibration(const std::string& path) {
  const std::string p = path.empty() ? calibration_path() : path;
  const bool explicit_file = !path.empty() || std::getenv("CONFLUENT_CALIBRATION");
  if (!std::filesystem::exists(p)) {
    if (explicit_file) throw Error("calibration file not found: " + p);
    return Calibration{};
  }
  Json doc;
  try {
    doc = Json::parse(read_file(p));
  } catch (const Json::parse_error& e) {
    throw ParseError("calibration " + p + ": " + e.what());
  }
  Calibration c = calibration_from_json(doc);
  c.source = p;
  return c;
}

}  // namespace confluent
