// Empirical constants for the asymptotic bounds, loaded from a JSON file.
#pragma once

#include "confluent/io.hpp"
#include "confluent/rational.hpp"

#include <string>

namespace confluent {

struct Calibration {
  double rounding_c = 8;         // congestion <= C * NC(f)^2 * log2(kappa)^3
  double height_c = 4;           // effective height <= C_h * NC(f) * log2(n)
  double trials_c = 2;           // trials = ceil(trials_c * ln n)
  double monotone_nc_c = 1;      // NC <= monotone_nc_c * log2(n)^4
  double length_c = 4;           // L(h) <= multiplier * budget * length_c * log2(n)
  double selection_c = 0.25;     // selected value >= c_sel * sum(gamma_i d_i)
  double demand_c = 1;           // delivered >= OPT / (demand_c * log2(kappa)^2)
  Rat budget_multiplier = 2;
  std::string source = "builtin";

  Json to_json() const;
};

Calibration calibration_from_json(const Json& doc);
// Path from CONFLUENT_CALIBRATION, else the installed default; builtin
// constants when neither file exists. Throws ParseError on a bad file.
std::string calibration_path();
Calibration load_calibration(const std::string& path = "");

}  // namespace confluent
