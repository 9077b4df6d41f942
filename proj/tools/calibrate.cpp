// Measures the empirical constants behind the calibration file on held-out
// seeds (the acceptance suite uses different ones) and prints them, or
// writes a calibration file with --write.
#include "confluent/calibration.hpp"
#include "confluent/monotonic.hpp"
#include "confluent/multilayer.hpp"
#include "confluent/oracle.hpp"
#include "confluent/rounding.hpp"
#include "confluent/staticflow.hpp"
#include "corpora.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>

using namespace confluent;

namespace {

// Up to the next hundredth.
double round_up(double x) { return std::ceil(x * 100 - 1e-9) / 100; }

std::string fmt2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

struct Worst {
  double value = 0;
  std::string where;
  void see(double v, const std::string& w) {
    if (v > value) {
      value = v;
      where = w;
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure calibration constants", "confluent_calibrate"};
  std::string write_path;
  double margin = 1.25;
  int seeds = 50;
  std::uint64_t seed_base = 100000;
  double trials_c = 2;
  app.add_option("--write", write_path, "Write a calibration file");
  app.add_option("--margin", margin, "Multiplier applied to the observed maxima");
  app.add_option("--seeds", seeds, "Rounding seeds per instance");
  app.add_option("--seed-base", seed_base, "First rounding seed");
  app.add_option("--trials-c", trials_c, "Trials constant used during measurement");
  CLI11_PARSE(app, argc, argv);

  Calibration cal;
  cal.trials_c = trials_c;
  Json report;

  // Rounding congestion and effective height.
  Worst cong, height;
  for (const RoundingInstance& ri : corpora::rounding_corpus()) {
    const FlowDag dag = induce_dag(ri.net, ri.flow);
    const int trials = default_trials(ri.net.n(), trials_c);
    const double nc = ri.nc.to_double();
    const double lk = corpora::log2_at_least_1(ri.net.kappa());
    const double ln = corpora::log2_at_least_1(ri.net.n());
    for (int s = 0; s < seeds; ++s) {
      const RoundResult rr = round_best(ri.net, dag, trials, seed_base + s);
      const std::string w = "n=" + std::to_string(ri.net.n()) + " seed=" + std::to_string(seed_base + s);
      cong.see(rr.diag.max_congestion / (nc * nc * lk * lk * lk), w);
      height.see(rr.diag.effective_height / (nc * ln), w);
    }
  }
  report["rounding"] = {{"max_ratio", cong.value}, {"at", cong.where}};
  report["height"] = {{"max_ratio", height.value}, {"at", height.where}};
  cal.rounding_c = round_up(cong.value * margin);
  cal.height_c = round_up(height.value * margin);

  // Monotone routing congestion over log2(n)^4.
  Worst mono;
  const auto mnets = corpora::monotone_corpus(40, 77);
  for (std::size_t i = 0; i < mnets.size(); ++i) {
    const Network& net = mnets[i];
    try {
      const MonotoneResult mr = route_monotone_relaxed(net, 0, default_trials(net.n(), trials_c), seed_base + i);
      const double l4 = std::pow(corpora::log2_at_least_1(net.n()), 4);
      mono.see(mr.nc.to_double() / l4, "monotone #" + std::to_string(i));
    } catch (const Infeasible&) {
    }
  }
  report["monotone"] = {{"max_ratio", mono.value}, {"at", mono.where}};
  cal.monotone_nc_c = round_up(std::max(mono.value * margin, 0.01));

  // Static pipeline on instances meeting the no-bottleneck assumption: length,
  // selection and value against the oracle.
  Worst length, demand;
  double sel_min = 1;
  const auto pnets = corpora::nba_corpus(60, 4242);
  for (std::size_t i = 0; i < pnets.size(); ++i) {
    const Network& net = pnets[i];
    const auto dist = [&] {
      std::int64_t best = 0;
      const PathFlow f = max_flow(net, net.supplies(), net.sink());
      for (const FlowPath& fp : f.paths) best = std::max(best, fp.path.length(net));
      return best;
    }();
    PipelineOptions po;
    po.budget = std::max<std::int64_t>(1, dist);
    po.trials = default_trials(net.n(), trials_c);
    po.seed = seed_base + i;
    const StaticResult sr = demand_max_static(net, net.supplies(), po);
    const std::string w = "pipeline #" + std::to_string(i);
    const double ln = corpora::log2_at_least_1(net.n());
    if (!sr.infeasible) {
      length.see(static_cast<double>(sr.length) / (cal.budget_multiplier.to_double() * *po.budget * ln), w);
    }
    for (const GroupReport& g : sr.groups) {
      if (!g.feasible || g.kept_value.sign() == 0) continue;
      const Rat target = g.kept_value / max(Rat(1), g.kept_ec);
      sel_min = std::min(sel_min, (g.selected_value / target).to_double());
    }
    // Unbounded oracle against the pipeline without a budget.
    PipelineOptions pu = po;
    pu.budget.reset();
    const StaticResult su = demand_max_static(net, net.supplies(), pu);
    const OracleResult o = oracle_demand_max(net);
    const double lk2 = std::pow(corpora::log2_at_least_1(net.kappa()), 2);
    if (o.best_value.sign() > 0) {
      const double got = su.value.to_double();
      demand.see(got > 0 ? o.best_value.to_double() / (got * lk2) : 1e9, w);
    }
  }
  report["length"] = {{"max_ratio", length.value}, {"at", length.where}};
  report["selection"] = {{"min_ratio", sel_min}};
  report["demand"] = {{"max_ratio", demand.value}, {"at", demand.where}};
  cal.length_c = round_up(std::max(length.value * margin, 0.01));
  cal.selection_c = std::floor(sel_min / margin * 100) / 100;
  cal.demand_c = round_up(std::max(demand.value * margin, 0.01));
  cal.source = "measured";

  report["constants"] = cal.to_json();
  std::cout << report.dump(2) << "\n";
  if (!write_path.empty()) {
    Json out = cal.to_json();
    out.erase("source");
    out["notes"] = "Measured by confluent_calibrate on seeds from " + std::to_string(seed_base) +
                   " with margin " + fmt2(margin) +
                   ". The bounds are asymptotic with unspecified constants; these are measured stand-ins.";
    write_file(write_path, out.dump(2) + "\n");
  }
  return 0;
}
