#include "confluent/cli.hpp"

#include "confluent/calibration.hpp"
#include "confluent/dynamic.hpp"
#include "confluent/instances.hpp"
#include "confluent/io.hpp"
#include "confluent/multilayer.hpp"
#include "confluent/oracle.hpp"
#include "confluent/rounding.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

namespace confluent {

namespace {

struct Common {
  std::string input;
  std::string out;
  std::string emit = "json";
  std::string calibration;
  std::optional<std::uint64_t> seed;
  int trials = 0;  // 0: from calibration
  std::string base = "0";
  std::string budget_multiplier;
  int jobs = 1;
  std::int64_t T = -1;
  std::int64_t guard = kTreeGuard;
};

struct Ctx {
  std::ostream& out;
  std::ostream& err;
  Common c;
};

void emit(Ctx& ctx, const std::string& text) {
  if (ctx.c.out.empty()) {
    ctx.out << text;
  } else {
    write_file(ctx.c.out, text);
  }
}

void emit_json(Ctx& ctx, const Json& doc) { emit(ctx, doc.dump(2) + "\n"); }

std::uint64_t resolve_seed(Ctx& ctx) {
  if (ctx.c.seed) return *ctx.c.seed;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  ctx.err << "seed " << s << " (pass --seed to reproduce)\n";
  ctx.c.seed = s;
  return s;
}

Int parse_base(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
    throw Error("--base expects a non-negative integer, got '" + s + "'");
  }
  const Int b(s);
  if (b == 1) throw Error("--base must be 0 (default) or at least 2");
  return b;
}

Network load_network(const std::string& path) {
  if (path.empty()) throw Error("missing input network file");
  return read_network(read_file(path));
}

std::vector<std::string> names(const Network& net, const std::vector<NodeId>& ids) {
  std::vector<std::string> out;
  for (NodeId v : ids) out.push_back(net.name(v));
  return out;
}

Json violations_json(const std::vector<Violation>& vs) {
  Json out = Json::array();
  for (const Violation& v : vs) out.push_back(v.element + ": " + v.message);
  return out;
}

// Resolved options shared by the solver commands.
struct Resolved {
  Calibration cal;
  SolveOptions opt;
};

Resolved resolve(Ctx& ctx, const Network& net) {
  Resolved r;
  r.cal = load_calibration(ctx.c.calibration);
  r.opt.seed = resolve_seed(ctx);
  r.opt.trials = ctx.c.trials > 0 ? ctx.c.trials : default_trials(net.n(), r.cal.trials_c);
  r.opt.base = parse_base(ctx.c.base);
  r.opt.jobs = std::max(1, ctx.c.jobs);
  r.opt.budget_multiplier =
      ctx.c.budget_multiplier.empty() ? r.cal.budget_multiplier : Rat::parse(ctx.c.budget_multiplier);
  if (r.opt.budget_multiplier < 1) throw Error("--budget-multiplier must be at least 1");
  return r;
}

Json config_json(const Ctx& ctx, const std::string& command, const Resolved* r) {
  Json j;
  j["command"] = command;
  j["input"] = ctx.c.input;
  j["seed"] = ctx.c.seed ? Json(*ctx.c.seed) : Json(nullptr);
  if (r) {
    j["trials"] = r->opt.trials;
    j["base"] = r->opt.base.str();
    j["budget_multiplier"] = r->opt.budget_multiplier.str();
    j["jobs"] = r->opt.jobs;
    j["calibration"] = r->cal.to_json();
  }
  if (ctx.c.T >= 0) j["T"] = ctx.c.T;
  j["emit"] = ctx.c.emit;
  return j;
}

Json groups_json(const StaticResult& sr) {
  Json out = Json::array();
  for (const GroupReport& g : sr.groups) {
    out.push_back(Json{{"size", g.size.str()},
                       {"sources", g.sources},
                       {"kept", g.kept},
                       {"feasible", g.feasible},
                       {"k", g.k},
                       {"cap_doublings", g.cap_doublings},
                       {"nc_h", g.nc_h.str()},
                       {"ec", g.ec.str()},
                       {"kept_ec", g.kept_ec.str()},
                       {"kept_value", g.kept_value.str()},
                       {"selected_value", g.selected_value.str()},
                       {"length", g.length}});
  }
  return out;
}

Json static_json(const Network& net, const StaticResult& sr) {
  Json j;
  j["infeasible"] = sr.infeasible;
  j["value"] = sr.value.str();
  j["delivered"] = names(net, sr.delivered);
  j["ec"] = sr.ec.str();
  j["length"] = sr.length;
  j["best_group"] = sr.best_group;
  j["groups"] = groups_json(sr);
  j["dropped_value"] = sr.dropped_value.str();
  j["unreachable_value"] = sr.unreachable_value.str();
  j["other_groups_value"] = sr.other_groups_value.str();
  j["reroute_discarded_value"] = sr.reroute_discarded_value.str();
  j["selection_discarded_value"] = sr.selection_discarded_value.str();
  return j;
}

std::vector<NodeId> stream_sources(const DynamicRouting& dr) {
  std::vector<NodeId> out;
  for (const Stream& s : dr.streams) {
    if (s.total().sign() > 0) out.push_back(s.source);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Simulation certificate for a dynamic routing.
Json certificate(const Network& net, const DynamicRouting& dr, const SimTrace& tr) {
  Json j;
  j["makespan"] = tr.makespan;
  j["injected"] = tr.injected.str();
  j["delivered"] = tr.delivered.str();
  j["complete"] = tr.complete;
  j["max_entry_congestion"] = tr.max_entry_congestion.str();
  if (dr.tree) {
    const auto vs = check_confluent(net, *dr.tree, stream_sources(dr));
    j["confluent"] = vs.empty();
    j["violations"] = violations_json(vs);
  }
  return j;
}

int finish_sim(Ctx& ctx, const Network& net, const SimTrace& tr, Json doc) {
  if (ctx.c.emit == "csv") {
    emit(ctx, trace_csv(net, tr));
  } else {
    emit_json(ctx, doc);
  }
  return kExitOk;
}

int cmd_solve(Ctx& ctx, const std::string& problem) {
  const Network net = load_network(ctx.c.input);
  const Resolved r = resolve(ctx, net);
  Json doc;
  doc["config"] = config_json(ctx, "solve " + problem, &r);
  if (problem == "quickest") {
    const QuickestResult q = solve_quickest(net, r.opt);
    const SimTrace tr = simulate(net, q.routing, SimOptions{10'000'000, ctx.c.emit == "csv"});
    Json res;
    res["claimed_time"] = q.claimed_time;
    res["delivered_fraction"] = q.delivered_fraction.str();
    res["lower_bound"] = q.lower_bound;
    res["time_factor"] = q.time_factor.str();
    res["ec"] = q.ec.str();
    res["length"] = q.length;
    res["z"] = q.z;
    res["schedule"] = q.schedule;
    res["attached"] = q.attached;
    Json probes = Json::array();
    for (const Probe& p : q.probes) probes.push_back(Json{{"T", p.T}, {"feasible", p.feasible}});
    res["probes"] = std::move(probes);
    res["pipeline"] = static_json(net, q.pipeline);
    res["routing"] = dynamic_routing_to_json(net, q.routing);
    doc["result"] = std::move(res);
    Json cert = certificate(net, q.routing, tr);
    cert["claim_matches"] = tr.makespan == q.claimed_time &&
                            tr.delivered == q.delivered_fraction * net.total_supply();
    doc["certificate"] = std::move(cert);
    return finish_sim(ctx, net, tr, doc);
  }
  if (problem == "maxtime") {
    if (ctx.c.T < 0) throw Error("solve maxtime needs --T");
    const MaxFlowOverTimeResult m = solve_maxflow_over_time(net, ctx.c.T, r.opt);
    const SimTrace tr = simulate(net, m.routing, SimOptions{10'000'000, ctx.c.emit == "csv"});
    Json res;
    res["T"] = m.T;
    res["delivered"] = m.delivered.str();
    res["makespan"] = m.makespan;
    res["horizon_factor"] = m.horizon_factor.str();
    res["candidate"] = m.candidate;
    res["static_value"] = m.static_value.str();
    res["routing"] = dynamic_routing_to_json(net, m.routing);
    doc["result"] = std::move(res);
    Json cert = certificate(net, m.routing, tr);
    cert["claim_matches"] = tr.delivered == m.delivered && tr.makespan == m.makespan;
    doc["certificate"] = std::move(cert);
    return finish_sim(ctx, net, tr, doc);
  }
  if (problem == "demandmax") {
    PipelineOptions po;
    if (ctx.c.T >= 0) po.budget = ctx.c.T;
    po.trials = r.opt.trials;
    po.seed = r.opt.seed;
    po.base = r.opt.base;
    po.jobs = r.opt.jobs;
    po.select = true;
    const StaticResult sr = demand_max_static(net, net.supplies(), po);
    Json res = static_json(net, sr);
    res["routing"] = routing_to_json(net, sr.routing);
    doc["result"] = std::move(res);
    std::vector<Rat> values(net.n(), Rat(0));
    for (NodeId v : sr.delivered) values[v] = net.supply(v);
    const FlowStats st = flow_stats(net, routing_flow(net, sr.routing, values));
    const auto vs = check_confluent(net, sr.routing, sr.delivered);
    doc["certificate"] = Json{{"ec", st.ec.str()},
                              {"feasible", st.ec <= Rat(1)},
                              {"value", st.value.str()},
                              {"length", st.length},
                              {"confluent", vs.empty()},
                              {"violations", violations_json(vs)}};
    emit_json(ctx, doc);
    return kExitOk;
  }
  throw Error("unknown problem '" + problem + "' (expected quickest, maxtime or demandmax)");
}

int cmd_oracle(Ctx& ctx, const std::string& problem, bool time_expanded) {
  const Network net = load_network(ctx.c.input);
  Json doc;
  doc["config"] = config_json(ctx, "oracle " + problem, nullptr);
  doc["config"]["guard"] = ctx.c.guard;
  Json res;
  OracleResult o;
  if (problem == "quickest") {
    o = oracle_quickest(net, ctx.c.guard);
    res["best_time"] = o.best_time;
    if (time_expanded) res["time_expanded_time"] = oracle_quickest_time_expanded(net, ctx.c.guard);
  } else if (problem == "maxtime") {
    if (ctx.c.T < 0) throw Error("oracle maxtime needs --T");
    o = oracle_maxflow_over_time(net, ctx.c.T, ctx.c.guard);
    res["best_value"] = o.best_value.str();
  } else if (problem == "demandmax") {
    o = oracle_demand_max(net, ctx.c.guard);
    res["best_value"] = o.best_value.str();
    res["best_subset"] = names(net, o.best_subset);
  } else {
    throw Error("unknown problem '" + problem + "' (expected quickest, maxtime or demandmax)");
  }
  res["instances_enumerated"] = o.instances_enumerated;
  res["routing"] = routing_to_json(net, o.best_routing);
  doc["result"] = std::move(res);
  emit_json(ctx, doc);
  return kExitOk;
}

// Accepts a solve result, a dynamic routing or a confluent routing (all
// supplies released at time 0 on the tree).
DynamicRouting load_routing(const Network& net, const std::string& path) {
  Json doc;
  try {
    doc = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw ParseError("routing file " + path + ": " + e.what());
  }
  if (doc.is_object() && doc.contains("result") && doc["result"].contains("routing")) {
    doc = doc["result"]["routing"];
  }
  if (doc.is_object() && doc.contains("streams")) return dynamic_routing_from_json(net, doc);
  const ConfluentRouting r = routing_from_json(net, doc);
  return greedy_schedule(net, r, net.supplies());
}

int cmd_eval(Ctx& ctx, const std::string& routing_file) {
  const Network net = load_network(ctx.c.input);
  const DynamicRouting dr = load_routing(net, routing_file);
  const SimTrace tr = simulate(net, dr, SimOptions{10'000'000, ctx.c.emit == "csv"});
  Json doc;
  doc["config"] = config_json(ctx, "eval", nullptr);
  doc["config"]["routing"] = routing_file;
  Json res = certificate(net, dr, tr);
  res["total_supply"] = net.total_supply().str();
  if (ctx.c.T >= 0) res["delivered_by_T"] = tr.delivered_by(ctx.c.T).str();
  doc["result"] = std::move(res);
  return finish_sim(ctx, net, tr, doc);
}

TreeFamily family_from_json(const HalfGrid& hg, const std::string& path) {
  Json doc;
  try {
    doc = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw ParseError("family file " + path + ": " + e.what());
  }
  const Json& list = doc.is_object() && doc.contains("paths") ? doc["paths"] : doc;
  if (!list.is_array()) throw SchemaError("family: expected an array of paths");
  TreeFamily fam;
  for (std::size_t i = 0; i < list.size(); ++i) {
    fam.paths.push_back(path_from_json(hg.net, list[i], "paths[" + std::to_string(i) + "]"));
  }
  return fam;
}

int cmd_cutcheck(Ctx& ctx, int n, const std::string& family, bool crossing,
                 const std::string& family_file) {
  const HalfGrid hg = gen_half_grid(n, 1, Gadget::None);
  TreeFamily fam;
  if (!family_file.empty()) {
    fam = family_from_json(hg, family_file);
  } else if (family == "canonical") {
    fam = canonical_family(hg);
  } else if (family == "random") {
    fam = random_family(hg, resolve_seed(ctx), crossing);
  } else {
    throw Error("unknown family '" + family + "' (expected canonical or random)");
  }
  const CutResult cut = build_cut(hg, fam);
  Json doc;
  doc["config"] = config_json(ctx, "cutcheck", nullptr);
  doc["config"]["n"] = n;
  doc["config"]["family"] = family_file.empty() ? family : family_file;
  Json res;
  res["weight"] = cut.weight.str();
  res["bound"] = "2";
  res["within_bound"] = cut.weight <= Rat(2);
  res["separates"] = cut.separates;
  res["iterations"] = cut.iterations;
  res["fallbacks"] = cut.fallbacks;
  Json edges = Json::array();
  for (EdgeId e : cut.edges) {
    const Edge& ed = hg.net.edge(e);
    edges.push_back(Json{{"u", hg.net.name(ed.u)}, {"v", hg.net.name(ed.v)}, {"cap", ed.cap.str()}});
  }
  res["edges"] = std::move(edges);
  Json sub = Json::array();
  for (const auto& s : cut.subgrids) sub.push_back(Json{{"r", s[0]}, {"l", s[1]}, {"n", s[2]}});
  res["subgrids"] = std::move(sub);
  Json paths = Json::array();
  for (const Path& p : fam.paths) paths.push_back(path_to_json(hg.net, p));
  res["family"] = std::move(paths);
  doc["result"] = std::move(res);
  emit_json(ctx, doc);
  if (!(cut.weight <= Rat(2)) || !cut.separates) {
    ctx.err << "cut check failed: weight " << cut.weight.str()
            << (cut.separates ? "" : ", sources not separated") << "\n";
    return kExitError;
  }
  return kExitOk;
}

struct GenParams {
  std::string kind;
  int n = 3;
  std::string m = "20";
  std::string gadget = "none";
  std::string alpha = "1";
  bool yes = true;
  int occurrences = 2;
  std::string triples;
  bool confluent = false;
  bool directed = false;
  CorpusSpec corpus;
  int layers = 6;
  int width = 8;
  int kappa = 8;
  int nc = 1;
};

std::vector<std::array<int, 3>> parse_triples(const std::string& s) {
  std::vector<std::array<int, 3>> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    std::array<int, 3> t{};
    char c1 = 0, c2 = 0;
    std::stringstream is(item);
    if (!(is >> t[0] >> c1 >> t[1] >> c2 >> t[2]) || c1 != ',' || c2 != ',') {
      throw Error("--triples expects 'a,b,c;a,b,c;...', got '" + item + "'");
    }
    out.push_back(t);
  }
  return out;
}

std::string render(const Network& net, const std::string& fmt) {
  if (fmt == "dimacs") return write_dimacs(net);
  if (fmt == "json") return write_network(net);
  throw Error("gen emits json or dimacs, not '" + fmt + "'");
}

int cmd_gen(Ctx& ctx, const GenParams& g) {
  Network net;
  if (g.kind == "half-grid") {
    net = gen_half_grid(g.n, Int(g.m), parse_gadget(g.gadget)).net;
  } else if (g.kind == "alphabeta") {
    net = gen_alphabeta(Int(g.alpha), Int(g.m), g.yes).net;
  } else if (g.kind == "bo3dm") {
    net = gen_bo3dm(g.n, parse_triples(g.triples), g.occurrences, g.confluent, 1, g.directed).net;
  } else if (g.kind == "rounding") {
    net = gen_rounding_instance(g.layers, g.width, g.kappa, g.nc, resolve_seed(ctx)).net;
  } else if (g.kind == "random") {
    const auto nets = gen_random_corpus(g.corpus, resolve_seed(ctx));
    if (nets.size() == 1) {
      net = nets.front();
    } else {
      if (ctx.c.out.empty()) throw Error("gen random with --count > 1 needs --out DIR");
      std::filesystem::create_directories(ctx.c.out);
      const std::string ext = ctx.c.emit == "dimacs" ? ".max" : ".json";
      Json files = Json::array();
      for (std::size_t i = 0; i < nets.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "net_%03zu", i);
        const std::string p = (std::filesystem::path(ctx.c.out) / (buf + ext)).string();
        write_file(p, render(nets[i], ctx.c.emit));
        files.push_back(p);
      }
      Json doc;
      doc["config"] = config_json(ctx, "gen random", nullptr);
      doc["files"] = std::move(files);
      ctx.out << doc.dump(2) << "\n";
      return kExitOk;
    }
  } else {
    throw Error("unknown generator '" + g.kind +
                "' (expected half-grid, alphabeta, bo3dm, random or rounding)");
  }
  emit(ctx, render(net, ctx.c.emit));
  return kExitOk;
}

std::vector<std::pair<std::string, Network>> bench_corpus(Ctx& ctx, const std::string& dir,
                                                          const CorpusSpec& spec) {
  std::vector<std::pair<std::string, Network>> out;
  if (!dir.empty()) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      if (e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& p : files) out.emplace_back(p.filename().string(), load_network(p.string()));
    return out;
  }
  const auto nets = gen_random_corpus(spec, resolve_seed(ctx));
  for (std::size_t i = 0; i < nets.size(); ++i) out.emplace_back("gen_" + std::to_string(i), nets[i]);
  return out;
}

int cmd_bench(Ctx& ctx, const std::string& dir, const CorpusSpec& spec) {
  const auto corpus = bench_corpus(ctx, dir, spec);
  const std::uint64_t seed = resolve_seed(ctx);
  std::ostringstream csv;
  csv << "instance,opt_lower_bound,claimed_time,congestion,length_factor,wall_ms\n";
  for (const auto& [name, net] : corpus) {
    const auto t0 = std::chrono::steady_clock::now();
    Resolved r = resolve(ctx, net);
    r.opt.seed = seed;
    try {
      const QuickestResult q = solve_quickest(net, r.opt);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      const Rat lf = q.lower_bound > 0 ? Rat(q.length) / Rat(q.lower_bound) : Rat(0);
      csv << name << "," << q.lower_bound << "," << q.claimed_time << "," << q.ec.to_double() << ","
          << lf.to_double() << "," << static_cast<std::int64_t>(ms) << "\n";
    } catch (const Infeasible& e) {
      csv << name << ",,infeasible,,,\n";
    }
  }
  emit(ctx, csv.str());
  return kExitOk;
}

void add_corpus_options(CLI::App* app, CorpusSpec& s) {
  app->add_option("--count", s.count, "Number of networks")->check(CLI::PositiveNumber);
  app->add_option("--n-min", s.n_min, "Minimum node count");
  app->add_option("--n-max", s.n_max, "Maximum node count");
  app->add_option("--kappa-min", s.kappa_min, "Minimum number of sources");
  app->add_option("--kappa-max", s.kappa_max, "Maximum number of sources");
  app->add_option("--cap-min", s.cap_min, "Minimum edge capacity");
  app->add_option("--cap-max", s.cap_max, "Maximum edge capacity");
  app->add_option("--len-min", s.len_min, "Minimum edge length");
  app->add_option("--len-max", s.len_max, "Maximum edge length");
  app->add_option("--supply-min", s.supply_min, "Minimum supply");
  app->add_option("--supply-max", s.supply_max, "Maximum supply");
  app->add_option("--extra-edges", s.extra_edges, "Extra edges per node");
  app->add_flag("--monotone", s.monotone, "Node capacities non-decreasing along edges");
  app->add_flag("--pow2-caps", s.pow2_caps, "Capacities restricted to powers of two");
  app->add_flag("!--cyclic", s.dag, "Allow cycles");
  app->add_flag("!--undirected", s.directed, "Undirected edges");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Confluent dynamic flows: generators, solvers, oracles and simulation", "confluent"};
  app.require_subcommand(1);
  Ctx ctx{out, err, {}};
  Common& c = ctx.c;
  auto out_opt = [&c](CLI::App* a) { a->add_option("--out,-o", c.out, "Write the result here"); };
  auto seed_opt = [&c](CLI::App* a) { a->add_option("--seed", c.seed, "Master seed"); };
  auto solver_opts = [&](CLI::App* a) {
    a->add_option("--trials", c.trials, "Rounding trials (default from calibration)");
    a->add_option("--base", c.base, "Capacity class base b (0: default)");
    a->add_option("--budget-multiplier", c.budget_multiplier, "Length budget multiplier");
    a->add_option("--jobs,-j", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
    a->add_option("--calibration", c.calibration, "Calibration file (overrides CONFLUENT_CALIBRATION)");
  };

  GenParams g;
  auto* gen = app.add_subcommand("gen", "Generate a network");
  gen->add_option("kind", g.kind, "half-grid | alphabeta | bo3dm | random | rounding")->required();
  gen->add_option("--n", g.n, "Grid size or BO3DM element count");
  gen->add_option("--m", g.m, "Supply scale M");
  gen->add_option("--gadget", g.gadget, "none | yes | no");
  gen->add_option("--alpha", g.alpha, "Alpha for the alpha/beta gadget");
  gen->add_flag("--yes,!--no", g.yes, "YES or NO gadget core");
  gen->add_option("--occurrences", g.occurrences, "BO3DM occurrences per element");
  gen->add_option("--triples", g.triples, "BO3DM triples 'a,b,c;...'");
  gen->add_flag("--confluent", g.confluent, "BO3DM hub copy per source");
  gen->add_flag("--directed", g.directed, "BO3DM with directed edges");
  gen->add_option("--layers", g.layers, "Rounding instance layers");
  gen->add_option("--width", g.width, "Rounding instance width");
  gen->add_option("--kappa", g.kappa, "Rounding instance sources");
  gen->add_option("--nc", g.nc, "Rounding instance node congestion target");
  gen->add_option("--emit", c.emit, "json | dimacs")->check(CLI::IsMember({"json", "dimacs"}));
  add_corpus_options(gen, g.corpus);
  g.corpus.count = 1;
  out_opt(gen);
  seed_opt(gen);

  std::string problem;
  auto* solve = app.add_subcommand("solve", "Run an approximation pipeline");
  solve->add_option("problem", problem, "quickest | maxtime | demandmax")
      ->required()
      ->check(CLI::IsMember({"quickest", "maxtime", "demandmax"}));
  solve->add_option("input", c.input, "Network JSON")->required();
  solve->add_option("--T", c.T, "Horizon (maxtime) or length budget (demandmax)");
  solve->add_option("--emit", c.emit, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  solver_opts(solve);
  out_opt(solve);
  seed_opt(solve);

  bool time_expanded = false;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive solver for small instances");
  oracle->add_option("problem", problem, "quickest | maxtime | demandmax")
      ->required()
      ->check(CLI::IsMember({"quickest", "maxtime", "demandmax"}));
  oracle->add_option("input", c.input, "Network JSON")->required();
  oracle->add_option("--T", c.T, "Horizon for maxtime");
  oracle->add_option("--guard", c.guard, "Limit on the product of out-degrees");
  oracle->add_flag("--time-expanded", time_expanded, "Cross-check quickest on the time-expanded network");
  out_opt(oracle);

  std::string routing_file;
  auto* eval = app.add_subcommand("eval", "Simulate a routing");
  eval->add_option("input", c.input, "Network JSON")->required();
  eval->add_option("--routing", routing_file, "Routing, dynamic routing or solve result JSON")->required();
  eval->add_option("--T", c.T, "Report delivery by this step");
  eval->add_option("--emit", c.emit, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  out_opt(eval);

  int cut_n = 4;
  std::string family = "random";
  std::string family_file;
  bool crossing = false;
  auto* cutcheck = app.add_subcommand("cutcheck", "Build and check the half-grid tree cut");
  cutcheck->add_option("--n", cut_n, "Grid size")->check(CLI::PositiveNumber);
  cutcheck->add_option("--family", family, "canonical | random");
  cutcheck->add_option("--family-file", family_file, "Paths JSON on the plain half-grid");
  cutcheck->add_flag("--allow-crossing", crossing, "Random families may cross");
  out_opt(cutcheck);
  seed_opt(cutcheck);

  std::string corpus_dir;
  CorpusSpec bench_spec;
  auto* bench = app.add_subcommand("bench", "Quickest-flow sweep over a corpus, CSV output");
  bench->add_option("--corpus", corpus_dir, "Directory of network JSON files");
  add_corpus_options(bench, bench_spec);
  solver_opts(bench);
  out_opt(bench);
  seed_opt(bench);

  std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }
  try {
    if (*gen) return cmd_gen(ctx, g);
    if (*solve) return cmd_solve(ctx, problem);
    if (*oracle) return cmd_oracle(ctx, problem, time_expanded);
    if (*eval) return cmd_eval(ctx, routing_file);
    if (*cutcheck) return cmd_cutcheck(ctx, cut_n, family, crossing, family_file);
    if (*bench) return cmd_bench(ctx, corpus_dir, bench_spec);
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace confluent
