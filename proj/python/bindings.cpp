// Python bindings. Networks and results cross the boundary as JSON text.
#include "confluent/cli.hpp"
#include "confluent/dynamic.hpp"
#include "confluent/instances.hpp"
#include "confluent/io.hpp"
#include "confluent/oracle.hpp"
#include "confluent/rounding.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace confluent;

namespace {

std::tuple<int, std::string, std::string> run(const std::vector<std::string>& args) {
  std::vector<std::string> argv{"confluent"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = run_cli(argv, out, err);
  }
  return {code, out.str(), err.str()};
}

std::string half_grid(int n, const std::string& m, const std::string& gadget) {
  return write_network(gen_half_grid(n, Int(m), parse_gadget(gadget)).net);
}

std::string alphabeta(const std::string& alpha, const std::string& m, bool yes) {
  return write_network(gen_alphabeta(Int(alpha), Int(m), yes).net);
}

std::string solve_quickest_json(const std::string& network, std::uint64_t seed, int trials) {
  const Network net = read_network(network);
  SolveOptions opt;
  opt.seed = seed;
  opt.trials = trials;
  const QuickestResult q = solve_quickest(net, opt);
  Json j;
  j["claimed_time"] = q.claimed_time;
  j["lower_bound"] = q.lower_bound;
  j["delivered_fraction"] = q.delivered_fraction.str();
  j["routing"] = dynamic_routing_to_json(net, q.routing);
  return j.dump();
}

std::int64_t oracle_quickest_time(const std::string& network) {
  return oracle_quickest(read_network(network)).best_time;
}

// Makespan of a confluent routing with every supply released at time 0.
std::int64_t greedy_makespan(const std::string& network, const std::string& routing) {
  const Network net = read_network(network);
  const ConfluentRouting r = routing_from_json(net, Json::parse(routing));
  return simulate(net, greedy_schedule(net, r, net.supplies())).makespan;
}

std::string simulate_csv(const std::string& network, const std::string& dynamic_routing) {
  const Network net = read_network(network);
  return trace_csv(net, simulate(net, dynamic_routing_from_json(net, Json::parse(dynamic_routing))));
}

}  // namespace

PYBIND11_MODULE(_confluent, m) {
  m.doc() = "Confluent dynamic flows";
  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<Infeasible>(m, "Infeasible", error.ptr());
  py::register_exception<PreconditionViolated>(m, "PreconditionViolated", error.ptr());
  m.attr("EXIT_OK") = kExitOk;
  m.attr("EXIT_ERROR") = kExitError;
  m.attr("EXIT_INFEASIBLE") = kExitInfeasible;
  m.def("run", &run, py::arg("args"), "Run the command line; returns (exit code, stdout, stderr).");
  m.def("half_grid", &half_grid, py::arg("n"), py::arg("m"), py::arg("gadget") = "none");
  m.def("alphabeta", &alphabeta, py::arg("alpha"), py::arg("m"), py::arg("yes"));
  m.def("solve_quickest", &solve_quickest_json, py::arg("network"), py::arg("seed"), py::arg("trials") = 8);
  m.def("oracle_quickest", &oracle_quickest_time, py::arg("network"));
  m.def("greedy_makespan", &greedy_makespan, py::arg("network"), py::arg("routing"));
  m.def("simulate_csv", &simulate_csv, py::arg("network"), py::arg("dynamic_routing"));
}
