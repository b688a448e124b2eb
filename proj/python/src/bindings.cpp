#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/functional.h>

#include <sstream>

#include "infbin/be_graph.hpp"
#include "infbin/configuration.hpp"
#include "infbin/distribution.hpp"
#include "infbin/series.hpp"
#include "infbin/simulator.hpp"
#include "infbin/word.hpp"
#include "infbin/word_lab.hpp"

namespace py = pybind11;
using namespace infbin;

namespace {

Word to_word(const std::vector<Letter>& letters) { return Word(letters); }

EnumerationOptions options(double min_weight, unsigned threads) {
  EnumerationOptions o;
  o.min_weight = min_weight;
  o.threads = threads;
  return o;
}

PerfectOptions perfect_options(std::int64_t max_horizon) {
  PerfectOptions o;
  o.max_horizon = max_horizon;
  return o;
}

}  // namespace

PYBIND11_MODULE(_infbin, m) {
  m.doc() = "Infinite-bin model: word verdicts, speed brackets, simulation";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<SizeLimitError>(m, "SizeLimitError", PyExc_RuntimeError);
  py::register_exception<HorizonError>(m, "HorizonError", PyExc_RuntimeError);

  py::enum_<Verdict>(m, "Verdict")
      .value("GOOD", Verdict::Good)
      .value("BAD", Verdict::Bad)
      .value("NEITHER", Verdict::Neither);

  py::class_<MoveDistribution>(m, "MoveDistribution")
      .def_static("parse", [](const std::string& s) { return MoveDistribution::parse(s); })
      .def_static("geometric", &MoveDistribution::geometric)
      .def_static("uniform", &MoveDistribution::uniform)
      .def_static("dirac", &MoveDistribution::dirac)
      .def_static("finite", &MoveDistribution::finite)
      .def("pmf", &MoveDistribution::pmf)
      .def("tail_mass", &MoveDistribution::tail_mass)
      .def("max_support", &MoveDistribution::max_support)
      .def("non_degenerate", &MoveDistribution::non_degenerate)
      .def("__repr__", &MoveDistribution::describe);

  py::class_<Configuration>(m, "Configuration")
      .def(py::init<BinIndex, std::vector<BallCount>>(), py::arg("front"), py::arg("window"))
      .def_static("minimal", &Configuration::minimal, py::arg("front") = 0)
      .def_static("from_json", &Configuration::from_json)
      .def_property_readonly("front", &Configuration::front)
      .def_property_readonly("window", &Configuration::window)
      .def("count", &Configuration::count)
      .def("advance", &Configuration::advance)
      .def("scenery", &Configuration::scenery)
      .def("normalized", &Configuration::normalized)
      .def("to_json", &Configuration::to_json)
      .def("__eq__", [](const Configuration& a, const Configuration& b) { return a == b; })
      .def("__repr__", &Configuration::to_json);

  m.def("apply_word", [](const Configuration& x, const std::vector<Letter>& w) { return apply_word(x, to_word(w)); });

  py::class_<Classification>(m, "Classification")
      .def_readonly("verdict", &Classification::verdict)
      .def_readonly("minimal", &Classification::minimal);

  m.def("classify", [](const std::vector<Letter>& w) { return classify(to_word(w)); });
  m.def("verdict", [](const std::vector<Letter>& w) { return verdict_of(to_word(w)); });
  m.def("horizon", [](const std::vector<Letter>& w) { return horizon(to_word(w)); });
  m.def("coupling_number", [](const std::vector<Letter>& w) { return coupling_number(to_word(w)); });
  m.def("coupling_lower_bound", [](const std::vector<Letter>& w) { return tracker_run(to_word(w)).depth(); });

  py::class_<SpeedBracket>(m, "SpeedBracket")
      .def_readonly("lower", &SpeedBracket::lower)
      .def_readonly("upper", &SpeedBracket::upper)
      .def_readonly("good_mass", &SpeedBracket::good_mass)
      .def_readonly("bad_mass", &SpeedBracket::bad_mass)
      .def_readonly("frontier_mass", &SpeedBracket::frontier_mass)
      .def_readonly("rounding_bound", &SpeedBracket::rounding_bound)
      .def_readonly("nodes", &SpeedBracket::nodes);

  m.def(
      "speed_bracket",
      [](const MoveDistribution& mu, Letter max_len, Letter max_letter, double min_weight, unsigned threads) {
        py::gil_scoped_release release;
        return speed_bracket(mu, max_len, max_letter, options(min_weight, threads));
      },
      py::arg("mu"), py::arg("max_len"), py::arg("max_letter"), py::arg("min_weight") = 0.0, py::arg("threads") = 1);

  m.def(
      "minimal_words",
      [](const MoveDistribution& mu, Letter max_len, Letter max_letter) {
        std::vector<std::tuple<std::vector<Letter>, Verdict, double>> out;
        enumerate_minimal(mu, max_len, max_letter, [&](const LeafRecord& r) {
          const auto l = r.word.letters();
          out.emplace_back(std::vector<Letter>(l.begin(), l.end()), r.verdict, r.weight);
        });
        return out;
      },
      py::arg("mu"), py::arg("max_len"), py::arg("max_letter"));

  py::class_<CurveRow>(m, "CurveRow")
      .def_readonly("p", &CurveRow::p)
      .def_readonly("lower", &CurveRow::lower)
      .def_readonly("upper", &CurveRow::upper);

  m.def(
      "curve",
      [](const std::vector<double>& grid, Letter max_len, Letter max_letter, double min_weight) {
        py::gil_scoped_release release;
        return curve(grid, max_len, max_letter, options(min_weight, 1));
      },
      py::arg("grid"), py::arg("max_len"), py::arg("max_letter"), py::arg("min_weight") = 0.0);

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("estimate", &Estimate::estimate)
      .def_readonly("stderr", &Estimate::stderr_)
      .def_readonly("samples", &Estimate::samples);

  py::class_<RunStats>(m, "RunStats")
      .def_readonly("steps", &RunStats::steps)
      .def_readonly("front_final", &RunStats::front_final)
      .def_readonly("speed_estimate", &RunStats::speed_estimate)
      .def_readonly("stderr", &RunStats::stderr_);

  m.def("run_forward", &run_forward, py::arg("mu"), py::arg("x0"), py::arg("steps"), py::arg("seed"),
        py::arg("stream") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("forward_ensemble", &forward_ensemble, py::arg("mu"), py::arg("x0"), py::arg("steps"), py::arg("runs"),
        py::arg("seed"), py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());

  py::class_<PerfectSample>(m, "PerfectSample")
      .def_readonly("scenery", &PerfectSample::scenery)
      .def_readonly("tau", &PerfectSample::tau)
      .def_readonly("K", &PerfectSample::K)
      .def_readonly("horizon", &PerfectSample::horizon);

  m.def(
      "perfect_sample",
      [](const MoveDistribution& mu, std::size_t K, std::uint64_t seed, std::uint64_t stream, std::int64_t max_horizon) {
        return perfect_sample(mu, K, seed, stream, perfect_options(max_horizon));
      },
      py::arg("mu"), py::arg("K"), py::arg("seed"), py::arg("stream") = 0, py::arg("max_horizon") = PerfectOptions{}.max_horizon,
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "stationary_speed",
      [](const MoveDistribution& mu, std::uint64_t samples, std::uint64_t seed, unsigned threads) {
        return stationary_speed(mu, samples, seed, threads);
      },
      py::arg("mu"), py::arg("samples"), py::arg("seed"), py::arg("threads") = 1,
      py::call_guard<py::gil_scoped_release>());

  py::class_<TauTail>(m, "TauTail")
      .def_readonly("histogram", &TauTail::histogram)
      .def_readonly("taus", &TauTail::taus)
      .def("survival", &TauTail::survival)
      .def("median", &TauTail::median);

  m.def(
      "tau_tail",
      [](const MoveDistribution& mu, std::size_t K, std::uint64_t replicas, std::uint64_t seed, unsigned threads) {
        return tau_tail(mu, K, replicas, seed, threads);
      },
      py::arg("mu"), py::arg("K"), py::arg("replicas"), py::arg("seed"), py::arg("threads") = 1,
      py::call_guard<py::gil_scoped_release>());

  py::class_<LongestPathRun>(m, "LongestPathRun")
      .def_readonly("n", &LongestPathRun::n)
      .def_readonly("p", &LongestPathRun::p)
      .def_readonly("longest", &LongestPathRun::longest)
      .def_readonly("per_vertex", &LongestPathRun::per_vertex);

  m.def("longest_path", &longest_path, py::arg("n"), py::arg("p"), py::arg("seed"),
        py::arg("keep_per_vertex") = false, py::arg("stream") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("estimate_C", &estimate_C, py::arg("p"), py::arg("n"), py::arg("replicas"), py::arg("seed"),
        py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
}
