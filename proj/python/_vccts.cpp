#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vccts/encodings.hpp"
#include "vccts/error.hpp"
#include "vccts/json_io.hpp"
#include "vccts/parser.hpp"

namespace py = pybind11;
using namespace vccts;

namespace {

py::object to_python(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: return py::none();
    case Json::value_t::boolean: return py::bool_(j.get<bool>());
    case Json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case Json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case Json::value_t::number_float: return py::float_(j.get<double>());
    case Json::value_t::string: return py::str(j.get<std::string>());
    case Json::value_t::array: {
      py::list out;
      for (const auto& x : j) out.append(to_python(x));
      return out;
    }
    case Json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_python(v);
      return out;
    }
    default: return py::none();
  }
}

// int, bool, str (value syntax), 2-tuple (pair), list
Value to_value(const py::handle& h) {
  if (py::isinstance<py::bool_>(h)) return Value::boolean(h.cast<bool>());
  if (py::isinstance<py::int_>(h)) return Value::integer(h.cast<std::int64_t>());
  if (py::isinstance<py::str>(h)) return parse_value(h.cast<std::string>());
  if (py::isinstance<py::tuple>(h) && py::len(h) == 2) {
    auto t = h.cast<py::tuple>();
    return Value::pair(to_value(t[0]), to_value(t[1]));
  }
  if (py::isinstance<py::list>(h)) {
    std::vector<Value> items;
    for (auto x : h) items.push_back(to_value(x));
    return Value::list(std::move(items));
  }
  throw Error("cannot convert " + py::repr(h).cast<std::string>() + " to a value");
}

std::vector<Value> to_values(const py::iterable& xs) {
  std::vector<Value> out;
  for (auto x : xs) out.push_back(to_value(x));
  if (out.empty()) throw Error("empty value universe");
  return out;
}

GameConfig config(const py::iterable& universe, std::size_t width, std::size_t max_states, std::size_t max_triples) {
  GameConfig cfg;
  cfg.universe = to_values(universe);
  cfg.max_width = width;
  cfg.bounds.max_states = max_states;
  cfg.max_triples = max_triples;
  return cfg;
}

class PyModule {
 public:
  explicit PyModule(const std::string& source) : m_(parse_module(source)) {}
  static PyModule from_file(const std::string& path) { return PyModule(parse_module_file(path)); }

  void define(const std::string& source) { parse_into(m_, source); }

  std::vector<std::string> processes() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : m_.processes) out.push_back(name);
    return out;
  }

  // A declared process name, else a process term in the module's vocabulary.
  NetState state(const std::string& p) const {
    for (const auto& [name, t] : m_.processes) {
      if (name == p) return flatten(t, m_.env);
    }
    return flatten(parse_process(p, m_.env), m_.env);
  }

  const Module& module() const { return m_; }

 private:
  explicit PyModule(Module m) : m_(std::move(m)) {}
  Module m_;
};

}  // namespace

PYBIND11_MODULE(_vccts, m) {
  m.doc() = "Value-passing CCS for trees: states, reductions, labelled steps and bisimulations.";

  auto& base = py::register_exception<Error>(m, "VcctsError");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<SyntaxError>(m, "SyntaxError", base.ptr());
  py::register_exception<EvalError>(m, "EvalError", base.ptr());
  py::register_exception<GuardError>(m, "GuardError", base.ptr());
  py::register_exception<GraphError>(m, "GraphError", base.ptr());

  constexpr std::size_t kStates = 20000, kDepth = 1000, kTriples = 20000;
  const auto zero_one = [] {
    py::list u;
    u.append(0);
    u.append(1);
    return u;
  };

  py::class_<PyModule>(m, "Module")
      .def(py::init<const std::string&>(), py::arg("source"))
      .def_static("from_file", &PyModule::from_file, py::arg("path"))
      .def("define", &PyModule::define, py::arg("source"), "Parses further clauses into the module.")
      .def_property_readonly("processes", &PyModule::processes)
      .def(
          "state", [](const PyModule& self, const std::string& p) { return to_python(to_json(self.state(p))); },
          py::arg("process"))
      .def(
          "key", [](const PyModule& self, const std::string& p) { return state_key(self.state(p), self.module().env); },
          py::arg("process"), "Canonical key: equal keys mean isomorphic states.")
      .def(
          "reachable",
          [](const PyModule& self, const std::string& p, std::size_t max_states, std::size_t max_depth) {
            return to_python(to_json(reachable(self.state(p), self.module().env, {max_states, max_depth})));
          },
          py::arg("process"), py::arg("max_states") = kStates, py::arg("max_depth") = kDepth)
      .def(
          "reduces_to_idle",
          [](const PyModule& self, const std::string& p, std::size_t max_states, std::size_t max_depth) {
            auto r = reduces_to_idle(self.state(p), self.module().env, {max_states, max_depth});
            py::dict out;
            out["found"] = r.found;
            out["status"] = to_string(r.status);
            out["steps"] = r.steps;
            return out;
          },
          py::arg("process"), py::arg("max_states") = kStates, py::arg("max_depth") = kDepth)
      .def(
          "transitions",
          [](const PyModule& self, const std::string& p, const py::iterable& universe, std::size_t width) {
            py::list out;
            for (const auto& s : multi_transitions(self.state(p), self.module().env, to_values(universe), width))
              out.append(to_python(to_json(s)));
            return out;
          },
          py::arg("process"), py::arg("universe") = zero_one(), py::arg("width") = 1)
      .def(
          "diamond",
          [](const PyModule& self, const std::string& p, const py::iterable& universe, std::size_t width) {
            auto r = diamond_check(self.state(p), self.module().env, to_values(universe), width);
            py::dict out;
            out["checked"] = r.checked;
            out["counterexamples"] = r.counterexamples;
            return out;
          },
          py::arg("process"), py::arg("universe") = zero_one(), py::arg("width") = 2)
      .def(
          "weak_bisim",
          [](const PyModule& self, const std::string& p, const std::string& q, const py::iterable& universe,
             std::size_t width, std::size_t max_states, std::size_t max_triples) {
            auto cfg = config(universe, width, max_states, max_triples);
            return to_python(to_json(weak_bisim(self.state(p), self.state(q), self.module().env, cfg)));
          },
          py::arg("p"), py::arg("q"), py::arg("universe") = zero_one(), py::arg("width") = 2,
          py::arg("max_states") = kStates, py::arg("max_triples") = kTriples)
      .def(
          "barbed_bisim",
          [](const PyModule& self, const std::string& p, const std::string& q, std::size_t max_states) {
            GameConfig cfg;
            cfg.bounds.max_states = max_states;
            return to_python(to_json(weak_barbed_bisim(self.state(p), self.state(q), self.module().env, cfg)));
          },
          py::arg("p"), py::arg("q"), py::arg("max_states") = kStates)
      .def(
          "stratified_bisim",
          [](const PyModule& self, const std::string& p, const std::string& q, std::size_t n,
             const py::iterable& universe, std::size_t width) {
            auto cfg = config(universe, width, kStates, kTriples);
            return to_python(to_json(stratified_bisim(self.state(p), self.state(q), self.module().env, cfg, n)));
          },
          py::arg("p"), py::arg("q"), py::arg("n"), py::arg("universe") = zero_one(), py::arg("width") = 2)
      .def(
          "distinguishing_context",
          [](const PyModule& self, const std::string& p, const std::string& q, const py::iterable& universe,
             std::size_t width, std::size_t depth) {
            auto cfg = config(universe, width, kStates, kTriples);
            return to_python(
                to_json(distinguishing_context(self.state(p), self.state(q), self.module().env, cfg, depth)));
          },
          py::arg("p"), py::arg("q"), py::arg("universe") = zero_one(), py::arg("width") = 2, py::arg("depth") = 0)
      .def(
          "recognizes",
          [](const PyModule& self, const std::string& automaton, const std::string& q, const std::string& tree) {
            const auto& mod = self.module();
            auto a = mod.automata.find(automaton);
            if (a == mod.automata.end()) throw Error("unknown automaton " + automaton);
            auto t = mod.trees.find(tree);
            if (t == mod.trees.end()) throw Error("unknown tree " + tree);
            return recognizes(a->second, q, t->second);
          },
          py::arg("automaton"), py::arg("state"), py::arg("tree"));

  m.def(
      "abp_delivers",
      [](const py::iterable& messages, int bit, std::size_t max_states) {
        std::vector<Value> t;
        for (auto x : messages) t.push_back(to_value(x));
        auto sys = abp_system(t, bit);
        auto space = reachable(sys.state, sys.env, {max_states, kDepth});
        for (std::size_t i = 0; i < space.size(); ++i) {
          if (abp_delivered(space.state(i), t)) return true;
        }
        return false;
      },
      py::arg("messages"), py::arg("bit") = 0, py::arg("max_states") = kStates,
      "Whether the alternating bit protocol reaches the state holding every message at the receiver.");
}
