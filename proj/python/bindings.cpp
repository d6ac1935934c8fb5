#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "asimkit/asim.hpp"
#include "asimkit/boolfn.hpp"
#include "asimkit/connective.hpp"
#include "asimkit/error.hpp"
#include "asimkit/experiment.hpp"
#include "asimkit/fo.hpp"
#include "asimkit/fragment.hpp"
#include "asimkit/model.hpp"

namespace py = pybind11;
using namespace asimkit;

namespace {

std::size_t element(const Model& m, const std::string& name) {
  auto i = m.index_of(name);
  if (!i) throw InputError("unknown element '" + name + "'");
  return *i;
}

std::vector<std::string> preds_or_joint(const std::optional<std::vector<std::string>>& preds, const Model& m1,
                                        const Model& m2) {
  return preds ? *preds : joint_predicates(m1, m2);
}

py::dict class_dict(const BoolClass& c) {
  py::dict d;
  d["class"] = class_label(c);
  d["constant"] = c.is_constant;
  d["monotone"] = c.is_monotone;
  d["antimonotone"] = c.is_antimonotone;
  d["rest"] = c.is_rest;
  d["tft"] = c.is_tft;
  d["ftf"] = c.is_ftf;
  d["forall_special"] = c.forall_special;
  d["exists_special"] = c.exists_special;
  return d;
}

}  // namespace

PYBIND11_MODULE(_asimkit, m) {
  m.doc() = "Asimulations for guarded fragments on finite models";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<UnsupportedFragment>(m, "UnsupportedFragment", PyExc_RuntimeError);

  m.def(
      "classify_bool",
      [](const std::string& expr, std::optional<unsigned> arity) {
        const BoolExpr e = parse_bool_expr(expr);
        const TruthTable f = table_of(e, arity.value_or(e.max_var()));
        py::dict d = class_dict(classify(f));
        d["table"] = f.to_string();
        d["canonical"] = to_string(canonical_expr(f));
        return d;
      },
      py::arg("expr"), py::arg("arity") = py::none());

  py::class_<Model>(m, "Model")
      .def_static("from_json", [](const std::string& text) { return parse_model(text); })
      .def_static("load", &read_model_file)
      .def_property_readonly("size", &Model::size)
      .def_property_readonly("domain", &Model::domain)
      .def("to_json", [](const Model& mo) { return model_to_json(mo); })
      .def("holds", &Model::holds);

  py::class_<Signature>(m, "Signature")
      .def_static("from_json", [](const std::string& text) { return parse_signature(text); })
      .def_static("load", &read_signature_file)
      .def_property_readonly("names", &Signature::names)
      .def("connective", [](const Signature& s, const std::string& name) { return to_string(s.at(name)); })
      .def("is_standard", [](const Signature& s) { return validate_standard_fragment(s).empty(); });

  m.def("classify_connective", [](const std::string& text) {
    const ConnectiveClass c = classify_connective(parse_connective(text));
    py::dict d;
    d["degree"] = c.degree;
    d["prefix"] = c.nu_prefix;
    d["core"] = class_dict(c.core_class);
    d["flat"] = c.is_flat;
    d["modality"] = c.is_modality;
    d["regular"] = c.is_regular;
    d["standard"] = c.is_standard;
    return d;
  });

  m.def(
      "translate",
      [](const Signature& sig, const std::string& formula, const std::string& var) {
        return to_string(std_translate(parse_fragment(formula, sig), var, sig));
      },
      py::arg("sig"), py::arg("formula"), py::arg("var") = "x1");

  m.def("eval_fragment", [](const Model& mo, const std::string& world, const Signature& sig, const std::string& f) {
    return eval_fragment(mo, element(mo, world), parse_fragment(f, sig), sig);
  });

  m.def("eval_fo", [](const Model& mo, const std::string& world, const std::string& text) {
    const FoFormula phi = parse_fo(text);
    Assignment alpha;
    for (const auto& v : free_vars(phi)) alpha[v] = element(mo, world);
    return eval_fo(mo, alpha, phi);
  });

  m.def(
      "largest_asimulation",
      [](const Signature& sig, const Model& m1, const Model& m2, std::optional<std::vector<std::string>> preds) {
        const LargestResult r = largest_asimulation(sig, preds_or_joint(preds, m1, m2), m1, m2);
        py::dict d;
        d["relation"] = relation_to_json(r.relation, m1, m2);
        d["none"] = r.none;
        d["rounds"] = r.rounds;
        return d;
      },
      py::arg("sig"), py::arg("m1"), py::arg("m2"), py::arg("preds") = py::none());

  m.def(
      "check_asimulation",
      [](const Signature& sig, const Model& m1, const Model& m2, const std::string& relation,
         std::optional<std::vector<std::string>> preds) {
        const CrossRelation A = parse_relation(relation, m1, m2);
        std::vector<std::string> out;
        for (const auto& v : is_asimulation(sig, preds_or_joint(preds, m1, m2), m1, m2, A)) out.push_back(v.to_json());
        return out;
      },
      py::arg("sig"), py::arg("m1"), py::arg("m2"), py::arg("relation"), py::arg("preds") = py::none());

  m.def(
      "distinguishing_formula",
      [](const Signature& sig, const Model& m1, const std::string& p1, const Model& m2, const std::string& p2,
         unsigned depth) -> std::optional<std::string> {
        const Distinction d =
            distinguishing_formula(sig, PointedModel{m1, element(m1, p1)}, PointedModel{m2, element(m2, p2)}, depth);
        if (!d.formula) return std::nullopt;
        return to_string(*d.formula);
      },
      py::arg("sig"), py::arg("m1"), py::arg("p1"), py::arg("m2"), py::arg("p2"), py::arg("depth") = 3);

  m.def(
      "run_experiment",
      [](const Signature& sig, std::uint64_t seed, unsigned trials, std::size_t max_size, unsigned depth,
         bool preorder) {
        ExperimentConfig cfg;
        cfg.seed = seed;
        cfg.trials = trials;
        cfg.max_size = max_size;
        cfg.depth = depth;
        cfg.preorder = preorder;
        std::vector<std::string> out;
        for (const auto& r : run_experiment(sig, cfg)) out.push_back(r.to_json());
        return out;
      },
      py::arg("sig"), py::arg("seed") = 1, py::arg("trials") = 5, py::arg("max_size") = 3, py::arg("depth") = 2,
      py::arg("preorder") = false);
}
