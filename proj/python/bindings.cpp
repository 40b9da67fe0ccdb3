// Copyright 2026 The qmdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Python view of the library. Rationals cross as fractions.Fraction, ranks as
// int with math.inf for infinity, and models are addressed by symbol names.

#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include <cmath>
#include <set>

#include "qmdp/baseline.hpp"
#include "qmdp/error.hpp"
#include "qmdp/modelio.hpp"

namespace py = pybind11;

namespace pybind11::detail {

template <>
struct type_caster<qmdp::Rational> {
    PYBIND11_TYPE_CASTER(qmdp::Rational, const_name("fractions.Fraction"));

    bool load(handle src, bool) {
        if (!src || src.is_none() || PyFloat_Check(src.ptr())) return false;
        try {
            value = qmdp::parse_rational(std::string(py::str(src)));
        } catch (const qmdp::Error&) {
            return false;
        }
        return true;
    }

    static handle cast(const qmdp::Rational& q, return_value_policy, handle) {
        static auto fraction = py::module_::import("fractions").attr("Fraction");
        return fraction(qmdp::to_string(q)).release();
    }
};

}  // namespace pybind11::detail

namespace qmdp {
namespace {

// Opaque holder; the stl casters would otherwise unpack the variant.
struct Model {
    ModelFile file;
};

py::object rank_to_py(const Rank& r) {
    if (r.is_infinite()) return py::float_(INFINITY);
    return py::int_(r.value());
}

const QmdpFile& as_qmdp(const ModelFile& file) {
    if (const auto* f = std::get_if<QmdpFile>(&file)) return *f;
    throw Error(Errc::model_validation, "this operation needs a qmdp model");
}

const Symbols& symbols_of(const ModelFile& file) {
    return std::visit([](const auto& f) -> const Symbols& { return f.symbols; }, file);
}

py::dict by_name(const std::vector<std::string>& names, const ValueFunction& values) {
    py::dict out;
    for (std::size_t i = 0; i < names.size(); ++i) out[py::str(names[i])] = values[i];
    return out;
}

py::dict policy_by_name(const std::vector<std::string>& names, const Symbols& s, const Policy& mu) {
    py::dict out;
    for (std::size_t i = 0; i < names.size(); ++i) out[py::str(names[i])] = s.controls[mu[i]];
    return out;
}

const char* stop_name(StopReason s) {
    switch (s) {
        case StopReason::tolerance: return "tolerance";
        case StopReason::exact: return "exact";
        case StopReason::max_iter: return "max-iter";
    }
    return "?";
}

void put_summary(py::dict& out, const ViResult& vi) {
    out["iterations"] = vi.iterations;
    out["residual"] = vi.residual;
    out["rho"] = vi.rho;
    out["gamma"] = vi.gamma;
    out["bound"] = suboptimality_bound(vi.gamma, vi.residual);
    out["stop"] = stop_name(vi.stop);
}

py::dict solve(const Model& model, const Rational& tol, int max_iter) {
    const QmdpFile& f = as_qmdp(model.file);
    const CompiledMdp mdp = compile(resolve(f.model));
    ViResult vi = value_iterate(mdp, zero_values(mdp.size(), mdp.max_degree), tol, max_iter);
    py::dict out;
    out["values"] = by_name(f.symbols.states, vi.values);
    out["policy"] = policy_by_name(f.symbols.states, f.symbols, greedy_policy(mdp, vi.values));
    put_summary(out, vi);
    return out;
}

py::dict solve_belief(const Model& model, const std::string& init, const Rational& tol, int max_iter,
                      std::size_t max_beliefs) {
    const auto* f = std::get_if<QpomdpFile>(&model.file);
    if (!f) throw Error(Errc::model_validation, "this operation needs a qpomdp model");
    BeliefSpaceIndex index = reach(f->model, parse_belief(f->symbols, init), max_beliefs);
    BeliefViResult r = value_iterate_belief(f->model, index, tol, max_iter);
    const auto names = belief_names(index);
    py::dict beliefs;
    for (std::size_t b = 0; b < names.size(); ++b) beliefs[py::str(names[b])] = serialize_belief(f->symbols, index.beliefs[b]);
    py::dict out;
    out["beliefs"] = beliefs;
    out["clamped"] = index.clamped;
    out["values"] = by_name(names, r.vi.values);
    out["policy"] = policy_by_name(names, f->symbols, r.policy);
    put_summary(out, r.vi);
    return out;
}

py::dict agree(const Model& model, const Rational& tol, int max_halvings, int max_iter) {
    const QmdpFile& f = as_qmdp(model.file);
    AgreementResult r = find_agreement_epsilon(f.model, tol, max_halvings, max_iter);
    py::dict out;
    out["epsilon"] = r.eps0;
    out["halvings"] = r.halvings;
    out["agreed"] = r.agreed;
    out["qualitative_policy"] = policy_by_name(f.symbols.states, f.symbols, r.qualitative_policy);
    out["numeric_policy"] =
        r.numeric_policy.empty() ? py::object(py::none()) : py::object(policy_by_name(f.symbols.states, f.symbols, r.numeric_policy));
    return out;
}

py::dict oom(const Model& model) {
    const QmdpFile& f = as_qmdp(model.file);
    std::vector<Rank> flat = oom_bellman_fixpoint(resolve(f.model), f.kappa_cap);
    py::dict out;
    for (std::size_t i = 0; i < flat.size(); ++i) out[py::str(f.symbols.states[i])] = rank_to_py(flat[i]);
    return out;
}

py::list embed_ranking(const std::vector<py::object>& ranks, int max_degree) {
    std::vector<Rank> k;
    for (const auto& r : ranks) {
        if (py::isinstance<py::float_>(r) && std::isinf(r.cast<double>()))
            k.push_back(Rank::infinity());
        else
            k.push_back(r.cast<int>());
    }
    py::list out;
    for (const Series& s : embed(KappaRanking(std::move(k)), max_degree).masses) out.append(s);
    return out;
}

}  // namespace
}  // namespace qmdp

PYBIND11_MODULE(_core, m) {
    using namespace qmdp;
    m.doc() = "Exact qualitative MDP and POMDP solver";

    // Instances carry the kebab-case error code in `code`.
    static PyObject* error = PyErr_NewException("qmdp._core.Error", PyExc_ValueError, nullptr);
    m.attr("Error") = py::handle(error);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const std::string code(errc_name(e.code()));
            py::object exc = py::handle(error)(code + ": " + e.what());
            exc.attr("code") = code;
            PyErr_SetObject(error, exc.ptr());
        }
    });

    py::class_<Series>(m, "Series")
        .def(py::init([](const std::string& text, int max_degree) { return parse_series(text, max_degree); }),
             py::arg("text"), py::arg("max_degree") = kDefaultMaxDegree)
        .def_property_readonly("max_degree", &Series::max_degree)
        .def_property_readonly("order", [](const Series& s) { return rank_to_py(s.order()); })
        .def("coeff", &Series::coeff)
        .def("terms", [](const Series& s) { return std::vector<Series::Term>(s.terms().begin(), s.terms().end()); })
        .def("evaluate", [](const Series& s, const Rational& eps) { return evaluate(s, eps); })
        .def("norm", [](const Series& s, const Rational& rho) { return norm(s, rho); })
        .def("inverse", [](const Series& s) { return inverse(s); })
        .def("__str__", [](const Series& s) { return to_string(s); })
        .def("__repr__", [](const Series& s) { return "Series('" + to_string(s) + "')"; })
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self * py::self)
        .def(-py::self)
        .def(py::self == py::self)
        .def("__lt__", [](const Series& a, const Series& b) { return compare(a, b) < 0; })
        .def("__le__", [](const Series& a, const Series& b) { return compare(a, b) <= 0; })
        .def("__gt__", [](const Series& a, const Series& b) { return compare(a, b) > 0; })
        .def("__ge__", [](const Series& a, const Series& b) { return compare(a, b) >= 0; });

    py::class_<Model>(m, "Model")
        .def_property_readonly("kind",
                               [](const Model& x) { return std::holds_alternative<QmdpFile>(x.file) ? "qmdp" : "qpomdp"; })
        .def_property_readonly("states", [](const Model& x) { return symbols_of(x.file).states; })
        .def_property_readonly("controls", [](const Model& x) { return symbols_of(x.file).controls; })
        .def_property_readonly("observations", [](const Model& x) { return symbols_of(x.file).observations; })
        .def("__str__", [](const Model& x) { return serialize(x.file); });

    m.def("parse", [](const std::string& text) { return Model{parse_model(text)}; }, py::arg("text"));
    m.def("load", [](const std::string& path) { return Model{load_model(path)}; }, py::arg("path"));
    m.def("embed", &embed_ranking, py::arg("ranks"), py::arg("max_degree") = kDefaultMaxDegree);
    m.def("solve", &solve, py::arg("model"), py::arg("tol") = default_tolerance(), py::arg("max_iter") = 10000);
    m.def("solve_belief", &solve_belief, py::arg("model"), py::arg("init"), py::arg("tol") = default_tolerance(),
          py::arg("max_iter") = 10000, py::arg("max_beliefs") = 10000);
    m.def("agree", &agree, py::arg("model"), py::arg("tol") = default_tolerance(), py::arg("max_halvings") = 20,
          py::arg("max_iter") = 100000);
    m.def("oom", &oom, py::arg("model"));
}
