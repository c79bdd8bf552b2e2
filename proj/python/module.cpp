#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "io.hpp"
#include "tracefactor/polyimage.hpp"
#include "tracefactor/quaternion.hpp"

// Python bindings over the JSON document layer: matrices and certificates
// travel as JSON strings, so the Python surface matches the CLI formats
// exactly.

namespace py = pybind11;

namespace {

using tracefactor::io::json;

std::string factor_json(const std::string& kind, const std::string& matrix_doc,
                        std::uint64_t seed) {
    auto input = tracefactor::io::parse_matrix(json::parse(matrix_doc));
    return tracefactor::io::make_certificate(kind, input, seed).dump();
}

py::dict verify_json(const std::string& cert_doc) {
    auto report = tracefactor::io::verify_certificate(json::parse(cert_doc));
    py::dict out;
    out["pass"] = report.pass;
    out["checks"] = report.checks;
    out["failures"] = report.failures;
    return out;
}

py::dict oracle(const std::string& suite) {
    auto rep = tracefactor::io::run_oracle(suite);
    py::dict out;
    out["pass"] = rep.pass;
    out["summary"] = rep.summary;
    return out;
}

std::string semisimple_json(const std::vector<std::string>& component_docs, std::uint64_t seed) {
    std::vector<tracefactor::io::MatrixDocument> comps;
    for (const auto& doc : component_docs)
        comps.push_back(tracefactor::io::parse_matrix(json::parse(doc)));
    return tracefactor::io::semisimple_decompose(comps, seed).dump();
}

py::tuple pure_product(double r, double i, double j, double k) {
    auto [q1, q2] = tracefactor::quaternion_pure_product(tracefactor::QuaternionF(r, i, j, k));
    auto tup = [](const tracefactor::QuaternionF& q) {
        return py::make_tuple(q.r(), q.i(), q.j(), q.k());
    };
    return py::make_tuple(tup(q1), tup(q2));
}

}  // namespace

PYBIND11_MODULE(_tracefactor, m) {
    m.doc() = "certified traceless and semi-traceless matrix factorizations";
    m.def("factor", &factor_json, py::arg("kind"), py::arg("matrix_json"), py::arg("seed") = 1,
          "factor a matrix document; returns the certificate as a JSON string");
    m.def("verify", &verify_json, py::arg("certificate_json"),
          "re-check every claim of a certificate");
    m.def("oracle", &oracle, py::arg("suite"), "run an exhaustive finite-field suite");
    m.def("semisimple", &semisimple_json, py::arg("component_matrix_jsons"), py::arg("seed") = 1,
          "componentwise generalized-commutator decomposition");
    m.def("quaternion_pure_product", &pure_product, py::arg("r"), py::arg("i"), py::arg("j"),
          py::arg("k"), "split a quaternion into a product of two pure quaternions");
    m.def("bounds", [] {
        py::dict out;
        for (const auto& [k, b] : tracefactor::io::factor_bounds()) out[py::str(k)] = b;
        return out;
    });
}
