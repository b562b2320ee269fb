// Python bindings: build/query/save/load for every scheme plus the
// numerical helpers (lower bound, threshold vectors, bucket curves).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "kphf/bench.hpp"
#include "kphf/curves.hpp"
#include "kphf/keygen.hpp"
#include "kphf/phf.hpp"
#include "kphf/thresholds.hpp"

namespace py = pybind11;
using namespace kphf;

namespace {

std::vector<Key128> to_keys(const std::vector<std::string>& raw) {
    std::vector<Key128> keys(raw.size());
    for (size_t i = 0; i < raw.size(); i++) keys[i] = key_from_bytes(raw[i]);
    return keys;
}

class PyPhf {
public:
    explicit PyPhf(std::unique_ptr<MkPhf> f) : f_(std::move(f)) {}

    static PyPhf build(const std::vector<std::string>& keys, const std::string& scheme,
                       uint64_t k, const std::string& gamma, uint32_t t,
                       const std::string& variant, double lambda_, const std::string& encoding,
                       uint32_t ell, uint64_t bucket_size, uint64_t a, uint64_t seed,
                       uint32_t max_layers) {
        BuildOptions opt;
        opt.scheme = scheme;
        opt.k = k;
        opt.gamma = gamma;
        opt.t = t;
        opt.variant = variant;
        opt.lambda = lambda_;
        opt.encoding = encoding;
        opt.ell = ell;
        opt.bucket_size = bucket_size;
        opt.a = a;
        opt.seed = seed;
        opt.max_layers = max_layers;
        return PyPhf(build_phf(to_keys(keys), opt));
    }

    uint64_t bin(const std::string& key) const { return (*f_)(key_from_bytes(key)); }

    std::vector<uint64_t> bins(const std::vector<std::string>& keys) const {
        std::vector<uint64_t> out(keys.size());
        for (size_t i = 0; i < keys.size(); i++) out[i] = (*f_)(key_from_bytes(keys[i]));
        return out;
    }

    bool verify(const std::vector<std::string>& keys) const {
        return verify_phf(*f_, to_keys(keys)).ok;
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("kphf: cannot open '" + path + "' for writing");
        Writer w(out);
        f_->save(w);
    }

    static PyPhf load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("kphf: cannot open '" + path + "'");
        Reader r(in);
        return PyPhf(load_phf(r));
    }

    uint64_t num_keys() const { return f_->num_keys(); }
    uint64_t num_bins() const { return f_->num_bins(); }
    uint64_t k() const { return f_->bin_capacity(); }
    std::string scheme() const { return f_->scheme_name(); }
    std::string config() const { return f_->describe(); }
    uint64_t bits() const { return serialized_bits(*f_); }

private:
    std::unique_ptr<MkPhf> f_;
};

}  // namespace

PYBIND11_MODULE(kphf, m) {
    m.doc() = "minimal k-perfect hash functions: threshold bumping, bucket "
              "placement, recursive splitting, partitioned counting";

    py::class_<PyPhf>(m, "Phf")
        .def_static("build", &PyPhf::build, py::arg("keys"), py::kw_only(),
                    py::arg("scheme") = "threshold", py::arg("k") = 8, py::arg("gamma") = "",
                    py::arg("t") = 0, py::arg("variant") = "plain", py::arg("lambda_") = 0.0,
                    py::arg("encoding") = "rice", py::arg("ell") = 2,
                    py::arg("bucket_size") = 0, py::arg("a") = 0,
                    py::arg("seed") = 0x6b706866, py::arg("max_layers") = 64,
                    "Build a minimal k-perfect hash function over distinct string keys.")
        .def_static("load", &PyPhf::load, py::arg("path"))
        .def("__call__", &PyPhf::bin, py::arg("key"))
        .def("bins", &PyPhf::bins, py::arg("keys"))
        .def("verify", &PyPhf::verify, py::arg("keys"))
        .def("save", &PyPhf::save, py::arg("path"))
        .def_property_readonly("num_keys", &PyPhf::num_keys)
        .def_property_readonly("num_bins", &PyPhf::num_bins)
        .def_property_readonly("k", &PyPhf::k)
        .def_property_readonly("scheme", &PyPhf::scheme)
        .def_property_readonly("config", &PyPhf::config)
        .def_property_readonly("bits", &PyPhf::bits)
        .def("__repr__", [](const PyPhf& f) {
            return "<kphf.Phf " + f.scheme() + " n=" + std::to_string(f.num_keys()) +
                   " k=" + std::to_string(f.k()) + ">";
        });

    m.def("lower_bound_bits", &lower_bound_bits, py::arg("k"),
          "Entropy lower bound for a minimal k-perfect hash function, bits per key.");
    m.def("optimal_thresholds", &optimal_thresholds, py::arg("k"), py::arg("gamma"),
          py::arg("t"));
    m.def("asymptotic_thresholds", &asymptotic_thresholds, py::arg("k"), py::arg("gamma"),
          py::arg("t"));
    m.def("expected_empty_slots", &expected_empty_slots, py::arg("k"), py::arg("gamma"),
          py::arg("thresholds"));
    m.def(
        "bucket_curves",
        [](uint64_t k, uint32_t grid) {
            CurveTable c = bucket_curves(k, grid);
            return py::make_tuple(c.xs, c.pk, c.beta);
        },
        py::arg("k"), py::arg("grid") = 4096,
        "Returns (xs, p_k(xs), beta_k(xs)) on a uniform grid.");
    m.def("gen_keys", &gen_keys, py::arg("n"), py::arg("seed"),
          "Deterministic distinct alphanumeric test keys, lengths 10..50.");
}
