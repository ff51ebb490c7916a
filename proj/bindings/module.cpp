// Python bindings: a thin front end over the core operations.  Structured
// results come back as JSON strings (the same documents the CLI prints), so
// the Python side stays schema-stable and free of mirrored struct types.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"

#include "frobsurf/blowup.hpp"
#include "frobsurf/fedder.hpp"
#include "frobsurf/lattice.hpp"
#include "frobsurf/model_io.hpp"
#include "frobsurf/poly.hpp"
#include "frobsurf/surface.hpp"

namespace py = pybind11;
using namespace frobsurf;
using nlohmann::json;

namespace {

Fq make_field(uint32_t p, int k) { return k == 1 ? Fq::prime(p) : Fq::ext(p, k); }

std::vector<Poly> parse_forms(const std::string& ambient, const Fq& F,
                              const std::vector<std::string>& forms) {
    const Ambient& amb = Ambient::by_name(ambient);
    std::vector<Poly> out;
    for (const std::string& t : forms) out.push_back(Poly::parse(amb, F, t));
    return out;
}

CheckOptions make_options(int emax, int kmax, int retries, uint64_t seed) {
    CheckOptions opt;
    opt.emax = emax;
    opt.kmax = kmax;
    opt.retries = retries;
    opt.seed = seed;
    return opt;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Frobenius splitting and global F-regularity of weak del Pezzo surface "
        "models over small prime fields";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
    py::register_exception<RefusalError>(m, "RefusalError", PyExc_RuntimeError);

    m.def(
        "check_text",
        [](const std::string& text, int emax, int kmax, int retries, uint64_t seed) {
            SurfaceModel mm = model_from_text(text);
            return check_report_json(mm, check_model(mm, make_options(emax, kmax, retries, seed)));
        },
        py::arg("text"), py::arg("emax") = 3, py::arg("kmax") = 3, py::arg("retries") = 64,
        py::arg("seed") = 0,
        "Verdict report (JSON string) for a model given as TOML text.");

    m.def(
        "check_file",
        [](const std::string& path, int emax, int kmax, int retries, uint64_t seed) {
            SurfaceModel mm = model_from_file(path);
            return check_report_json(mm, check_model(mm, make_options(emax, kmax, retries, seed)));
        },
        py::arg("path"), py::arg("emax") = 3, py::arg("kmax") = 3, py::arg("retries") = 64,
        py::arg("seed") = 0,
        "Verdict report (JSON string) for a TOML model file.");

    m.def(
        "sample",
        [](int k2, uint32_t p, int n, uint64_t seed, int k, int kmax, int retries,
           bool sentinel, int jobs) {
            CheckOptions opt;
            opt.kmax = kmax;
            opt.retries = retries;
            SampleSummary s = sample_cell(k2, make_field(p, k), n, seed, opt, sentinel, jobs);
            return sample_summary_json(s, seed);
        },
        py::arg("k2"), py::arg("p"), py::arg("n") = 20, py::arg("seed") = 0,
        py::arg("k") = 1, py::arg("kmax") = 2, py::arg("retries") = 64,
        py::arg("sentinel") = false, py::arg("jobs") = 1,
        "Sample summary (JSON string) for one (K^2, p) cell.");

    m.def(
        "fsplit",
        [](const std::string& ambient, uint32_t p, const std::vector<std::string>& forms,
           int e, int k) {
            FedderResult r = fedder_fpure(parse_forms(ambient, make_field(p, k), forms), e);
            return py::make_tuple(r.split, r.witness, r.witness_coeff);
        },
        py::arg("ambient"), py::arg("p"), py::arg("forms"), py::arg("e") = 1,
        py::arg("k") = 1,
        "Fedder test on raw forms; returns (split, witness, witness_coefficient).");

    m.def(
        "gfr_search",
        [](const std::string& ambient, uint32_t p, const std::vector<std::string>& forms,
           int emax, int k) {
            GfrSearchResult r =
                gfr_bounded_search(parse_forms(ambient, make_field(p, k), forms), emax);
            return py::make_tuple(r.established, r.e, r.test_element, r.witness);
        },
        py::arg("ambient"), py::arg("p"), py::arg("forms"), py::arg("emax") = 3,
        py::arg("k") = 1,
        "Bounded strong-F-regularity search; returns (established, level, "
        "test_element, witness).  Exhaustion proves nothing.");

    m.def(
        "lattice_counts",
        [](int n, bool weyl) {
            if (n < 1 || n > 8)
                throw ParseError("lattice rank n must be between 1 and 8, got " +
                                 std::to_string(n));
            std::vector<PicClass> m1 = weyl ? minus1_classes_weyl(n) : minus1_classes(n);
            std::vector<PicClass> rt = weyl ? root_classes_weyl(n) : root_classes(n);
            return py::make_tuple(m1.size(), rt.size(),
                                  classify_root_subsystem(n, rt).name());
        },
        py::arg("n"), py::arg("weyl") = false,
        "Counts for the blown-up plane lattice: ((-1)-classes, roots, system).");

    m.def(
        "exceptional_cells",
        [](const std::string& mode) {
            if (mode == "canonical") return canonical_gfr_exceptions();
            if (mode == "smooth") return smooth_gfr_exceptions();
            throw ParseError("mode must be \"canonical\" or \"smooth\"");
        },
        py::arg("mode") = "canonical",
        "The (K^2, p) cells containing surfaces that are not globally F-regular.");

    m.def(
        "certify_text",
        [](const std::string& text, int retries, uint64_t seed) {
            SurfaceModel mm = model_from_text(text);
            if (mm.kind != ModelKind::Blowup)
                throw RefusalError("certificate search takes a blowup model");
            validate_model(mm);
            std::optional<BoundaryCertificate> cert =
                find_boundary_certificate(*mm.tree, retries, seed);
            json j;
            j["found"] = (bool)cert;
            if (cert) {
                j["revalidated"] = validate_certificate(*mm.tree, *cert);
                j["certificate"] = json::parse(certificate_json_text(*cert));
            }
            return j.dump(2) + "\n";
        },
        py::arg("text"), py::arg("retries") = 64, py::arg("seed") = 0,
        "Boundary certificate search (JSON string) for a blowup model in TOML text.");

    m.def(
        "model_hash_text",
        [](const std::string& text) { return hex64(model_hash(model_from_text(text))); },
        py::arg("text"), "Stable content hash of a TOML model.");
}
