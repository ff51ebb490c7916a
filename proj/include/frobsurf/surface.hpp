#pragma once
// Anticanonical surface models and the combined Frobenius verdicts.
//
// Degrees K^2 <= 4 are presented by equations: a sextic in P(1,1,2,3), a
// quartic in P(1,1,1,2), a cubic in P^3, or a pencil of two quadrics in P^4.
// Degrees K^2 >= 5 are presented as blowup point trees (blowup.hpp).  This
// module owns model validation, the quasi-smoothness scan, fixed sentinel
// models, randomized model sampling, and the per-model verdict pipeline.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frobsurf/blowup.hpp"
#include "frobsurf/fedder.hpp"
#include "frobsurf/lattice.hpp"
#include "frobsurf/poly.hpp"

namespace frobsurf {

enum class ModelKind { Hypersurface, CompleteIntersection, Blowup };

struct SurfaceModel {
    ModelKind kind = ModelKind::Hypersurface;
    int K2 = 3;
    std::vector<Poly> forms;        // defining forms (empty for blowup models)
    std::optional<PointTree> tree;  // blowup models only
    std::string name;

    const Fq& field() const;  // field of the forms / the tree
    uint32_t p() const { return field().p(); }
};

// Ambient of the equation presentation: "P(1,1,2,3)", "P(1,1,1,2)", "P3",
// "P4".  RefusalError for degrees without one.
const std::string& equation_ambient(int K2);
// Degree of the defining form(s): 6, 4, 3, and 2 for each P4 quadric.
long equation_degree(int K2);

// Well-formedness of the anticanonical presentation (RefusalError otherwise):
// right ambient and homogeneous degree; the z^3 / w^2 coefficients that keep
// the surface away from the singular points of the weighted ambients must be
// nonzero; the two quadrics must span a pencil; blowup trees must validate.
void validate_model(const SurfaceModel& m);

struct ScanReport {
    int kmax_requested = 1;
    int k_checked = 0;      // Jacobian criterion ran over F_{p^k} for k <= this
    bool budget_capped = false;  // deeper extensions skipped by the point budget
    long points_on_x = 0;        // points of X over the largest field scanned
    std::vector<std::string> singular_points;  // "[..:..] over F_{p^k}", first few
    long singular_count = 0;
    bool singular_found() const { return singular_count > 0; }
};

// Quasi-smoothness screen: enumerate the ambient points over F_{p^k} for
// k = 1..kmax and run the Jacobian criterion on the affine cone at every
// point of X.  Extension depth is capped so the total number of points stays
// under an internal budget (k = 1 always runs).  An empty singular list
// screens the model smooth over the fields scanned; it is not a smoothness
// proof.
ScanReport scan_singular(const SurfaceModel& m, int kmax);

// Fixed smooth non-F-split witnesses: the Fermat cubic (K2=3, p=2),
// x^4+y^4+z^4+w^2 (K2=2, p=3), x^6+y^6+z^3+w^2 (K2=1, p=5).
bool has_sentinel(int K2, uint32_t p);
SurfaceModel sentinel_model(int K2, uint32_t p);  // RefusalError if none on file

// Random anticanonical model of degree K2 over F: uniform coefficients with
// the distinguished z^3 / w^2 coefficients forced nonzero (K2 <= 4), or a
// random weak del Pezzo point tree with a uniformly drawn chain partition of
// 9-K2 points (5 <= K2 <= 8).
SurfaceModel random_model(int K2, const Fq& F, uint64_t seed);

struct CheckOptions {
    int emax = 3;      // Frobenius level bound of the F-regularity search
    int kmax = 3;      // extension depth of the smoothness scan
    int retries = 64;  // certificate search retries (blowup models)
    uint64_t seed = 0;
    bool collect_timings = false;
};

struct CheckReport {
    std::string kind;  // "hypersurface" / "complete_intersection" / "blowup"
    int K2 = 0;
    uint32_t p = 0;
    int field_k = 1;
    std::optional<bool> f_pure;   // Fedder at level 1 (equation models)
    std::optional<bool> f_split;  // equation models: = f_pure; blowup: certificate
    std::string witness;          // surviving witness monomial with coefficient
    // F-regularity status: "guaranteed", "established_by_search",
    // "counterexample_possible_cell" or "unknown_at_bound".
    std::string gfr;
    int gfr_level = 0;  // level e of a search certificate, or the bound tried
    std::string gfr_test_element;
    std::string gfr_witness;
    std::string gfr_note;
    std::string singularities;  // ADE diagnosis (blowup) or scan summary
    ScanReport scan;            // equation models only
    std::optional<BoundaryCertificate> certificate;  // blowup models only
    std::vector<std::pair<std::string, double>> timings;  // seconds, opt-in
};

// Full verdict pipeline for one model: validate, scan / diagnose, decide
// F-splitting, compose the F-regularity status.
CheckReport check_model(const SurfaceModel& m, const CheckOptions& opt = {});

struct SampleSummary {
    int K2 = 0;
    uint32_t p = 0;
    int field_k = 1;
    int requested = 0;
    int screened = 0;   // models that passed the smoothness screen
    int attempts = 0;   // random models drawn, screen rejections included
    int fsplit = 0;     // F-split among the screened (K2 <= 4)
    int nonsplit = 0;
    int certified = 0;  // blowup cells: boundary certificates found
    std::vector<std::string> counterexamples;  // forms of non-split models
    bool attempt_budget_hit = false;  // quota not reached within the cap
    bool sentinel_included = false;
    std::string sentinel_name;
    std::optional<bool> sentinel_fsplit;
};

// Sample n random models in the cell (K2, char of F), screen them
// (K2 <= 4: quasi-smoothness scan; K2 >= 5: weak del Pezzo by construction)
// and test F-splitting / certificate existence.  Trial i draws from the
// substream (seed, i) and aggregation runs in trial order, so the summary is
// reproducible for any `jobs`.  `include_sentinel` additionally runs the
// cell's fixed sentinel (reported separately, not screened or counted).
SampleSummary sample_cell(int K2, const Fq& F, int n, uint64_t seed,
                          const CheckOptions& opt = {},
                          bool include_sentinel = false, int jobs = 1);

}  // namespace frobsurf
