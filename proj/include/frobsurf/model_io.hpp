#pragma once
// Surface models from TOML files; verdicts to JSON and terminal text.
//
// Model files:
//   name = "fermat-cubic"        # optional label
//   kind = "hypersurface"        # hypersurface | complete_intersection | blowup
//   p = 7                        # characteristic
//   k = 1                        # optional extension degree (default 1)
//   K2 = 3                       # anticanonical degree
//   forms = ["x^3+y^3+z^3+w^3"]  # equation kinds; ambient fixed by K2
//
// Blowup models replace `forms` with `base = "P2"` and one [[node]] block
// per point in blowup order:
//   [[node]]
//   point = ["1", "0", "0"]      # roots: projective coordinates
//   [[node]]
//   parent = 1                   # children: 1-based index of the parent
//   dir = ["1", "2"]             # direction in the parent's frame
// Field elements are written as integers or polynomials in t ("t+1").

#include <string>

#include "frobsurf/surface.hpp"
#include "frobsurf/tomlmini.hpp"

namespace frobsurf {

SurfaceModel model_from_toml(const toml::Value& root);
SurfaceModel model_from_text(const std::string& text);
SurfaceModel model_from_file(const std::string& path);

// Canonical one-line serialization of the defining data; the model hash of
// the reports is FNV-1a over it.
std::string canonical_model_string(const SurfaceModel& m);
uint64_t model_hash(const SurfaceModel& m);

// JSON documents (schema "frobsurf-report/1" / "frobsurf-sample/1"):
// alphabetically ordered keys, two-space indent, trailing newline; repeated
// runs with the same inputs are byte-identical (timings stay opt-in for
// that reason).
std::string check_report_json(const SurfaceModel& m, const CheckReport& rep,
                              bool include_timings = false);
// The certificate object alone (serialized JSON), as embedded in reports.
std::string certificate_json_text(const BoundaryCertificate& c);
// "F_p" / "F_p^k" as printed in reports.
std::string field_label(uint32_t p, int k);
std::string sample_summary_json(const SampleSummary& s, uint64_t seed,
                                const std::string& note = "");

// Terminal renderings of the same data.
std::string check_report_text(const SurfaceModel& m, const CheckReport& rep);
std::string sample_summary_text(const SampleSummary& s);

}  // namespace frobsurf
