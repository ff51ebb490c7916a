// frobsurf — batch front end for the Frobenius-splitting toolkit.
//
// Subcommands
//   check MODEL.toml      full verdict report for one surface model
//   sample                random models in one (K^2, p) cell
//   table                 classification grid plus per-cell sample summaries
//   lattice N|TREE.toml   Picard lattice counts / point-tree diagnosis
//   certify TREE.toml     boundary certificate search for a point tree
//
// Exit codes: 0 success, 2 unreadable input, 3 budget exceeded, 4 refused.
// Identical invocations (seed included) print byte-identical reports; the
// only non-reproducible output is behind the opt-in --timings flag.

#include <cctype>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "frobsurf/blowup.hpp"
#include "frobsurf/fedder.hpp"
#include "frobsurf/lattice.hpp"
#include "frobsurf/model_io.hpp"
#include "frobsurf/poly.hpp"
#include "frobsurf/surface.hpp"

using namespace frobsurf;
using nlohmann::json;

namespace {

void require_prime(long long p) {
    bool ok = p >= 2;
    for (long long d = 2; ok && d * d <= p; ++d)
        if (p % d == 0) ok = false;
    if (!ok || p > 97)
        throw ParseError("characteristic must be a prime at most 97, got " +
                         std::to_string(p));
}

Fq make_field(uint32_t p, int k) { return k == 1 ? Fq::prime(p) : Fq::ext(p, k); }

void apply_cap(uint64_t cap) {
    if (cap > 0) set_poly_term_cap(cap);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string tri(const std::optional<bool>& v) {
    if (!v) return "";
    return *v ? "yes" : "no";
}

// ------------------------------------------------------------------- check

struct CheckArgs {
    std::string path;
    CheckOptions opt;
    std::string format = "text";
    uint64_t cap = 0;
};

int run_check(const CheckArgs& a) {
    apply_cap(a.cap);
    SurfaceModel m = model_from_file(a.path);
    CheckReport rep = check_model(m, a.opt);
    if (a.format == "json") {
        std::cout << check_report_json(m, rep, a.opt.collect_timings);
    } else if (a.format == "csv") {
        std::cout << "key,value\n";
        auto row = [](const std::string& k, const std::string& v) {
            std::cout << k << "," << csv_escape(v) << "\n";
        };
        row("model_hash", hex64(model_hash(m)));
        row("name", m.name);
        row("kind", rep.kind);
        row("p", std::to_string(rep.p));
        row("field_degree", std::to_string(rep.field_k));
        row("K2", std::to_string(rep.K2));
        row("f_pure", tri(rep.f_pure));
        row("f_split", tri(rep.f_split));
        row("witness", rep.witness);
        row("gfr_status", rep.gfr);
        row("gfr_level", std::to_string(rep.gfr_level));
        row("gfr_test_element", rep.gfr_test_element);
        row("gfr_note", rep.gfr_note);
        row("singularities", rep.singularities);
    } else {
        std::cout << check_report_text(m, rep);
    }
    return 0;
}

// ------------------------------------------------------------------- sample

struct SampleArgs {
    int K2 = 3;
    uint32_t p = 2;
    int k = 1;
    int n = 20;
    uint64_t seed = 0;
    CheckOptions opt;
    int jobs = 1;
    bool no_sentinel = false;
    std::string format = "text";
    uint64_t cap = 0;
};

int run_sample(const SampleArgs& a) {
    apply_cap(a.cap);
    require_prime(a.p);
    Fq F = make_field(a.p, a.k);
    // Known counterexample cells always surface their fixed sentinel unless
    // explicitly muted.
    bool sentinel = !a.no_sentinel && has_sentinel(a.K2, a.p);
    SampleSummary s = sample_cell(a.K2, F, a.n, a.seed, a.opt, sentinel, a.jobs);
    if (a.format == "json") {
        std::cout << sample_summary_json(s, a.seed);
    } else if (a.format == "csv") {
        std::cout << "K2,p,field_degree,seed,requested,screened,attempts,f_split,"
                     "not_f_split,certified,attempt_budget_hit,sentinel,sentinel_f_split\n";
        std::cout << s.K2 << "," << s.p << "," << s.field_k << "," << a.seed << ","
                  << s.requested << "," << s.screened << "," << s.attempts << ","
                  << s.fsplit << "," << s.nonsplit << "," << s.certified << ","
                  << (s.attempt_budget_hit ? "yes" : "no") << ","
                  << csv_escape(s.sentinel_name) << "," << tri(s.sentinel_fsplit) << "\n";
        for (const std::string& c : s.counterexamples)
            std::cout << "counterexample," << csv_escape(c) << "\n";
    } else {
        std::cout << sample_summary_text(s);
    }
    return 0;
}

// -------------------------------------------------------------------- table

struct TableArgs {
    std::vector<long long> primes{2, 3, 5, 7};
    bool smooth = false;
    bool oracle_only = false;
    int n = 4;
    uint64_t seed = 0;
    CheckOptions opt;
    int jobs = 1;
    std::string format = "text";
    uint64_t cap = 0;
};

int run_table(const TableArgs& a) {
    apply_cap(a.cap);
    for (long long p : a.primes) require_prime(p);

    auto exceptional = [&](int K2, uint32_t p) {
        return a.smooth ? smooth_exceptional(K2, p) : canonical_exceptional(K2, p);
    };

    std::vector<SampleSummary> emp;
    if (!a.oracle_only) {
        for (int K2 = 1; K2 <= 8; ++K2)
            for (long long p : a.primes) {
                Fq F = Fq::prime((uint32_t)p);
                emp.push_back(sample_cell(K2, F, a.n,
                                          substream(a.seed, (uint64_t)K2 * 128 + p),
                                          a.opt, false, a.jobs));
            }
    }

    if (a.format == "json") {
        json j;
        j["schema"] = "frobsurf-table/1";
        j["mode"] = a.smooth ? "smooth" : "canonical";
        j["primes"] = a.primes;
        json cells = json::array();
        for (int K2 = 9; K2 >= 1; --K2)
            for (long long p : a.primes) {
                json c;
                c["K2"] = K2;
                c["p"] = p;
                c["exceptional"] = exceptional(K2, (uint32_t)p);
                cells.push_back(c);
            }
        j["cells"] = cells;
        if (!a.oracle_only) {
            json es = json::array();
            for (const SampleSummary& s : emp) {
                json e;
                e["K2"] = s.K2;
                e["p"] = s.p;
                e["requested"] = s.requested;
                e["screened"] = s.screened;
                e["attempts"] = s.attempts;
                e["attempt_budget_hit"] = s.attempt_budget_hit;
                if (s.K2 >= 5)
                    e["certified"] = s.certified;
                else {
                    e["f_split"] = s.fsplit;
                    e["not_f_split"] = s.nonsplit;
                }
                es.push_back(e);
            }
            j["empirical"] = es;
        }
        std::cout << j.dump(2) << "\n";
    } else if (a.format == "csv") {
        std::cout << "K2,p,exceptional,screened,attempts,f_split,not_f_split,certified\n";
        for (int K2 = 9; K2 >= 1; --K2)
            for (size_t i = 0; i < a.primes.size(); ++i) {
                long long p = a.primes[i];
                std::cout << K2 << "," << p << ","
                          << (exceptional(K2, (uint32_t)p) ? "yes" : "no");
                const SampleSummary* s = nullptr;
                if (!a.oracle_only && K2 <= 8)
                    s = &emp[(size_t)(K2 - 1) * a.primes.size() + i];
                if (s) {
                    std::cout << "," << s->screened << "," << s->attempts << ",";
                    if (s->K2 <= 4)
                        std::cout << s->fsplit << "," << s->nonsplit << ",";
                    else
                        std::cout << ",," << s->certified;
                } else {
                    std::cout << ",,,,,";
                }
                std::cout << "\n";
            }
    } else {
        std::cout << "global F-regularity by degree and characteristic — "
                  << (a.smooth ? "smooth" : "canonical") << " surfaces\n";
        std::cout << "(X marks an exceptional cell: it contains surfaces that are "
                     "not globally F-regular)\n\n";
        std::cout << "        ";
        for (long long p : a.primes)
            std::cout << std::setw(5) << ("p=" + std::to_string(p));
        std::cout << "\n";
        for (int K2 = 9; K2 >= 1; --K2) {
            std::cout << "  K^2=" << K2 << " ";
            for (long long p : a.primes)
                std::cout << std::setw(5) << (exceptional(K2, (uint32_t)p) ? "X" : ".");
            std::cout << "\n";
        }
        if (!a.oracle_only) {
            std::cout << "\nempirical samples: n=" << a.n << " per cell, seed " << a.seed
                      << "\n";
            for (const SampleSummary& s : emp) {
                std::cout << "  K^2=" << s.K2 << " " << std::setw(4)
                          << field_label(s.p, s.field_k) << ": screened " << s.screened
                          << " (" << s.attempts << " draws)";
                if (s.K2 <= 4)
                    std::cout << ", F-split " << s.fsplit << ", non-split " << s.nonsplit;
                else
                    std::cout << ", certificates " << s.certified << "/" << s.screened;
                if (s.attempt_budget_hit) std::cout << " [attempt budget hit]";
                std::cout << "\n";
            }
        }
    }
    return 0;
}

// ------------------------------------------------------------------ lattice

struct LatticeArgs {
    std::string target;
    bool weyl = false;
    std::string format = "text";
};

int run_lattice_counts(int n, const LatticeArgs& a) {
    if (n < 1 || n > 8)
        throw ParseError("lattice rank n must be between 1 and 8, got " +
                         std::to_string(n));
    std::vector<PicClass> m1 = a.weyl ? minus1_classes_weyl(n) : minus1_classes(n);
    std::vector<PicClass> rt = a.weyl ? root_classes_weyl(n) : root_classes(n);
    RootDiagnosis diag = classify_root_subsystem(n, rt);
    int rho = n + 1, K2 = 9 - n;
    if (a.format == "json") {
        json j;
        j["schema"] = "frobsurf-lattice/1";
        j["n"] = n;
        j["rho"] = rho;
        j["K2"] = K2;
        j["minus1_classes"] = m1.size();
        j["roots"] = rt.size();
        j["system"] = diag.name();
        j["enumerator"] = a.weyl ? "weyl" : "direct";
        std::cout << j.dump(2) << "\n";
    } else if (a.format == "csv") {
        std::cout << "n,rho,K2,minus1_classes,roots,system,enumerator\n";
        std::cout << n << "," << rho << "," << K2 << "," << m1.size() << "," << rt.size()
                  << "," << diag.name() << "," << (a.weyl ? "weyl" : "direct") << "\n";
    } else {
        std::cout << "blown-up plane lattice, n = " << n << " (rho = " << rho
                  << ", K^2 = " << K2 << ")\n";
        std::cout << "  (-1)-classes: " << m1.size() << "\n";
        std::cout << "  roots:        " << rt.size() << "\n";
        std::cout << "  full system:  " << diag.name() << "\n";
    }
    return 0;
}

int run_lattice_tree(const LatticeArgs& a) {
    SurfaceModel m = model_from_file(a.target);
    if (m.kind != ModelKind::Blowup)
        throw RefusalError("lattice diagnosis takes a blowup model file");
    validate_model(m);
    const PointTree& tree = *m.tree;
    TreeGeometry geom(tree);
    WeakDpReport wd = weak_dp_check(geom);
    EffectiveRootsReport er = effective_roots(geom);
    bool smooth_config = er.diag.comps.empty();
    const uint32_t probes[4] = {2, 3, 5, 7};
    if (a.format == "json") {
        json j;
        j["schema"] = "frobsurf-tree/1";
        j["name"] = m.name;
        j["base"] = tree.base;
        j["nodes"] = tree.n();
        j["K2"] = tree.K2();
        j["p"] = tree.F.p();
        j["field_degree"] = tree.F.k();
        j["weak_del_pezzo"] = wd.ok;
        json viol = json::array();
        for (const PicClass& c : wd.violators) viol.push_back(class_str(c));
        j["violators"] = viol;
        j["effective_roots"] = er.effective.size();
        j["irreducible_roots"] = er.curves.size();
        j["singularities"] = smooth_config ? "none" : er.diag.name();
        json th;
        for (uint32_t p : probes)
            th["p" + std::to_string(p)] = sfr_all_components(er.diag, p);
        j["sfr_thresholds"] = th;
        j["sfr_at_model_p"] = sfr_all_components(er.diag, tree.F.p());
        std::cout << j.dump(2) << "\n";
    } else if (a.format == "csv") {
        std::cout << "key,value\n";
        auto row = [](const std::string& k, const std::string& v) {
            std::cout << k << "," << csv_escape(v) << "\n";
        };
        row("name", m.name);
        row("base", tree.base);
        row("nodes", std::to_string(tree.n()));
        row("K2", std::to_string(tree.K2()));
        row("p", std::to_string(tree.F.p()));
        row("weak_del_pezzo", wd.ok ? "yes" : "no");
        row("effective_roots", std::to_string(er.effective.size()));
        row("singularities", smooth_config ? "none" : er.diag.name());
        for (uint32_t p : probes)
            row("sfr_p" + std::to_string(p),
                sfr_all_components(er.diag, p) ? "yes" : "no");
    } else {
        std::cout << "tree " << (m.name.empty() ? "(unnamed)" : m.name) << " (base "
                  << tree.base << ", " << tree.n() << " node(s), K^2 = " << tree.K2()
                  << ") over " << field_label(tree.F.p(), tree.F.k()) << "\n";
        std::cout << "  weak del Pezzo:  " << (wd.ok ? "yes" : "NO");
        if (!wd.ok) {
            std::cout << " — violators:";
            for (const PicClass& c : wd.violators) std::cout << " " << class_str(c);
        }
        std::cout << "\n";
        std::cout << "  effective roots: " << er.effective.size() << " ("
                  << er.curves.size() << " irreducible)\n";
        std::cout << "  singularities:   "
                  << (smooth_config ? "none (smooth configuration)" : er.diag.name())
                  << "\n";
        std::cout << "  strongly F-regular singularities:";
        for (uint32_t p : probes)
            std::cout << " p=" << p << " "
                      << (sfr_all_components(er.diag, p) ? "yes" : "no");
        std::cout << "\n";
    }
    return 0;
}

int run_lattice(const LatticeArgs& a) {
    bool digits = !a.target.empty();
    for (char c : a.target)
        if (!std::isdigit((unsigned char)c)) digits = false;
    if (digits) return run_lattice_counts(std::stoi(a.target), a);
    return run_lattice_tree(a);
}

// ------------------------------------------------------------------ certify

struct CertifyArgs {
    std::string path;
    int retries = 64;
    uint64_t seed = 0;
    std::string format = "text";
    uint64_t cap = 0;
};

int run_certify(const CertifyArgs& a) {
    apply_cap(a.cap);
    SurfaceModel m = model_from_file(a.path);
    if (m.kind != ModelKind::Blowup)
        throw RefusalError("certificate search takes a blowup model file");
    validate_model(m);
    const PointTree& tree = *m.tree;
    std::optional<BoundaryCertificate> cert =
        find_boundary_certificate(tree, a.retries, a.seed);
    bool revalidated = cert && validate_certificate(tree, *cert);
    if (a.format == "json") {
        json j;
        j["schema"] = "frobsurf-certify/1";
        j["model_hash"] = hex64(model_hash(m));
        j["name"] = m.name;
        j["retries"] = a.retries;
        j["seed"] = a.seed;
        j["found"] = (bool)cert;
        if (cert) {
            j["revalidated"] = revalidated;
            j["certificate"] = json::parse(certificate_json_text(*cert));
        }
        std::cout << j.dump(2) << "\n";
    } else if (a.format == "csv") {
        std::cout << "key,value\n";
        std::cout << "found," << (cert ? "yes" : "no") << "\n";
        if (cert) {
            std::cout << "revalidated," << (revalidated ? "yes" : "no") << "\n";
            std::cout << "field," << field_label(cert->p, cert->k) << "\n";
            std::cout << "rounds," << cert->rounds_used << "\n";
            std::cout << "pair_coefficient," << cert->pair_coeff << "\n";
            for (const CertificatePiece& pc : cert->pieces) {
                std::string nodes;
                for (int nd : pc.nodes) nodes += (nodes.empty() ? "" : " ") + std::to_string(nd);
                std::cout << "piece," << csv_escape(pc.role + " [" + nodes + "] " + pc.form)
                          << "\n";
            }
        }
    } else {
        std::cout << "tree " << (m.name.empty() ? "(unnamed)" : m.name) << " (base "
                  << tree.base << ", " << tree.n() << " node(s), K^2 = " << tree.K2()
                  << ") over " << field_label(tree.F.p(), tree.F.k()) << "\n";
        if (!cert) {
            std::cout << "  no boundary certificate found within " << a.retries
                      << " retries\n";
            std::cout << "  (the search is a semidecision: exhaustion proves nothing)\n";
        } else {
            std::cout << "  boundary certificate found after " << cert->rounds_used
                      << " round(s) over " << field_label(cert->p, cert->k) << "\n";
            std::cout << "  revalidation:     " << (revalidated ? "pass" : "FAIL") << "\n";
            std::cout << "  pair coefficient: " << cert->pair_coeff << "\n";
            std::cout << "  discrepancies:   ";
            for (long v : cert->profile) std::cout << " " << v;
            std::cout << "\n  pieces:\n";
            for (const CertificatePiece& pc : cert->pieces) {
                std::cout << "    - " << pc.role;
                if (!pc.nodes.empty()) {
                    std::cout << " [nodes";
                    for (int nd : pc.nodes) std::cout << " " << nd;
                    std::cout << "]";
                }
                std::cout << "  " << pc.form << "\n";
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "frobsurf — Frobenius splitting and global F-regularity of weak del Pezzo "
        "surface models over small prime fields"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "frobsurf 0.1.0");
    app.footer(
        "examples:\n"
        "  frobsurf check cubic.toml --format json\n"
        "  frobsurf sample --k2 3 --p 2 --n 50 --seed 7\n"
        "  frobsurf table --p 2,3,5,7 --oracle-only\n"
        "  frobsurf lattice 6\n"
        "  frobsurf certify five-points.toml --retries 128");

    static const std::vector<std::string> kFormats{"json", "csv", "text"};
    auto add_format = [&](CLI::App* sub, std::string& slot) {
        sub->add_option("--format", slot, "output format: json, csv or text")
            ->check(CLI::IsMember(kFormats));
    };

    CheckArgs ca;
    CLI::App* check = app.add_subcommand("check", "verdict report for one model file");
    check->add_option("model", ca.path, "model file (TOML)")
        ->required()
        ->check(CLI::ExistingFile);
    check->add_option("--emax", ca.opt.emax, "F-regularity search level bound")
        ->check(CLI::Range(1, 6));
    check->add_option("--kmax", ca.opt.kmax, "smoothness scan extension depth")
        ->check(CLI::Range(1, 4));
    check->add_option("--retries", ca.opt.retries, "certificate search retries")
        ->check(CLI::Range(1, 1 << 20));
    check->add_option("--seed", ca.opt.seed, "random seed");
    check->add_flag("--timings", ca.opt.collect_timings, "include wall-clock timings");
    check->add_option("--cap", ca.cap, "polynomial term budget override");
    add_format(check, ca.format);

    SampleArgs sa;
    sa.opt.kmax = 2;  // sampling default favours throughput; see check for depth
    CLI::App* sample =
        app.add_subcommand("sample", "random models in one (K^2, p) cell");
    sample->add_option("--k2", sa.K2, "degree K^2 of the cell")
        ->required()
        ->check(CLI::Range(1, 8));
    sample->add_option("--p", sa.p, "characteristic (prime <= 97)")->required();
    sample->add_option("--k", sa.k, "coefficient field degree over F_p")
        ->check(CLI::Range(1, 4));
    sample->add_option("--n", sa.n, "number of screened models to collect")
        ->check(CLI::Range(1, 1 << 20));
    sample->add_option("--seed", sa.seed, "random seed");
    sample->add_option("--kmax", sa.opt.kmax, "smoothness scan extension depth")
        ->check(CLI::Range(1, 4));
    sample->add_option("--retries", sa.opt.retries, "certificate search retries")
        ->check(CLI::Range(1, 1 << 20));
    sample->add_option("--jobs", sa.jobs, "concurrent trial workers")
        ->check(CLI::Range(1, 256));
    sample->add_flag("--no-sentinel", sa.no_sentinel,
                     "do not inject the cell's fixed counterexample");
    sample->add_option("--cap", sa.cap, "polynomial term budget override");
    add_format(sample, sa.format);

    TableArgs ta;
    ta.opt.kmax = 1;  // the grid is the point here; keep the samples cheap
    CLI::App* table = app.add_subcommand(
        "table", "exceptional-cell grid with per-cell sample summaries");
    table->add_option("--p", ta.primes, "characteristics to tabulate")
        ->delimiter(',');
    table->add_flag("--smooth", ta.smooth,
                    "tabulate smooth surfaces instead of canonical ones");
    table->add_flag("--oracle-only", ta.oracle_only,
                    "print the classification grid only, no sampling");
    table->add_option("--n", ta.n, "screened models per cell")
        ->check(CLI::Range(1, 1 << 16));
    table->add_option("--seed", ta.seed, "random seed");
    table->add_option("--kmax", ta.opt.kmax, "smoothness scan extension depth")
        ->check(CLI::Range(1, 4));
    table->add_option("--retries", ta.opt.retries, "certificate search retries")
        ->check(CLI::Range(1, 1 << 20));
    table->add_option("--jobs", ta.jobs, "concurrent trial workers")
        ->check(CLI::Range(1, 256));
    table->add_option("--cap", ta.cap, "polynomial term budget override");
    add_format(table, ta.format);

    LatticeArgs la;
    CLI::App* lattice = app.add_subcommand(
        "lattice", "Picard lattice counts (n = 1..8) or point-tree diagnosis");
    lattice->add_option("target", la.target, "rank n, or a blowup model file")
        ->required();
    lattice->add_flag("--weyl", la.weyl, "use the Weyl-orbit enumerators");
    add_format(lattice, la.format);

    CertifyArgs ga;
    CLI::App* certify =
        app.add_subcommand("certify", "boundary certificate search for a point tree");
    certify->add_option("model", ga.path, "blowup model file (TOML)")
        ->required()
        ->check(CLI::ExistingFile);
    certify->add_option("--retries", ga.retries, "search retries before giving up")
        ->check(CLI::Range(1, 1 << 20));
    certify->add_option("--seed", ga.seed, "random seed");
    certify->add_option("--cap", ga.cap, "polynomial term budget override");
    add_format(certify, ga.format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*check) return run_check(ca);
        if (*sample) return run_sample(sa);
        if (*table) return run_table(ta);
        if (*lattice) return run_lattice(la);
        if (*certify) return run_certify(ga);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const RefusalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
