// Model validation, quasi-smoothness scanning, sentinels, random sampling
// and the per-model verdict pipeline.

#include "frobsurf/surface.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace frobsurf {

namespace {

// ------------------------------------------------------------ small helpers

bool proportional(const Poly& f, const Poly& g) {
    if (f.is_zero() || g.is_zero()) return true;
    const Fq& F = f.field();
    Monomial lead = f.leading_monomial();
    uint32_t gc = g.coeff(lead);
    if (!gc) return false;
    return g == f.scaled(F.div(gc, f.leading_coeff()));
}

std::string field_label(uint32_t p, int k) {
    std::string s = "F_" + std::to_string(p);
    if (k > 1) s += "^" + std::to_string(k);
    return s;
}

// A multiplicative generator of F_q^* (packed representation), by testing
// candidates against the prime factors of q-1.
uint32_t field_generator(const Fq& F) {
    uint64_t q = F.q();
    if (q == 2) return 1;
    uint64_t m = q - 1;
    std::vector<uint64_t> primes;
    uint64_t t = m;
    for (uint64_t d = 2; d * d <= t; ++d)
        if (t % d == 0) {
            primes.push_back(d);
            while (t % d == 0) t /= d;
        }
    if (t > 1) primes.push_back(t);
    for (uint32_t g = 2; g < q; ++g) {
        bool ok = true;
        for (uint64_t ell : primes)
            if (F.pow(g, m / ell) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw std::logic_error("multiplicative group has no generator");
}

// ------------------------------------------------ weighted point enumeration
//
// Points of the weighted projective space P(a_0..a_{nv-1}) over F_q are the
// orbits of F_q^{nv} \ 0 under lambda . x_i = lambda^{a_i} x_i.  Canonical
// representatives: the first nonzero coordinate runs over coset
// representatives gamma^s, s < g_0 = gcd(a_{i0}, q-1), of the subgroup
// (F_q^*)^{a_{i0}}; the residual stabilizer mu_{g_0} acts on the tail, which
// is taken lexicographically minimal (in packed-value order).  For weights
// all 1 this is the usual first-nonzero-coordinate-one enumeration.

template <class Fn>
void for_each_weighted_point(const Ambient& amb, const Fq& F, Fn&& fn) {
    if (amb.gradings.size() != 1)
        throw ParseError("point enumeration needs a single grading row");
    const int nv = amb.nvars();
    const uint64_t q = F.q();
    const uint64_t m = q - 1;
    bool need_gen = false;
    std::vector<uint64_t> w(nv);
    for (int i = 0; i < nv; ++i) {
        w[i] = (uint64_t)amb.gradings[0][i];
        if (std::gcd(w[i], m) > 1) need_gen = true;
    }
    const uint32_t gamma = need_gen ? field_generator(F) : 1;
    std::vector<uint32_t> x(nv, 0);
    for (int i0 = 0; i0 < nv; ++i0) {
        const uint64_t g0 = std::gcd(w[i0], m);
        std::vector<uint32_t> stab;  // nontrivial scalars fixing x_{i0}
        for (uint64_t t = 1; t < g0; ++t) stab.push_back(F.pow(gamma, t * (m / g0)));
        std::fill(x.begin(), x.end(), 0);
        const int tn = nv - i0 - 1;
        std::vector<uint32_t> tv(tn, 0);
        for (uint64_t s = 0; s < g0; ++s) {
            x[i0] = F.pow(gamma, s);
            std::fill(tv.begin(), tv.end(), 0);
            for (;;) {
                for (int j = 0; j < tn; ++j) x[i0 + 1 + j] = tv[j];
                bool canonical = true;
                for (uint32_t lam : stab) {
                    int cmp = 0;
                    for (int j = 0; j < tn && cmp == 0; ++j) {
                        uint32_t y = F.mul(F.pow(lam, w[i0 + 1 + j]), tv[j]);
                        if (y != tv[j]) cmp = y < tv[j] ? -1 : 1;
                    }
                    if (cmp < 0) {
                        canonical = false;
                        break;
                    }
                }
                if (canonical) fn(x);
                int j = tn - 1;
                while (j >= 0 && tv[j] == q - 1) tv[j--] = 0;
                if (j < 0) break;
                ++tv[j];
            }
        }
    }
}

// Upper bound on the representative count (cosets per first coordinate are
// at most the largest weight, 3 for the ambients in use).
long double ambient_point_estimate(const Ambient& amb, uint64_t q) {
    long double total = 0, powq = 1;
    for (int j = 0; j < amb.nvars(); ++j) {
        total += powq;
        powq *= (long double)q;
    }
    return 3.0L * total;
}

const long double kScanBudget = 5e6L;

// ------------------------------------------------------------ fixed sentinels

struct SentinelSpec {
    int K2;
    uint32_t p;
    const char* ambient;
    const char* text;
    const char* name;
};

// Smooth anticanonical models that fail F-splitting in their cell.
const SentinelSpec kSentinels[] = {
    {3, 2, "P3", "x^3+y^3+z^3+w^3", "fermat-cubic"},
    {2, 3, "P(1,1,1,2)", "x^4+y^4+z^4+w^2", "fermat-quartic"},
    {1, 5, "P(1,1,2,3)", "x^6+y^6+z^3+w^2", "fermat-sextic"},
};

const std::vector<std::vector<std::vector<int>>>& chain_partitions() {
    static const std::vector<std::vector<std::vector<int>>> table = {
        {},
        {{1}},
        {{1, 1}, {2}},
        {{1, 1, 1}, {2, 1}, {3}},
        {{1, 1, 1, 1}, {2, 1, 1}, {2, 2}, {3, 1}, {4}},
    };
    return table;
}

}  // namespace

// ----------------------------------------------------------------- model data

const Fq& SurfaceModel::field() const {
    if (!forms.empty()) return forms[0].field();
    if (tree) return tree->F;
    throw ParseError("surface model carries neither forms nor a point tree");
}

const std::string& equation_ambient(int K2) {
    static const std::string names[] = {"P(1,1,2,3)", "P(1,1,1,2)", "P3", "P4"};
    if (K2 < 1 || K2 > 4)
        throw ParseError("no equation presentation for K^2 = " + std::to_string(K2));
    return names[K2 - 1];
}

long equation_degree(int K2) {
    switch (K2) {
        case 1: return 6;
        case 2: return 4;
        case 3: return 3;
        case 4: return 2;
    }
    throw ParseError("no equation presentation for K^2 = " + std::to_string(K2));
}

void validate_model(const SurfaceModel& m) {
    if (m.kind == ModelKind::Blowup) {
        if (!m.tree) throw ParseError("blowup model without a point tree");
        if (!m.forms.empty()) throw ParseError("blowup model with defining forms");
        validate_tree(*m.tree);
        if (m.K2 != m.tree->K2())
            throw ParseError("declared K^2 = " + std::to_string(m.K2) +
                             " does not match the tree (K^2 = " + std::to_string(m.tree->K2()) +
                             ")");
        return;
    }
    if (m.tree) throw ParseError("equation model with a point tree");
    ModelKind want = m.K2 == 4 ? ModelKind::CompleteIntersection : ModelKind::Hypersurface;
    if (m.kind != want) throw ParseError("model kind does not match K^2");
    size_t nforms = m.K2 == 4 ? 2 : 1;
    if (m.forms.size() != nforms)
        throw ParseError("expected " + std::to_string(nforms) + " defining form(s), got " +
                         std::to_string(m.forms.size()));
    const std::string& ambName = equation_ambient(m.K2);
    long deg = equation_degree(m.K2);
    for (const Poly& f : m.forms) {
        if (f.ambient().name != ambName)
            throw ParseError("defining form lives in " + f.ambient().name + ", expected " +
                             ambName);
        if (!(f.field() == m.forms[0].field()))
            throw ParseError("defining forms over different fields");
        if (f.is_zero()) throw RefusalError("zero defining form is not an anticanonical model");
        if (!f.is_homogeneous() || f.degree() != deg)
            throw RefusalError("defining form is not homogeneous of degree " +
                               std::to_string(deg) + "; not an anticanonical model");
    }
    if (m.K2 <= 2) {
        // w has weight 2 (K2 = 2) or 3 (K2 = 1); w^2 spans the forms at the
        // ambient singular point [0:0:0:1], so a vanishing coefficient puts
        // the surface through it.
        Monomial w2;
        w2.e[3] = 2;
        if (m.forms[0].coeff(w2) == 0)
            throw RefusalError(
                "the surface passes through the ambient singular point [0:0:0:1] "
                "(w^2 coefficient vanishes); refusing the Frobenius verdict there");
    }
    if (m.K2 == 1) {
        Monomial z3;
        z3.e[2] = 3;
        if (m.forms[0].coeff(z3) == 0)
            throw RefusalError(
                "the surface passes through the ambient singular point [0:0:1:0] "
                "(z^3 coefficient vanishes); refusing the Frobenius verdict there");
    }
    if (m.K2 == 4 && proportional(m.forms[0], m.forms[1]))
        throw RefusalError("the two quadrics are proportional and do not span a pencil");
}

// ------------------------------------------------------- quasi-smoothness scan

ScanReport scan_singular(const SurfaceModel& m, int kmax) {
    if (m.kind == ModelKind::Blowup)
        throw ParseError("the quasi-smoothness scan applies to equation models only");
    if (m.forms.empty()) throw ParseError("scan on a model without defining forms");
    const Fq& F0 = m.field();
    const Ambient& amb = m.forms[0].ambient();
    const int nv = amb.nvars();
    ScanReport rep;
    rep.kmax_requested = kmax;
    for (int j = 1; j <= kmax; ++j) {
        int kk = F0.k() * j;
        if (kk > 4) break;  // extension tower limit of the field layer
        Fq Fk = kk == F0.k() ? F0 : Fq::ext(F0.p(), kk);
        long double est = ambient_point_estimate(amb, Fk.q());
        if (j > 1 && est > kScanBudget) {
            rep.budget_capped = true;
            break;
        }
        std::vector<Poly> forms;
        forms.reserve(m.forms.size());
        for (const Poly& f : m.forms) forms.push_back(f.lifted_to(Fk));
        std::vector<std::vector<Poly>> parts(forms.size());
        for (size_t fi = 0; fi < forms.size(); ++fi)
            for (int v = 0; v < nv; ++v) parts[fi].push_back(forms[fi].derivative(v));
        long on_x = 0;
        for_each_weighted_point(amb, Fk, [&](const std::vector<uint32_t>& x) {
            for (const Poly& f : forms)
                if (f.eval(x) != 0) return;  // not on X
            ++on_x;
            bool singular;
            if (forms.size() == 1) {
                singular = true;
                for (int v = 0; v < nv && singular; ++v)
                    if (parts[0][v].eval(x) != 0) singular = false;
            } else {
                // rank of the 2 x nv Jacobian below 2: all 2x2 minors vanish
                std::vector<uint32_t> r0(nv), r1(nv);
                for (int v = 0; v < nv; ++v) {
                    r0[v] = parts[0][v].eval(x);
                    r1[v] = parts[1][v].eval(x);
                }
                singular = true;
                for (int a = 0; a < nv && singular; ++a)
                    for (int b = a + 1; b < nv && singular; ++b)
                        if (Fk.sub(Fk.mul(r0[a], r1[b]), Fk.mul(r0[b], r1[a])) != 0)
                            singular = false;
            }
            if (singular) {
                ++rep.singular_count;
                if (rep.singular_points.size() < 8) {
                    std::string s = "[";
                    for (int v = 0; v < nv; ++v)
                        s += (v ? ":" : "") + Fk.to_string(x[v]);
                    s += "] over " + field_label(Fk.p(), Fk.k());
                    rep.singular_points.push_back(s);
                }
            }
        });
        rep.points_on_x = on_x;
        rep.k_checked = kk;
    }
    return rep;
}

// ------------------------------------------------------------------ sentinels

bool has_sentinel(int K2, uint32_t p) {
    for (const auto& s : kSentinels)
        if (s.K2 == K2 && s.p == p) return true;
    return false;
}

SurfaceModel sentinel_model(int K2, uint32_t p) {
    for (const auto& s : kSentinels) {
        if (s.K2 != K2 || s.p != p) continue;
        SurfaceModel m;
        m.kind = ModelKind::Hypersurface;
        m.K2 = K2;
        m.name = s.name;
        Fq F = Fq::prime(p);
        m.forms = {Poly::parse(Ambient::by_name(s.ambient), F, s.text)};
        return m;
    }
    throw RefusalError("no sentinel model on file for (K^2, p) = (" + std::to_string(K2) +
                       ", " + std::to_string(p) + ")");
}

// -------------------------------------------------------------- random models

SurfaceModel random_model(int K2, const Fq& F, uint64_t seed) {
    SplitMix64 rng(substream(seed, 0x5eedULL));
    SurfaceModel m;
    m.K2 = K2;
    m.name = "random";
    if (K2 >= 5 && K2 <= 8) {
        m.kind = ModelKind::Blowup;
        const auto& parts = chain_partitions()[9 - K2];
        const auto& pick = parts[rng.below(parts.size())];
        m.tree = random_tree(pick, F, substream(seed, 0x7ee1ULL));
        return m;
    }
    if (K2 == 4) {
        m.kind = ModelKind::CompleteIntersection;
        const Ambient& amb = Ambient::by_name("P4");
        for (;;) {
            Poly f = Poly::random_form(amb, F, {2}, rng);
            Poly g = Poly::random_form(amb, F, {2}, rng);
            if (f.is_zero() || g.is_zero() || proportional(f, g)) continue;
            m.forms = {f, g};
            return m;
        }
    }
    if (K2 >= 1 && K2 <= 3) {
        m.kind = ModelKind::Hypersurface;
        const Ambient& amb = Ambient::by_name(equation_ambient(K2));
        for (;;) {
            Poly f = Poly::random_form(amb, F, {equation_degree(K2)}, rng);
            if (K2 <= 2) {
                Monomial w2;
                w2.e[3] = 2;
                f.set_coeff(w2, F.random_nonzero(rng));
            }
            if (K2 == 1) {
                Monomial z3;
                z3.e[2] = 3;
                f.set_coeff(z3, F.random_nonzero(rng));
            }
            if (f.is_zero()) continue;
            m.forms = {f};
            return m;
        }
    }
    throw RefusalError("no random model family for K^2 = " + std::to_string(K2));
}

// ------------------------------------------------------------ verdict pipeline

static std::string pair_witness_string(const PointTree& tree, const BoundaryCertificate& cert) {
    const Ambient& amb = Ambient::by_name(tree.base);
    Monomial mo;
    for (int i = 0; i < amb.nvars(); ++i) mo.e[i] = (uint16_t)(cert.p - 1);
    return monomial_str(amb, mo);
}

CheckReport check_model(const SurfaceModel& m, const CheckOptions& opt) {
    validate_model(m);
    CheckReport rep;
    rep.K2 = m.K2;
    const Fq& F = m.field();
    rep.p = F.p();
    rep.field_k = F.k();
    auto timed = [&](const char* label, auto&& body) {
        if (!opt.collect_timings) {
            body();
            return;
        }
        auto t0 = std::chrono::steady_clock::now();
        body();
        std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        rep.timings.emplace_back(label, dt.count());
    };

    if (m.kind == ModelKind::Blowup) {
        rep.kind = "blowup";
        const PointTree& tree = *m.tree;
        TreeGeometry geom(tree);
        WeakDpReport wd;
        timed("weak_dp", [&] { wd = weak_dp_check(geom); });
        if (!wd.ok)
            throw RefusalError("tree is not a weak del Pezzo configuration: -K meets the "
                               "effective class " +
                               class_str(wd.violators.front()) + " negatively");
        EffectiveRootsReport er;
        timed("roots", [&] { er = effective_roots(geom); });
        const RootDiagnosis& diag = er.diag;
        rep.singularities = diag.name();
        std::optional<BoundaryCertificate> cert;
        timed("certificate",
              [&] { cert = find_boundary_certificate(tree, opt.retries, opt.seed); });
        bool sfr = sfr_all_components(diag, F.p());
        if (cert) {
            rep.f_split = true;
            rep.f_pure = true;
            rep.witness = pair_witness_string(tree, *cert) + " (coefficient " +
                          std::to_string(cert->pair_coeff) + ")";
            rep.certificate = std::move(cert);
        }
        if (rep.certificate && sfr) {
            rep.gfr = "guaranteed";
            rep.gfr_note = "F-split with strongly F-regular singularities (" + diag.name() + ")";
        } else if (rep.certificate) {
            rep.gfr = canonical_exceptional(m.K2, F.p()) ? "counterexample_possible_cell"
                                                         : "unknown_at_bound";
            rep.gfr_note = "a singular point of type " + diag.name() +
                           " is below its strong F-regularity threshold at p = " +
                           std::to_string(F.p());
        } else {
            rep.gfr = "unknown_at_bound";
            rep.gfr_note = "no boundary certificate found within " +
                           std::to_string(opt.retries) + " retries (proves nothing)";
        }
        return rep;
    }

    rep.kind = m.kind == ModelKind::CompleteIntersection ? "complete_intersection"
                                                         : "hypersurface";
    FedderResult fed;
    timed("fedder", [&] { fed = fedder_fpure(m.forms); });
    rep.f_pure = fed.split;
    rep.f_split = fed.split;
    if (fed.split)
        rep.witness = fed.witness + " (coefficient " + std::to_string(fed.witness_coeff) + ")";
    timed("scan", [&] { rep.scan = scan_singular(m, opt.kmax); });
    {
        std::ostringstream os;
        if (rep.scan.singular_found()) {
            os << rep.scan.singular_count << " singular point(s) over " << rep.scan.k_checked
               << " extension level(s), e.g. " << rep.scan.singular_points.front();
        } else {
            os << "none found over " << field_label(F.p(), F.k()) << " up to extension degree "
               << rep.scan.k_checked << " (screen, not a proof)";
        }
        rep.singularities = os.str();
    }
    if (!fed.split) {
        rep.gfr_note = "not F-split, hence not globally F-regular";
        rep.gfr = canonical_exceptional(m.K2, F.p()) ? "counterexample_possible_cell"
                                                     : "unknown_at_bound";
    } else if (sfr_uniform_bound(m.K2, F.p())) {
        rep.gfr = "guaranteed";
        rep.gfr_note = "F-split, and every rational double point type in degree " +
                       std::to_string(m.K2) + " is strongly F-regular at p = " +
                       std::to_string(F.p());
    } else {
        GfrSearchResult g;
        timed("gfr_search", [&] { g = gfr_bounded_search(m.forms, opt.emax); });
        if (g.established) {
            rep.gfr = "established_by_search";
            rep.gfr_level = g.e;
            rep.gfr_test_element = g.test_element;
            rep.gfr_witness = g.witness;
            rep.gfr_note = "splitting along a test element certifies strong F-regularity";
        } else {
            rep.gfr = "unknown_at_bound";
            rep.gfr_level = opt.emax;
            rep.gfr_note = "search exhausted at Frobenius level e <= " +
                           std::to_string(opt.emax) + " (proves nothing)";
        }
    }
    return rep;
}

// ------------------------------------------------------------------- sampling

SampleSummary sample_cell(int K2, const Fq& F, int n, uint64_t seed, const CheckOptions& opt,
                          bool include_sentinel, int jobs) {
    if (K2 < 1 || K2 > 8)
        throw RefusalError("sampling covers 1 <= K^2 <= 8 (degree 9 is the plane itself)");
    if (n < 1) throw ParseError("sample size must be positive");
    SampleSummary s;
    s.K2 = K2;
    s.p = F.p();
    s.field_k = F.k();
    s.requested = n;

    if (include_sentinel && has_sentinel(K2, F.p())) {
        SurfaceModel sm = sentinel_model(K2, F.p());
        FedderResult fr = fedder_fpure(sm.forms);
        s.sentinel_included = true;
        s.sentinel_name = sm.name;
        s.sentinel_fsplit = fr.split;
    }

    struct Trial {
        bool screened = false;
        bool split = false;
        std::string text;
    };
    const int cap = 40 * n;
    const int njobs = std::max(1, jobs);
    const int batch = std::max(8, 4 * njobs);

    auto run_trial = [&](int i) {
        Trial t;
        uint64_t si = substream(seed, (uint64_t)i);
        if (K2 <= 4) {
            SurfaceModel rm = random_model(K2, F, si);
            ScanReport sc = scan_singular(rm, opt.kmax);
            t.screened = !sc.singular_found();
            if (t.screened) {
                FedderResult fr = fedder_fpure(rm.forms);
                t.split = fr.split;
                if (!fr.split) {
                    for (const Poly& f : rm.forms)
                        t.text += (t.text.empty() ? "" : "; ") + f.str();
                }
            }
        } else {
            SurfaceModel rm = random_model(K2, F, si);
            auto cert =
                find_boundary_certificate(*rm.tree, opt.retries, substream(si, 0xce27ULL));
            t.screened = true;  // weak del Pezzo by construction
            t.split = cert.has_value();
            if (!cert) t.text = rm.tree->canonical_string();
        }
        return t;
    };

    int aggregated = 0;
    for (int lo = 0; lo < cap && s.screened < n; lo += batch) {
        const int hi = std::min(cap, lo + batch);
        std::vector<Trial> out(hi - lo);
        if (njobs == 1) {
            for (int i = lo; i < hi; ++i) out[i - lo] = run_trial(i);
        } else {
            std::atomic<int> next{lo};
            std::exception_ptr err;
            std::mutex err_mu;
            std::vector<std::thread> pool;
            for (int t = 0; t < njobs; ++t)
                pool.emplace_back([&] {
                    for (;;) {
                        int i = next.fetch_add(1);
                        if (i >= hi) return;
                        try {
                            out[i - lo] = run_trial(i);
                        } catch (...) {
                            std::lock_guard<std::mutex> lock(err_mu);
                            if (!err) err = std::current_exception();
                            return;
                        }
                    }
                });
            for (auto& th : pool) th.join();
            if (err) std::rethrow_exception(err);
        }
        for (int i = lo; i < hi && s.screened < n; ++i) {
            const Trial& t = out[i - lo];
            ++aggregated;
            if (!t.screened) continue;
            ++s.screened;
            if (t.split) {
                ++s.fsplit;
                if (K2 >= 5) ++s.certified;
            } else {
                ++s.nonsplit;
                if (s.counterexamples.size() < 3) s.counterexamples.push_back(t.text);
            }
        }
    }
    s.attempts = aggregated;
    if (s.screened < n) s.attempt_budget_hit = true;
    return s;
}

}  // namespace frobsurf
