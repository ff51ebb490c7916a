#include "frobsurf/fedder.hpp"

#include <algorithm>

namespace frobsurf {

static Poly product_of(const std::vector<Poly>& forms) {
    if (forms.empty()) throw ParseError("empty form list");
    Poly g = forms[0];
    for (size_t i = 1; i < forms.size(); ++i) g = g * forms[i];
    return g;
}

static uint64_t pe(uint32_t p, int e) {
    uint64_t q = 1;
    for (int i = 0; i < e; ++i) q *= p;
    return q;
}

FedderResult fedder_fpure(const std::vector<Poly>& forms, int e) {
    if (e < 1) throw ParseError("fedder_fpure needs e >= 1");
    Poly g = product_of(forms);
    if (g.is_zero()) return {};
    uint64_t q = pe(g.field().p(), e);
    Poly h = g.pow_pe_minus1(e).frobenius_reduce(q);
    FedderResult r;
    r.split = !h.is_zero();
    if (r.split) {
        r.witness = monomial_str(g.ambient(), h.leading_monomial());
        r.witness_coeff = h.leading_coeff();
    }
    return r;
}

PairSplitResult pair_fsplit(const std::vector<Poly>& forms, int e) {
    if (e < 1) throw ParseError("pair_fsplit needs e >= 1");
    Poly g = product_of(forms);
    const Ambient& amb = g.ambient();
    // expected anticanonical multidegree
    std::vector<long> want;
    if (amb.name == "P1")
        want = {2};
    else if (amb.name == "P2")
        want = {3};
    else if (amb.name == "P1xP1" || amb.name == "F0")
        want = {2, 2};
    else
        throw ParseError("pair_fsplit: unsupported ambient " + amb.name);
    for (auto& f : forms)
        if (f.is_zero() || !f.is_homogeneous())
            throw ParseError("pair_fsplit: forms must be nonzero and homogeneous");
    for (size_t r = 0; r < want.size(); ++r)
        if (g.degree((int)r) != want[r])
            throw ParseError("pair_fsplit: boundary is not anticanonical on " + amb.name);
    uint64_t q = pe(g.field().p(), e);
    Poly h = g.pow_pe_minus1(e);
    Monomial m;
    for (int i = 0; i < amb.nvars(); ++i) m.e[i] = (uint16_t)(q - 1);
    PairSplitResult res;
    res.coeff = h.coeff(m);
    res.split = res.coeff != 0;
    return res;
}

GfrSearchResult gfr_bounded_search(const std::vector<Poly>& forms, int e_max, SearchMode mode) {
    if (e_max < 1) throw ParseError("gfr_bounded_search needs e_max >= 1");
    Poly g = product_of(forms);
    const Fq& F = g.field();
    const Ambient& amb = g.ambient();
    // Test elements: the nonzero coordinate partials of the forms.  For a
    // hypersurface any point of V(f) where one partial is nonzero is a
    // smooth point, so the localization at any single partial is regular
    // and a surviving witness is a sound certificate.  The constant 1 is
    // deliberately not a candidate: its survival only restates F-purity.
    std::vector<Poly> tests;
    for (auto& f : forms)
        for (int i = 0; i < amb.nvars(); ++i) {
            Poly d = f.derivative(i);
            if (!d.is_zero()) tests.push_back(d);
        }
    GfrSearchResult out;
    for (int e = 1; e <= e_max; ++e) {
        uint64_t q = pe(F.p(), e);
        Poly h = g.pow_pe_minus1(e);
        bool all_ok = true;
        GfrSearchResult first_here;
        for (auto& c : tests) {
            Poly r = (c * h).frobenius_reduce(q);
            if (!r.is_zero()) {
                if (mode == SearchMode::Any) {
                    out.established = true;
                    out.e = e;
                    out.test_element = c.str();
                    out.witness = monomial_str(amb, r.leading_monomial());
                    return out;
                }
                if (first_here.test_element.empty()) {
                    first_here.test_element = c.str();
                    first_here.witness = monomial_str(amb, r.leading_monomial());
                }
            } else if (mode == SearchMode::All) {
                all_ok = false;
                break;
            }
        }
        if (mode == SearchMode::All && all_ok) {
            out.established = true;
            out.e = e;
            out.test_element = first_here.test_element;
            out.witness = first_here.witness;
            return out;
        }
    }
    out.established = false;
    out.e = e_max;
    return out;
}

// ------------------------------------------------------- classification data

const std::vector<std::pair<int, uint32_t>>& canonical_gfr_exceptions() {
    static const std::vector<std::pair<int, uint32_t>> t = {
        {4, 2}, {3, 2}, {3, 3}, {2, 2}, {2, 3}, {1, 2}, {1, 3}, {1, 5},
    };
    return t;
}

const std::vector<std::pair<int, uint32_t>>& smooth_gfr_exceptions() {
    static const std::vector<std::pair<int, uint32_t>> t = {
        {3, 2}, {2, 2}, {2, 3}, {1, 2}, {1, 3}, {1, 5},
    };
    return t;
}

const std::vector<std::pair<int, uint32_t>>& fsplit_exceptions() {
    // for smooth del Pezzo surfaces F-splitting and global F-regularity
    // fail in exactly the same cells
    return smooth_gfr_exceptions();
}

static bool in_table(const std::vector<std::pair<int, uint32_t>>& t, int K2, uint32_t p) {
    if (K2 < 1 || K2 > 9) throw ParseError("K^2 must be 1..9, got " + std::to_string(K2));
    if (p < 2 || p > 97) throw ParseError("p must be a prime <= 97");
    for (uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0) throw ParseError("p must be prime, got " + std::to_string(p));
    return std::find(t.begin(), t.end(), std::make_pair(K2, p)) != t.end();
}

bool canonical_exceptional(int K2, uint32_t p) { return in_table(canonical_gfr_exceptions(), K2, p); }
bool smooth_exceptional(int K2, uint32_t p) { return in_table(smooth_gfr_exceptions(), K2, p); }
bool fsplit_exceptional(int K2, uint32_t p) { return in_table(fsplit_exceptions(), K2, p); }

}  // namespace frobsurf
