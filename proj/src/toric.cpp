#include "frobsurf/toric.hpp"

#include <algorithm>

#include "frobsurf/fedder.hpp"

namespace frobsurf {

long h1_hirzebruch(int a, int b, long c) {
    if (a < 0) throw ParseError("h1_hirzebruch: a must be >= 0");
    if (b >= 0) {
        // pushforward along the ruling: sum of h^1(P^1, O(c - a j))
        long h = 0;
        for (int j = 0; j <= b; ++j) h += std::max(0l, (long)a * j - c - 1);
        return h;
    }
    if (b == -1) return 0;  // both pushforwards vanish
    // Serre duality with K = -2 C0 - (a+2) F
    return h1_hirzebruch(a, -2 - b, -(a + 2) - c);
}

namespace {

int hirzebruch_a(const std::string& name) {
    if (name == "P1xP1" || name == "F0") return 0;
    if (name == "F1") return 1;
    if (name == "F2") return 2;
    throw ParseError("ioa_fsplit_check: ambient " + name + " is not a ruled base");
}

// extract the coefficient forms of s0 and s1 from a C0-degree-1 form
std::pair<Poly, Poly> section_coefficients(const Poly& S) {
    const Ambient& amb = S.ambient();
    const Fq& F = S.field();
    Poly A(amb, F), B(amb, F);  // S = A*s0 + B*s1
    for (auto& [m, c] : S.terms()) {
        Monomial t = m;
        if (m.e[2] == 1 && m.e[3] == 0) {
            t.e[2] = 0;
            A.set_coeff(t, c);
        } else if (m.e[2] == 0 && m.e[3] == 1) {
            t.e[3] = 0;
            B.set_coeff(t, c);
        } else {
            throw ParseError("section form must be linear in s0, s1");
        }
    }
    return {A, B};
}

// do two binary forms in (t0, t1) share a projective root (over the closure)?
bool binary_forms_share_root(const Poly& A, const Poly& B) {
    if (A.is_zero() || B.is_zero()) return true;
    // univariate Euclid in t0 after dehomogenising t1 = 1, plus the root at
    // [1:0] which both have iff neither contains a pure t0-power term
    const Fq& F = A.field();
    auto to_univ = [&](const Poly& f) {
        std::vector<uint32_t> c;
        for (auto& [m, v] : f.terms()) {
            size_t d = m.e[0];
            if (c.size() <= d) c.resize(d + 1, 0);
            c[d] = F.add(c[d], v);
        }
        while (!c.empty() && c.back() == 0) c.pop_back();
        return c;
    };
    auto a = to_univ(A), b = to_univ(B);
    bool a_inf = true, b_inf = true;  // vanishing at [1:0]
    for (auto& [m, v] : A.terms())
        if (m.e[1] == 0) a_inf = false;
    for (auto& [m, v] : B.terms())
        if (m.e[1] == 0) b_inf = false;
    if (a_inf && b_inf) return true;
    // gcd degree >= 1 ?
    while (!b.empty()) {
        // a mod b
        uint32_t inv = F.inv(b.back());
        while (a.size() >= b.size()) {
            uint32_t f = F.mul(a.back(), inv);
            if (f) {
                size_t off = a.size() - b.size();
                for (size_t j = 0; j < b.size(); ++j)
                    a[off + j] = F.sub(a[off + j], F.mul(f, b[j]));
            }
            while (!a.empty() && a.back() == 0) a.pop_back();
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a.size() > 1;
}

}  // namespace

IoaResult ioa_fsplit_check(const Poly& Sform, const std::vector<Poly>& Bforms, int e) {
    const Ambient& amb = Sform.ambient();
    const Fq& F = Sform.field();
    int a = hirzebruch_a(amb.name);
    if (Sform.is_zero() || !Sform.is_homogeneous())
        throw ParseError("ioa_fsplit_check: S must be a nonzero homogeneous form");
    for (auto& b : Bforms)
        if (b.is_zero() || !b.is_homogeneous())
            throw ParseError("ioa_fsplit_check: boundary forms must be nonzero homogeneous");

    long Sc = Sform.degree(0), Sb = Sform.degree(1);
    // anticanonical bookkeeping: S + sum B must be -K = 2 C0 + (a+2) F
    long sum_c = Sc, sum_b = Sb;
    for (auto& b : Bforms) {
        sum_c += b.degree(0);
        sum_b += b.degree(1);
    }
    if (sum_b != 2 || sum_c != a + 2)
        throw ParseError("ioa_fsplit_check: K + S + B is not trivial");

    // parametrise S and restrict the boundary
    const Ambient& P1 = Ambient::by_name("P1");
    Poly u = Poly::variable(P1, F, 0), v = Poly::variable(P1, F, 1);
    std::vector<Poly> images;
    if (Sb == 0 && Sc == 1) {
        // fibre t = [t0 : t1] with a t0 + b t1 = 0
        uint32_t ca = 0, cb = 0;
        for (auto& [m, c] : Sform.terms()) {
            if (m.e[0] == 1) ca = c;
            if (m.e[1] == 1) cb = c;
        }
        images = {Poly::constant(P1, F, F.neg(cb)), Poly::constant(P1, F, ca), u, v};
    } else if (Sb == 1) {
        auto [A, B] = section_coefficients(Sform);
        if (!A.is_zero() && !B.is_zero() && binary_forms_share_root(A, B))
            throw ParseError("ioa_fsplit_check: section form is reducible");
        if ((A.is_zero() && B.degree(0) > 0) || (B.is_zero() && A.degree(0) > 0))
            throw ParseError("ioa_fsplit_check: section form is reducible");
        // point [t0:t1] -> (t0, t1, -B(t), A(t))
        auto restrict_t = [&](const Poly& f) {
            // f lives in (t0, t1) only
            std::vector<Poly> im = {u, v, Poly::zero(P1, F), Poly::zero(P1, F)};
            return f.substitute(im);
        };
        images = {u, v, -restrict_t(B), restrict_t(A)};
    } else {
        throw ParseError("ioa_fsplit_check: S must be a fibre or a section (C0-degree 0 or 1)");
    }

    std::vector<Poly> restricted;
    for (auto& b : Bforms) {
        Poly r = b.substitute(images);
        if (r.is_zero())
            throw ParseError("ioa_fsplit_check: S is a component of the boundary");
        restricted.push_back(r);
    }

    IoaResult out;
    auto pair = pair_fsplit(restricted, e);
    out.pair_coeff = pair.coeff;
    out.h1 = h1_hirzebruch(a, (int)-Sb, -Sc);
    out.split = pair.split && out.h1 == 0;
    return out;
}

}  // namespace frobsurf
