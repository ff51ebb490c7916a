#include "frobsurf/poly.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <sstream>

namespace frobsurf {

// --------------------------------------------------------------- term cap

static std::atomic<uint64_t> g_term_cap{10000000};

uint64_t poly_term_cap() { return g_term_cap.load(); }
void set_poly_term_cap(uint64_t cap) { g_term_cap.store(cap ? cap : 1); }

// ---------------------------------------------------------------- Ambient

long Ambient::degree(const Monomial& m, int r) const {
    long d = 0;
    for (int i = 0; i < nvars(); ++i) d += (long)gradings[r][i] * m.e[i];
    return d;
}

static void enumerate_rec(const Ambient& amb, int var, std::vector<long>& remaining,
                          Monomial& cur, std::vector<Monomial>& out) {
    int n = amb.nvars();
    int rows = (int)amb.gradings.size();
    if (var == n) {
        for (long r : remaining)
            if (r != 0) return;
        out.push_back(cur);
        return;
    }
    // upper bound for this exponent from any grading row with positive weight
    long cap = -1;
    for (int r = 0; r < rows; ++r) {
        int w = amb.gradings[r][var];
        if (w > 0) {
            long c = remaining[r] / w;
            cap = cap < 0 ? c : std::min(cap, c);
        }
    }
    if (cap < 0) cap = 0;  // variable weightless in all rows: keep exponent 0
    for (long e = cap; e >= 0; --e) {
        bool ok = true;
        for (int r = 0; r < rows && ok; ++r) {
            long nr = remaining[r] - e * amb.gradings[r][var];
            if (nr < 0) ok = false;
        }
        if (!ok) continue;
        for (int r = 0; r < rows; ++r) remaining[r] -= e * amb.gradings[r][var];
        cur.e[var] = (uint16_t)e;
        enumerate_rec(amb, var + 1, remaining, cur, out);
        cur.e[var] = 0;
        for (int r = 0; r < rows; ++r) remaining[r] += e * amb.gradings[r][var];
    }
}

std::vector<Monomial> Ambient::monomials_of_degree(const std::vector<long>& deg) const {
    if (deg.size() != gradings.size())
        throw ParseError("multidegree size does not match ambient gradings");
    for (long d : deg)
        if (d < 0) return {};
    std::vector<long> remaining = deg;
    Monomial cur;
    std::vector<Monomial> out;
    enumerate_rec(*this, 0, remaining, cur, out);
    TermOrder o;
    o.n = nvars();
    for (int i = 0; i < o.n; ++i) o.w[i] = gradings.empty() ? 1 : gradings[0][i];
    std::sort(out.begin(), out.end(), [&o](const Monomial& a, const Monomial& b) {
        return o.less(b, a);  // descending
    });
    return out;
}

const Ambient& Ambient::by_name(const std::string& n) {
    static const std::map<std::string, Ambient> reg = [] {
        std::map<std::string, Ambient> r;
        r["P1"] = {"P1", {"u", "v"}, {{1, 1}}};
        r["P2"] = {"P2", {"x", "y", "z"}, {{1, 1, 1}}};
        r["P3"] = {"P3", {"x", "y", "z", "w"}, {{1, 1, 1, 1}}};
        r["P4"] = {"P4", {"x", "y", "z", "w", "v"}, {{1, 1, 1, 1, 1}}};
        r["P(1,1,1,2)"] = {"P(1,1,1,2)", {"x", "y", "z", "w"}, {{1, 1, 1, 2}}};
        r["P(1,1,2,3)"] = {"P(1,1,2,3)", {"x", "y", "z", "w"}, {{1, 1, 2, 3}}};
        r["P1xP1"] = {"P1xP1", {"x0", "x1", "y0", "y1"}, {{1, 1, 0, 0}, {0, 0, 1, 1}}};
        // Hirzebruch F_a: fibre coordinates t0 t1, sections s0 (degree (0,1),
        // cuts the negative section) and s1 (degree (a,1)); class rows are
        // (F-degree, C0-degree)
        r["F0"] = {"F0", {"t0", "t1", "s0", "s1"}, {{1, 1, 0, 0}, {0, 0, 1, 1}}};
        r["F1"] = {"F1", {"t0", "t1", "s0", "s1"}, {{1, 1, 0, 1}, {0, 0, 1, 1}}};
        r["F2"] = {"F2", {"t0", "t1", "s0", "s1"}, {{1, 1, 0, 2}, {0, 0, 1, 1}}};
        r["A2"] = {"A2", {"s", "t"}, {{1, 1}}};
        return r;
    }();
    auto it = reg.find(n);
    if (it == reg.end()) throw ParseError("unknown ambient '" + n + "'");
    return it->second;
}

std::string monomial_str(const Ambient& amb, const Monomial& m) {
    std::string out;
    for (int i = 0; i < amb.nvars(); ++i) {
        if (!m.e[i]) continue;
        if (!out.empty()) out += "*";
        out += amb.vars[i];
        if (m.e[i] > 1) out += "^" + std::to_string(m.e[i]);
    }
    return out.empty() ? "1" : out;
}

// ------------------------------------------------------------------- Poly

Poly::Poly(const Ambient& amb, const Fq& F)
    : amb_(amb), F_(F), order_(), terms_(MonoLess{}) {
    order_.n = amb.nvars();
    for (int i = 0; i < order_.n; ++i)
        order_.w[i] = amb.gradings.empty() ? 1 : amb.gradings[0][i];
    terms_ = TermMap(MonoLess{order_});
}

void Poly::check_compatible(const Poly& o) const {
    if (amb_.name != o.amb_.name || amb_.vars != o.amb_.vars || !(F_ == o.F_))
        throw ParseError("polynomials live in different rings (" + amb_.name + " over F_" +
                         std::to_string(F_.q()) + " vs " + o.amb_.name + " over F_" +
                         std::to_string(o.F_.q()) + ")");
}

void Poly::check_cap() const {
    if (terms_.size() > poly_term_cap())
        throw ResourceError("term cap exceeded (" + std::to_string(terms_.size()) + " > " +
                            std::to_string(poly_term_cap()) + " terms)");
}

uint32_t Poly::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
}

void Poly::set_coeff(const Monomial& m, uint32_t c) {
    if (c == 0)
        terms_.erase(m);
    else {
        terms_[m] = c;
        check_cap();
    }
}

void Poly::add_term(const Monomial& m, uint32_t c) {
    if (!c) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        check_cap();
    } else {
        uint32_t s = F_.add(it->second, c);
        if (s == 0)
            terms_.erase(it);
        else
            it->second = s;
    }
}

Monomial Poly::leading_monomial() const {
    if (terms_.empty()) throw ParseError("leading term of the zero polynomial");
    return terms_.rbegin()->first;
}

uint32_t Poly::leading_coeff() const {
    if (terms_.empty()) throw ParseError("leading term of the zero polynomial");
    return terms_.rbegin()->second;
}

long Poly::degree(int r) const {
    long d = -1;
    for (auto& [m, c] : terms_) d = std::max(d, amb_.degree(m, r));
    return d;
}

bool Poly::is_homogeneous() const {
    for (size_t r = 0; r < amb_.gradings.size(); ++r) {
        long d = -1;
        for (auto& [m, c] : terms_) {
            long dm = amb_.degree(m, (int)r);
            if (d == -1) d = dm;
            if (dm != d) return false;
        }
    }
    return true;
}

Poly Poly::operator+(const Poly& o) const {
    check_compatible(o);
    Poly r = *this;
    for (auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    check_compatible(o);
    Poly r = *this;
    for (auto& [m, c] : o.terms_) r.add_term(m, F_.neg(c));
    return r;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& [m, c] : r.terms_) c = F_.neg(c);
    return r;
}

Poly Poly::scaled(uint32_t c) const {
    Poly r(amb_, F_);
    if (!c) return r;
    for (auto& [m, a] : terms_) {
        uint32_t v = F_.mul(a, c);
        if (v) r.terms_.emplace(m, v);
    }
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    check_compatible(o);
    Poly r(amb_, F_);
    for (auto& [ma, ca] : terms_) {
        for (auto& [mb, cb] : o.terms_) {
            Monomial m;
            for (int i = 0; i < order_.n; ++i) {
                uint32_t s = (uint32_t)ma.e[i] + mb.e[i];
                if (s > 60000) throw ResourceError("monomial exponent overflow in product");
                m.e[i] = (uint16_t)s;
            }
            r.add_term(m, F_.mul(ca, cb));
        }
    }
    return r;
}

bool Poly::operator==(const Poly& o) const {
    if (amb_.vars != o.amb_.vars || !(F_ == o.F_)) return false;
    if (terms_.size() != o.terms_.size()) return false;
    auto it = terms_.begin();
    auto jt = o.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt)
        if (!(it->first == jt->first) || it->second != jt->second) return false;
    return true;
}

Poly Poly::pow_binary(uint64_t e) const {
    Poly r = Poly::constant(amb_, F_, 1);
    Poly base = *this;
    while (e) {
        if (e & 1) r = r * base;
        base = e > 1 ? base * base : base;
        e >>= 1;
    }
    return r;
}

Poly Poly::frobenius_scale(uint64_t q) const {
    uint64_t v = q;
    while (v > 1 && v % F_.p() == 0) v /= F_.p();
    if (v != 1) throw ParseError("frobenius_scale: " + std::to_string(q) +
                                 " is not a power of the characteristic");
    Poly r(amb_, F_);
    for (auto& [m, c] : terms_) {
        Monomial s;
        for (int i = 0; i < order_.n; ++i) {
            uint64_t e = (uint64_t)m.e[i] * q;
            if (e > 60000) throw ResourceError("monomial exponent overflow in frobenius_scale");
            s.e[i] = (uint16_t)e;
        }
        uint64_t e = q;
        uint32_t cc = c;
        while (e > 1) {
            cc = F_.frob(cc, 1);
            e /= F_.p();
        }
        r.terms_.emplace(s, cc);
    }
    return r;
}

Poly Poly::pow_pe_minus1(int e) const {
    if (e < 1) throw ParseError("pow_pe_minus1 needs e >= 1");
    // p^e - 1 = (p-1)(1 + p + ... + p^{e-1}), so
    // f^{p^e-1} = prod_{j<e} (f^{p-1})^{p^j}
    Poly g = pow_binary(F_.p() - 1);
    Poly r = g;
    uint64_t pj = 1;
    for (int j = 1; j < e; ++j) {
        pj *= F_.p();
        r = r * g.frobenius_scale(pj);
    }
    return r;
}

std::optional<Poly> Poly::divided_exactly_by(const Poly& o) const {
    check_compatible(o);
    if (o.is_zero()) return std::nullopt;
    Poly rem = *this;
    Poly quot(amb_, F_);
    Monomial dm = o.leading_monomial();
    uint32_t dc_inv = F_.inv(o.leading_coeff());
    while (!rem.is_zero()) {
        Monomial rm = rem.leading_monomial();
        Monomial m;
        bool divisible = true;
        for (int i = 0; i < order_.n; ++i) {
            if (rm.e[i] < dm.e[i]) {
                divisible = false;
                break;
            }
            m.e[i] = (uint16_t)(rm.e[i] - dm.e[i]);
        }
        if (!divisible) return std::nullopt;
        uint32_t c = F_.mul(rem.leading_coeff(), dc_inv);
        quot.add_term(m, c);
        // rem -= c * x^m * o
        for (auto& [om, oc] : o.terms_) {
            Monomial t;
            for (int i = 0; i < order_.n; ++i) t.e[i] = (uint16_t)(om.e[i] + m.e[i]);
            rem.add_term(t, F_.neg(F_.mul(c, oc)));
        }
        rem.check_cap();
    }
    return quot;
}

Poly Poly::frobenius_reduce(uint64_t q) const {
    uint64_t v = q;
    while (v > 1 && v % F_.p() == 0) v /= F_.p();
    if (v != 1 || q < F_.p())
        throw ParseError("frobenius_reduce: modulus " + std::to_string(q) +
                         " is not p^e with e >= 1");
    Poly r(amb_, F_);
    for (auto& [m, c] : terms_) {
        bool keep = true;
        for (int i = 0; i < order_.n && keep; ++i)
            if (m.e[i] >= q) keep = false;
        if (keep) r.terms_.emplace(m, c);
    }
    return r;
}

Poly Poly::derivative(int var) const {
    Poly r(amb_, F_);
    for (auto& [m, c] : terms_) {
        if (!m.e[var]) continue;
        uint32_t f = F_.mul(c, F_.from_int(m.e[var]));
        if (!f) continue;
        Monomial s = m;
        s.e[var] -= 1;
        r.add_term(s, f);
    }
    return r;
}

Poly Poly::substitute(const std::vector<Poly>& images) const {
    if ((int)images.size() != order_.n)
        throw ParseError("substitute: expected " + std::to_string(order_.n) + " images");
    for (auto& im : images) images[0].check_compatible(im);
    const Ambient& tamb = images[0].ambient();
    const Fq& tF = images[0].field();
    if (!(tF == F_) && F_.k() != 1)
        throw ParseError("substitute: lift coefficients to the target field first");
    Poly r(tamb, tF);
    // lazily grown power tables per variable
    std::vector<std::vector<Poly>> pows(order_.n);
    for (int i = 0; i < order_.n; ++i) pows[i].push_back(Poly::constant(tamb, tF, 1));
    for (auto& [m, c] : terms_) {
        Poly term = Poly::constant(tamb, tF, c);
        for (int i = 0; i < order_.n; ++i) {
            while ((int)pows[i].size() <= m.e[i]) pows[i].push_back(pows[i].back() * images[i]);
            if (m.e[i]) term = term * pows[i][m.e[i]];
        }
        r = r + term;
    }
    return r;
}

uint32_t Poly::eval(const std::vector<uint32_t>& x) const {
    if ((int)x.size() != order_.n) throw ParseError("eval: wrong number of coordinates");
    uint32_t acc = 0;
    for (auto& [m, c] : terms_) {
        uint32_t v = c;
        for (int i = 0; i < order_.n; ++i)
            if (m.e[i]) v = F_.mul(v, F_.pow(x[i], m.e[i]));
        acc = F_.add(acc, v);
    }
    return acc;
}

Poly Poly::lifted_to(const Fq& bigger) const {
    if (bigger == F_) return *this;
    Poly r(amb_, bigger);
    uint32_t root = 0;
    if (F_.k() >= 2) root = bigger.embed_from(F_, F_.gen());
    for (auto& [m, c] : terms_) {
        uint32_t img;
        if (F_.k() == 1) {
            img = c;
        } else {
            auto d = F_.digits(c);
            img = 0;
            for (int i = F_.k(); i-- > 0;)
                img = bigger.add(bigger.mul(img, root), bigger.from_int(d[i]));
        }
        r.terms_.emplace(m, img);
    }
    return r;
}

Poly Poly::constant(const Ambient& amb, const Fq& F, uint32_t c) {
    Poly r(amb, F);
    if (c) r.terms_.emplace(Monomial{}, c);
    return r;
}

Poly Poly::variable(const Ambient& amb, const Fq& F, int var) {
    Poly r(amb, F);
    Monomial m;
    m.e[var] = 1;
    r.terms_.emplace(m, 1);
    return r;
}

Poly Poly::monomial(const Ambient& amb, const Fq& F, const Monomial& m, uint32_t c) {
    Poly r(amb, F);
    if (c) r.terms_.emplace(m, c);
    return r;
}

Poly Poly::random_form(const Ambient& amb, const Fq& F, const std::vector<long>& deg,
                       SplitMix64& rng) {
    Poly r(amb, F);
    for (auto& m : amb.monomials_of_degree(deg)) {
        uint32_t c = F.random(rng);
        if (c) r.terms_.emplace(m, c);
    }
    return r;
}

// ------------------------------------------------------------------ parser

namespace {

struct Token {
    enum Kind { Num, Ident, Plus, Minus, Star, Caret, LPar, RPar, End } kind;
    long long num = 0;
    std::string ident;
};

struct Lexer {
    const std::string& s;
    size_t i = 0;
    explicit Lexer(const std::string& text) : s(text) {}
    Token next() {
        while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
        if (i >= s.size()) return {Token::End};
        char c = s[i];
        if (std::isdigit((unsigned char)c)) {
            long long v = 0;
            while (i < s.size() && std::isdigit((unsigned char)s[i])) {
                v = v * 10 + (s[i] - '0');
                if (v > (1ll << 40)) throw ParseError("numeric literal too large");
                ++i;
            }
            return {Token::Num, v, ""};
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            std::string id;
            while (i < s.size() && (std::isalnum((unsigned char)s[i]) || s[i] == '_'))
                id += s[i++];
            return {Token::Ident, 0, id};
        }
        ++i;
        switch (c) {
            case '+': return {Token::Plus};
            case '-': return {Token::Minus};
            case '*': return {Token::Star};
            case '^': return {Token::Caret};
            case '(': return {Token::LPar};
            case ')': return {Token::RPar};
        }
        throw ParseError(std::string("unexpected character '") + c + "' in polynomial");
    }
};

struct Parser {
    const Ambient& amb;
    const Fq& F;
    Lexer lex;
    Token tok;
    Parser(const Ambient& a, const Fq& f, const std::string& text) : amb(a), F(f), lex(text) {
        tok = lex.next();
    }
    void advance() { tok = lex.next(); }

    Poly parse_expr() {
        int sign = 1;
        if (tok.kind == Token::Plus || tok.kind == Token::Minus) {
            sign = tok.kind == Token::Minus ? -1 : 1;
            advance();
        }
        Poly acc = parse_term();
        if (sign < 0) acc = -acc;
        while (tok.kind == Token::Plus || tok.kind == Token::Minus) {
            int s2 = tok.kind == Token::Minus ? -1 : 1;
            advance();
            Poly t = parse_term();
            acc = s2 < 0 ? acc - t : acc + t;
        }
        return acc;
    }

    Poly parse_term() {
        Poly acc = parse_factor();
        while (true) {
            if (tok.kind == Token::Star) {
                advance();
                acc = acc * parse_factor();
            } else if (tok.kind == Token::Num || tok.kind == Token::Ident ||
                       tok.kind == Token::LPar) {
                acc = acc * parse_factor();  // juxtaposition
            } else {
                break;
            }
        }
        return acc;
    }

    Poly parse_factor() {
        Poly base = parse_base();
        if (tok.kind == Token::Caret) {
            advance();
            if (tok.kind != Token::Num) throw ParseError("expected exponent after '^'");
            long long e = tok.num;
            if (e < 0 || e > 60000) throw ParseError("exponent out of range");
            advance();
            return base.pow_binary((uint64_t)e);
        }
        return base;
    }

    Poly parse_base() {
        if (tok.kind == Token::Num) {
            Poly r = Poly::constant(amb, F, F.from_int(tok.num));
            advance();
            return r;
        }
        if (tok.kind == Token::LPar) {
            advance();
            Poly r = parse_expr();
            if (tok.kind != Token::RPar) throw ParseError("missing ')'");
            advance();
            return r;
        }
        if (tok.kind == Token::Ident) {
            for (int i = 0; i < amb.nvars(); ++i)
                if (amb.vars[i] == tok.ident) {
                    advance();
                    return Poly::variable(amb, F, i);
                }
            if (tok.ident == "t" && F.k() >= 2) {
                advance();
                return Poly::constant(amb, F, F.gen());
            }
            throw ParseError("unknown variable '" + tok.ident + "' in ambient " + amb.name);
        }
        throw ParseError("unexpected token in polynomial");
    }
};

}  // namespace

Poly Poly::parse(const Ambient& amb, const Fq& F, const std::string& text) {
    Parser p(amb, F, text);
    Poly r = p.parse_expr();
    if (p.tok.kind != Token::End) throw ParseError("trailing input in polynomial: " + text);
    return r;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!out.empty()) out += " + ";
        std::string cs = F_.to_string(it->second);
        std::string ms = monomial_str(amb_, it->first);
        if (ms == "1") {
            out += cs.find('+') != std::string::npos ? "(" + cs + ")" : cs;
        } else if (cs == "1") {
            out += ms;
        } else if (cs.find('+') != std::string::npos) {
            out += "(" + cs + ")*" + ms;
        } else {
            out += cs + "*" + ms;
        }
    }
    return out;
}

}  // namespace frobsurf
