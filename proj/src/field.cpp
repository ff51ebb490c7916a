#include "frobsurf/field.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <sstream>

namespace frobsurf {

std::string hex64(uint64_t v) {
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
    return std::string(buf);
}

namespace detail {

// ---------------------------------------------------------------------------
// digit-vector polynomial helpers over F_p (used to pick the modulus and to
// implement the generic multiplication path); a poly is coeffs[0..deg].

using DPoly = std::vector<uint32_t>;

static void dp_trim(DPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

static DPoly dp_mulmod(const DPoly& a, const DPoly& b, const DPoly& m, uint32_t p) {
    if (a.empty() || b.empty()) return {};
    DPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + (uint64_t)a[i] * b[j]) % p;
    // reduce by monic m
    size_t k = m.size() - 1;
    for (size_t i = c.size(); i-- > k;) {
        uint64_t v = c[i];
        if (!v) continue;
        c[i] = 0;
        for (size_t j = 0; j < k; ++j)
            c[i - k + j] = (c[i - k + j] + v * (p - m[j])) % p;
    }
    c.resize(std::min(c.size(), k));
    dp_trim(c);
    return c;
}

static DPoly dp_powmod(DPoly base, uint64_t e, const DPoly& m, uint32_t p) {
    DPoly r{1};
    while (e) {
        if (e & 1) r = dp_mulmod(r, base, m, p);
        base = dp_mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

static DPoly dp_gcd(DPoly a, DPoly b, uint32_t p) {
    auto inv_mod_p = [p](uint32_t x) {
        uint32_t r = 1, e = p - 2, base = x;
        while (e) {
            if (e & 1) r = (uint64_t)r * base % p;
            base = (uint64_t)base * base % p;
            e >>= 1;
        }
        return r;
    };
    dp_trim(a);
    dp_trim(b);
    while (!b.empty()) {
        // a mod b
        uint32_t lead_inv = inv_mod_p(b.back());
        while (a.size() >= b.size()) {
            uint64_t f = (uint64_t)a.back() * lead_inv % p;
            if (f) {
                size_t off = a.size() - b.size();
                for (size_t j = 0; j < b.size(); ++j)
                    a[off + j] = (a[off + j] + (p - (uint32_t)(f * b[j] % p))) % p;
            }
            a.pop_back();
            dp_trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a;
}

static bool is_prime_u32(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// irreducibility of monic m of degree k over F_p, k <= 4:
// t^{p^k} == t (mod m) and gcd(t^{p^{k/r}} - t, m) = 1 for prime r | k.
static bool dp_irreducible(const DPoly& m, uint32_t p) {
    size_t k = m.size() - 1;
    DPoly t{0, 1};
    DPoly u = t;
    std::vector<DPoly> frob_pows(k + 1);  // frob_pows[j] = t^{p^j} mod m
    frob_pows[0] = t;
    for (size_t j = 1; j <= k; ++j) frob_pows[j] = dp_powmod(frob_pows[j - 1], p, m, p);
    DPoly diff = frob_pows[k];
    // t^{p^k} - t == 0 ?
    DPoly d = diff;
    if (d.size() < 2) d.resize(2, 0);
    d[1] = (d[1] + p - 1) % p;
    dp_trim(d);
    if (!d.empty()) return false;
    for (size_t r : {size_t(2), size_t(3)}) {
        if (k % r != 0 || k / r == 0) continue;
        if (r == k) continue;  // handled by the root-free check below via j = 1? no: k/r
        DPoly g = frob_pows[k / r];
        if (g.size() < 2) g.resize(2, 0);
        g[1] = (g[1] + p - 1) % p;
        dp_trim(g);
        DPoly gc = dp_gcd(g, m, p);
        if (!(gc.size() == 1)) return false;
    }
    // for prime k the loop above is empty; t^{p^k}=t plus deg k prime means
    // m is a product of irreducibles of degree dividing k, i.e. degree 1 or k;
    // exclude linear factors explicitly:
    if (k == 2 || k == 3) {
        DPoly g = frob_pows[1];
        if (g.size() < 2) g.resize(2, 0);
        g[1] = (g[1] + p - 1) % p;
        dp_trim(g);
        DPoly gc = dp_gcd(g, m, p);
        if (gc.size() != 1) return false;
    }
    return true;
}

struct FieldData {
    uint32_t p = 0;
    int k = 1;
    uint64_t q = 0;
    std::array<uint32_t, 5> mod{};  // m_0..m_k
    // discrete-log tables when q <= 2^16 and k >= 2
    std::vector<uint32_t> logt, expt;
    bool tables = false;

    std::array<uint32_t, 4> unpack(uint32_t a) const {
        std::array<uint32_t, 4> d{};
        for (int i = 0; i < k; ++i) {
            d[i] = a % p;
            a /= p;
        }
        return d;
    }
    uint32_t pack(const std::array<uint32_t, 4>& d) const {
        uint32_t a = 0;
        for (int i = k; i-- > 0;) a = a * p + d[i];
        return a;
    }

    uint32_t add(uint32_t a, uint32_t b) const {
        if (k == 1) {
            uint32_t s = a + b;
            return s >= p ? s - p : s;
        }
        auto da = unpack(a), db = unpack(b);
        for (int i = 0; i < k; ++i) {
            da[i] += db[i];
            if (da[i] >= p) da[i] -= p;
        }
        return pack(da);
    }
    uint32_t neg(uint32_t a) const {
        if (k == 1) return a ? p - a : 0;
        auto d = unpack(a);
        for (int i = 0; i < k; ++i)
            if (d[i]) d[i] = p - d[i];
        return pack(d);
    }
    uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }

    uint32_t mul_generic(uint32_t a, uint32_t b) const {
        auto da = unpack(a), db = unpack(b);
        std::array<uint64_t, 7> c{};
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) c[i + j] += (uint64_t)da[i] * db[j];
        for (int i = 2 * k - 2; i >= k; --i) {
            uint64_t v = c[i] % p;
            c[i] = 0;
            if (!v) continue;
            for (int j = 0; j < k; ++j) c[i - k + j] += v * (p - mod[j]);
        }
        std::array<uint32_t, 4> r{};
        for (int i = 0; i < k; ++i) r[i] = (uint32_t)(c[i] % p);
        return pack(r);
    }

    uint32_t mul(uint32_t a, uint32_t b) const {
        if (k == 1) return (uint32_t)((uint64_t)a * b % p);
        if (!a || !b) return 0;
        if (tables) {
            uint32_t s = logt[a] + logt[b];
            uint32_t n = (uint32_t)(q - 1);
            if (s >= n) s -= n;
            return expt[s];
        }
        return mul_generic(a, b);
    }

    uint32_t pow(uint32_t a, uint64_t e) const {
        if (e == 0) return 1;
        if (!a) return 0;
        uint64_t n = q - 1;
        e %= n;
        if (e == 0) return 1;
        if (tables && k >= 2) return expt[(uint32_t)((uint64_t)logt[a] * (e % n) % n)];
        uint32_t r = 1, base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    uint32_t inv(uint32_t a) const {
        if (!a) throw ResourceError("division by zero in F_q");
        if (k == 1) {
            // Fermat
            uint32_t r = 1, base = a, e = p - 2;
            while (e) {
                if (e & 1) r = (uint64_t)r * base % p;
                base = (uint64_t)base * base % p;
                e >>= 1;
            }
            return r;
        }
        if (tables) return a == 0 ? 0 : expt[(q - 1 - logt[a]) % (q - 1)];
        return pow(a, q - 2);
    }
};

}  // namespace detail

using detail::FieldData;

static std::shared_ptr<const FieldData> make_field(uint32_t p, int k) {
    if (!detail::is_prime_u32(p) || p > 251)
        throw ParseError("field characteristic must be a prime <= 251, got " + std::to_string(p));
    if (k < 1 || k > 4) throw ParseError("field extension degree must be 1..4");
    auto d = std::make_shared<FieldData>();
    d->p = p;
    d->k = k;
    d->q = 1;
    for (int i = 0; i < k; ++i) d->q *= p;
    if (k == 1) {
        d->mod = {0, 1, 0, 0, 0};  // m(t) = t, elements are plain residues
        return d;
    }
    // canonical modulus: smallest packed coefficient vector giving an
    // irreducible monic t^k + c_{k-1} t^{k-1} + ... + c_0
    bool found = false;
    for (uint64_t idx = 0; idx < d->q && !found; ++idx) {
        detail::DPoly m(k + 1, 0);
        uint64_t v = idx;
        for (int i = 0; i < k; ++i) {
            m[i] = (uint32_t)(v % p);
            v /= p;
        }
        m[k] = 1;
        if (detail::dp_irreducible(m, p)) {
            for (int i = 0; i <= k; ++i) d->mod[i] = m[i];
            found = true;
        }
    }
    if (!found) throw ResourceError("no irreducible modulus found (unreachable)");
    if (d->q <= (1u << 16)) {
        // build exp/log tables on a generator
        uint64_t n = d->q - 1;
        std::vector<uint64_t> prime_factors;
        uint64_t m = n;
        for (uint64_t f = 2; f * f <= m; ++f)
            if (m % f == 0) {
                prime_factors.push_back(f);
                while (m % f == 0) m /= f;
            }
        if (m > 1) prime_factors.push_back(m);
        uint32_t g = 0;
        for (uint32_t cand = 1; cand < d->q; ++cand) {
            bool ok = true;
            for (uint64_t f : prime_factors) {
                // order check without tables: repeated generic mul
                uint64_t e = n / f;
                uint32_t r = 1, base = cand;
                while (e) {
                    if (e & 1) r = d->mul_generic(r, base);
                    base = d->mul_generic(base, base);
                    e >>= 1;
                }
                if (r == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                g = cand;
                break;
            }
        }
        d->expt.resize(n);
        d->logt.assign(d->q, 0);
        uint32_t cur = 1;
        for (uint64_t i = 0; i < n; ++i) {
            d->expt[i] = cur;
            d->logt[cur] = (uint32_t)i;
            cur = d->mul_generic(cur, g);
        }
        d->tables = true;
    }
    return d;
}

static std::shared_ptr<const FieldData> cached_field(uint32_t p, int k) {
    static std::mutex mu;
    static std::map<std::pair<uint32_t, int>, std::shared_ptr<const FieldData>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto d = make_field(p, k);
    cache[key] = d;
    return d;
}

Fq Fq::prime(uint32_t p) { return Fq(cached_field(p, 1)); }
Fq Fq::ext(uint32_t p, int k) { return Fq(cached_field(p, k)); }

uint32_t Fq::p() const { return d_->p; }
int Fq::k() const { return d_->k; }
uint64_t Fq::q() const { return d_->q; }
bool Fq::operator==(const Fq& o) const { return d_->p == o.d_->p && d_->k == o.d_->k; }

std::vector<uint32_t> Fq::modulus() const {
    return std::vector<uint32_t>(d_->mod.begin(), d_->mod.begin() + d_->k + 1);
}

uint32_t Fq::add(uint32_t a, uint32_t b) const { return d_->add(a, b); }
uint32_t Fq::sub(uint32_t a, uint32_t b) const { return d_->sub(a, b); }
uint32_t Fq::neg(uint32_t a) const { return d_->neg(a); }
uint32_t Fq::mul(uint32_t a, uint32_t b) const { return d_->mul(a, b); }
uint32_t Fq::inv(uint32_t a) const { return d_->inv(a); }
uint32_t Fq::pow(uint32_t a, uint64_t e) const { return d_->pow(a, e); }

uint32_t Fq::frob(uint32_t a, int e) const {
    uint32_t r = a;
    for (int i = 0; i < e; ++i) r = d_->pow(r, d_->p);
    return r;
}

uint32_t Fq::from_int(long long v) const {
    long long m = v % (long long)d_->p;
    if (m < 0) m += d_->p;
    return (uint32_t)m;
}

uint32_t Fq::gen() const {
    if (d_->k < 2) throw ParseError("generator t only exists in proper extensions");
    return d_->p;  // packed (0,1,0,...) = t
}

std::array<uint32_t, 4> Fq::digits(uint32_t a) const { return d_->unpack(a); }

bool Fq::in_subfield(uint32_t a, int j) const {
    if (d_->k % j != 0) return false;
    uint64_t pj = 1;
    for (int i = 0; i < j; ++i) pj *= d_->p;
    return d_->pow(a, pj) == a;
}

uint32_t Fq::embed_from(const Fq& sub, uint32_t a) const {
    if (*this == sub) return a;
    if (d_->k % sub.k() != 0 || d_->p != sub.p())
        throw ParseError("no embedding between these fields");
    if (sub.k() == 1) return a;  // prime subfield is the same residues
    if (d_->q > (1ull << 21)) throw ResourceError("field too large for embedding search");
    // canonical root: smallest packed b with m_sub(b) = 0 in this field
    auto msub = sub.modulus();
    uint32_t root = 0;
    bool found = false;
    for (uint32_t b = 0; b < d_->q; ++b) {
        uint32_t acc = 0;
        for (size_t i = msub.size(); i-- > 0;) acc = add(mul(acc, b), from_int(msub[i]));
        if (acc == 0) {
            root = b;
            found = true;
            break;
        }
    }
    if (!found) throw ParseError("subfield modulus has no root; incompatible fields");
    auto digs = sub.digits(a);
    uint32_t acc = 0;
    for (int i = sub.k(); i-- > 0;) acc = add(mul(acc, root), from_int(digs[i]));
    return acc;
}

std::string Fq::to_string(uint32_t a) const {
    if (d_->k == 1 || a < d_->p) return std::to_string(a);
    auto d = d_->unpack(a);
    std::string out;
    for (int i = d_->k; i-- > 0;) {
        if (!d[i]) continue;
        if (!out.empty()) out += "+";
        if (i == 0) {
            out += std::to_string(d[i]);
        } else {
            if (d[i] != 1) out += std::to_string(d[i]) + "*";
            out += "t";
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out.empty() ? "0" : out;
}

uint32_t Fq::parse(const std::string& s) const {
    // tiny parser for sums of  [c][*][t[^e]]  terms with optional signs
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
    };
    uint32_t acc = 0;
    skip_ws();
    if (i == s.size()) throw ParseError("empty field element");
    bool first = true;
    while (true) {
        skip_ws();
        if (i == s.size()) break;
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            throw ParseError("expected '+' or '-' in field element: " + s);
        }
        first = false;
        skip_ws();
        long long coeff = 1;
        bool saw_digits = false;
        if (i < s.size() && std::isdigit((unsigned char)s[i])) {
            coeff = 0;
            while (i < s.size() && std::isdigit((unsigned char)s[i]))
                coeff = coeff * 10 + (s[i++] - '0');
            saw_digits = true;
        }
        skip_ws();
        if (i < s.size() && s[i] == '*') {
            ++i;
            skip_ws();
        }
        int texp = 0;
        if (i < s.size() && s[i] == 't') {
            ++i;
            texp = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                if (i >= s.size() || !std::isdigit((unsigned char)s[i]))
                    throw ParseError("bad exponent in field element: " + s);
                texp = 0;
                while (i < s.size() && std::isdigit((unsigned char)s[i]))
                    texp = texp * 10 + (s[i++] - '0');
            }
        } else if (!saw_digits) {
            throw ParseError("bad term in field element: " + s);
        }
        if (texp >= d_->k && !(texp == 0))
            throw ParseError("element uses t^" + std::to_string(texp) + " in degree-" +
                             std::to_string(d_->k) + " extension");
        uint32_t term = from_int(sign * coeff);
        for (int j = 0; j < texp; ++j) term = mul(term, gen());
        acc = add(acc, term);
        skip_ws();
    }
    return acc;
}

uint32_t Fq::random(SplitMix64& rng) const { return (uint32_t)rng.below(d_->q); }
uint32_t Fq::random_nonzero(SplitMix64& rng) const { return 1 + (uint32_t)rng.below(d_->q - 1); }

}  // namespace frobsurf
