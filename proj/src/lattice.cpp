#include "frobsurf/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace frobsurf {

bool PicClass::operator<(const PicClass& o) const {
    if (d != o.d) return d < o.d;
    return m < o.m;
}

long inner(const PicClass& a, const PicClass& b) {
    long s = (long)a.d * b.d;
    for (int i = 0; i < a.n; ++i) s -= (long)a.m[i] * b.m[i];
    return s;
}

PicClass canonical_class(int n) {
    PicClass k;
    k.d = -3;
    k.n = n;
    for (int i = 0; i < n; ++i) k.m[i] = -1;
    return k;
}

std::string class_str(const PicClass& c) {
    std::string s = "(" + std::to_string(c.d) + ";";
    for (int i = 0; i < c.n; ++i) s += (i ? "," : " ") + std::to_string(c.m[i]);
    return s + ")";
}

PicClass neg(const PicClass& a) {
    PicClass r = a;
    r.d = -r.d;
    for (int i = 0; i < a.n; ++i) r.m[i] = -r.m[i];
    return r;
}

PicClass add(const PicClass& a, const PicClass& b) {
    PicClass r = a;
    r.d += b.d;
    for (int i = 0; i < a.n; ++i) r.m[i] += b.m[i];
    return r;
}

PicClass sub(const PicClass& a, const PicClass& b) { return add(a, neg(b)); }

bool is_minus1_class(const PicClass& c) {
    return inner(c, c) == -1 && inner(canonical_class(c.n), c) == -1;
}

bool is_root(const PicClass& c) {
    return inner(c, c) == -2 && inner(canonical_class(c.n), c) == 0;
}

// ------------------------------------------------------- direct enumerators

namespace {

// enumerate m-vectors with sum(m) = s_target, sum(m^2) = q_target
void enum_m(int pos, int n, long s_left, long q_left, PicClass& cur,
            std::vector<PicClass>& out) {
    if (pos == n) {
        if (s_left == 0 && q_left == 0) out.push_back(cur);
        return;
    }
    if (q_left < 0) return;
    int rem = n - pos;
    // Cauchy-Schwarz feasibility for what is left
    if ((long)s_left * s_left > (long)rem * q_left) return;
    long bound = (long)std::sqrt((double)q_left) + 1;
    for (long v = -bound; v <= bound; ++v) {
        if (v * v > q_left) continue;
        cur.m[pos] = (int)v;
        enum_m(pos + 1, n, s_left - v, q_left - v * v, cur, out);
    }
    cur.m[pos] = 0;
}

}  // namespace

std::vector<PicClass> classes_by_sums(int n, int sum_offset, int sq_offset, int dmin,
                                      int dmax) {
    // classes with sum m = 3d + sum_offset, sum m^2 = d^2 + sq_offset
    std::vector<PicClass> out;
    for (int d = dmin; d <= dmax; ++d) {
        long s = 3l * d + sum_offset;
        long q = (long)d * d + sq_offset;
        if (q < 0) continue;
        if ((long)s * s > (long)n * q) continue;  // Cauchy-Schwarz over all n slots
        PicClass cur;
        cur.d = d;
        cur.n = n;
        enum_m(0, n, s, q, cur, out);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<PicClass> minus1_classes(int n) {
    if (n < 1 || n > 8) throw ParseError("minus1_classes: n must be 1..8");
    return classes_by_sums(n, -1, 1);
}

std::vector<PicClass> root_classes(int n) {
    if (n < 0 || n > 8) throw ParseError("root_classes: n must be 0..8");
    if (n == 0) return {};
    return classes_by_sums(n, 0, 2);
}

// ----------------------------------------------------------- Weyl oracles

namespace {

std::vector<PicClass> simple_roots(int n) {
    std::vector<PicClass> s;
    if (n >= 3) {
        PicClass a0;
        a0.d = 1;
        a0.n = n;
        a0.m[0] = a0.m[1] = a0.m[2] = 1;
        s.push_back(a0);
    }
    for (int i = 0; i + 1 < n; ++i) {
        PicClass a;
        a.d = 0;
        a.n = n;
        a.m[i] = -1;
        a.m[i + 1] = 1;
        s.push_back(a);
    }
    return s;
}

PicClass reflect(const PicClass& x, const PicClass& a) {
    // s_a(x) = x + (x.a) a   (a^2 = -2)
    long c = inner(x, a);
    PicClass r = x;
    r.d += (int)(c * a.d);
    for (int i = 0; i < x.n; ++i) r.m[i] += (int)(c * a.m[i]);
    return r;
}

std::vector<PicClass> weyl_orbit(int n, const std::vector<PicClass>& seeds) {
    auto simples = simple_roots(n);
    std::set<PicClass> seen(seeds.begin(), seeds.end());
    std::vector<PicClass> work(seeds.begin(), seeds.end());
    while (!work.empty()) {
        PicClass x = work.back();
        work.pop_back();
        for (auto& a : simples) {
            PicClass y = reflect(x, a);
            if (seen.insert(y).second) work.push_back(y);
        }
    }
    return std::vector<PicClass>(seen.begin(), seen.end());
}

}  // namespace

std::vector<PicClass> minus1_classes_weyl(int n) {
    if (n < 1 || n > 8) throw ParseError("minus1_classes_weyl: n must be 1..8");
    std::vector<PicClass> seeds;
    PicClass en;
    en.d = 0;
    en.n = n;
    en.m[n - 1] = -1;
    seeds.push_back(en);  // class of e_n
    if (n >= 2) {
        PicClass l12;
        l12.d = 1;
        l12.n = n;
        l12.m[0] = l12.m[1] = 1;
        seeds.push_back(l12);  // line through the first two points
    }
    return weyl_orbit(n, seeds);
}

std::vector<PicClass> root_classes_weyl(int n) {
    if (n < 0 || n > 8) throw ParseError("root_classes_weyl: n must be 0..8");
    if (n < 2) return {};
    PicClass a;
    a.d = 0;
    a.n = n;
    a.m[0] = -1;
    a.m[1] = 1;
    return weyl_orbit(n, {a});
}

// --------------------------------------------------- ADE classification

int RootDiagnosis::total_rank() const {
    int r = 0;
    for (auto& c : comps) r += c.rank;
    return r;
}

std::string RootDiagnosis::name() const {
    if (comps.empty()) return "0";
    std::string out;
    size_t i = 0;
    while (i < comps.size()) {
        size_t j = i;
        while (j < comps.size() && comps[j].type == comps[i].type &&
               comps[j].rank == comps[i].rank)
            ++j;
        if (!out.empty()) out += "+";
        if (j - i > 1) out += std::to_string(j - i);
        out += comps[i].type + std::to_string(comps[i].rank);
        i = j;
    }
    return out;
}

RootDiagnosis classify_root_subsystem(int n, const std::vector<PicClass>& roots) {
    for (auto& r : roots)
        if (r.n != n || !is_root(r)) throw ParseError("classify_root_subsystem: not a root");
    RootDiagnosis diag;
    if (roots.empty()) return diag;

    // closure of {roots, -roots} under its own reflections
    std::set<PicClass> R;
    std::vector<PicClass> work;
    for (auto& r : roots) {
        if (R.insert(r).second) work.push_back(r);
        PicClass nr = neg(r);
        if (R.insert(nr).second) work.push_back(nr);
    }
    while (!work.empty()) {
        PicClass x = work.back();
        work.pop_back();
        std::vector<PicClass> cur(R.begin(), R.end());
        for (auto& a : cur) {
            PicClass y = reflect(x, a);
            if (R.insert(y).second) work.push_back(y);
            PicClass z = reflect(a, x);
            if (R.insert(z).second) work.push_back(z);
        }
    }

    // positive system by lex on (d, m)
    auto positive = [](const PicClass& x) {
        if (x.d != 0) return x.d > 0;
        for (int i = 0; i < x.n; ++i)
            if (x.m[i] != 0) return x.m[i] > 0;
        return false;
    };
    std::vector<PicClass> pos;
    for (auto& r : R)
        if (positive(r)) pos.push_back(r);

    // simple = positive, not a sum of two positives
    std::set<PicClass> posset(pos.begin(), pos.end());
    std::vector<PicClass> simples;
    for (auto& r : pos) {
        bool decomposable = false;
        for (auto& a : pos) {
            if (decomposable) break;
            PicClass b = sub(r, a);
            if (posset.count(b) && !(b == r)) decomposable = true;
        }
        if (!decomposable) simples.push_back(r);
    }

    // Dynkin graph: adjacency iff inner product 1
    int ns = (int)simples.size();
    std::vector<std::vector<int>> adj(ns);
    for (int i = 0; i < ns; ++i)
        for (int j = i + 1; j < ns; ++j) {
            long ip = inner(simples[i], simples[j]);
            if (ip == 1) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            } else if (ip != 0) {
                throw ParseError("unexpected Dynkin angle between simple roots");
            }
        }

    // connected components -> ADE shapes
    std::vector<int> comp(ns, -1);
    int nc = 0;
    for (int i = 0; i < ns; ++i) {
        if (comp[i] != -1) continue;
        std::vector<int> stack{i};
        comp[i] = nc;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (comp[w] == -1) {
                    comp[w] = nc;
                    stack.push_back(w);
                }
        }
        ++nc;
    }
    for (int c = 0; c < nc; ++c) {
        std::vector<int> nodes;
        for (int i = 0; i < ns; ++i)
            if (comp[i] == c) nodes.push_back(i);
        int size = (int)nodes.size();
        int branch = -1, edges = 0;
        bool bad = false;
        for (int v : nodes) {
            edges += (int)adj[v].size();
            if (adj[v].size() == 3) {
                if (branch != -1) bad = true;
                branch = v;
            } else if (adj[v].size() > 3) {
                bad = true;
            }
        }
        edges /= 2;
        if (bad || edges != size - 1)
            throw ParseError("root subsystem component is not an ADE tree");
        RootComponent rc;
        rc.rank = size;
        if (branch == -1) {
            rc.type = 'A';
        } else {
            // leg lengths from the branch node
            std::vector<int> legs;
            for (int s0 : adj[branch]) {
                int len = 1, prev = branch, cur = s0;
                while (true) {
                    int next = -1;
                    for (int w : adj[cur])
                        if (w != prev) next = w;
                    if (next == -1) break;
                    prev = cur;
                    cur = next;
                    ++len;
                }
                legs.push_back(len);
            }
            std::sort(legs.begin(), legs.end());
            if (legs[0] == 1 && legs[1] == 1)
                rc.type = 'D';
            else if (legs[0] == 1 && legs[1] == 2 && legs[2] >= 2 && legs[2] <= 4)
                rc.type = 'E';
            else
                throw ParseError("root subsystem component is not an ADE tree");
        }
        diag.comps.push_back(rc);
    }
    std::sort(diag.comps.begin(), diag.comps.end(), [](const RootComponent& a, const RootComponent& b) {
        if (a.rank != b.rank) return a.rank > b.rank;
        return a.type > b.type;
    });
    return diag;
}

bool sfr_component_ok(char type, int rank, uint32_t p) {
    switch (type) {
        case 'A': return true;
        case 'D': return p > 2;
        case 'E': return rank == 8 ? p > 5 : p > 3;
    }
    throw ParseError("unknown component type");
}

bool sfr_all_components(const RootDiagnosis& diag, uint32_t p) {
    for (auto& c : diag.comps)
        if (!sfr_component_ok(c.type, c.rank, p)) return false;
    return true;
}

bool sfr_uniform_bound(int K2, uint32_t p) {
    return p > 5 || (K2 >= 2 && p > 3) || (K2 >= 4 && p > 2) || K2 >= 5;
}

bool realizable_on_del_pezzo(int K2, const RootDiagnosis& diag) {
    if (K2 < 1 || K2 > 9) return false;
    if (diag.total_rank() > 9 - K2) return false;
    if (K2 >= 5)
        for (auto& c : diag.comps)
            if (c.type != 'A') return false;
    return true;
}

std::vector<LatticeCounts> lattice_count_table(bool use_weyl_oracle) {
    std::vector<LatticeCounts> t;
    for (int n = 1; n <= 8; ++n) {
        LatticeCounts row;
        row.n = n;
        if (use_weyl_oracle) {
            row.minus1 = minus1_classes_weyl(n).size();
            row.roots = root_classes_weyl(n).size();
        } else {
            row.minus1 = minus1_classes(n).size();
            row.roots = root_classes(n).size();
        }
        t.push_back(row);
    }
    return t;
}

}  // namespace frobsurf
