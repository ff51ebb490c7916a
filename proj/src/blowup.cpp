#include "frobsurf/blowup.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "frobsurf/fedder.hpp"

namespace frobsurf {

namespace {

const Ambient& chart_ambient() { return Ambient::by_name("A2"); }

// ---------------------------------------------------- linear algebra over Fq

// Row echelon rank; destroys the matrix.
int matrix_rank(std::vector<std::vector<uint32_t>> M, const Fq& F) {
    if (M.empty()) return 0;
    size_t cols = M[0].size();
    int rank = 0;
    size_t row = 0;
    for (size_t col = 0; col < cols && row < M.size(); ++col) {
        size_t piv = row;
        while (piv < M.size() && M[piv][col] == 0) ++piv;
        if (piv == M.size()) continue;
        std::swap(M[row], M[piv]);
        uint32_t ipv = F.inv(M[row][col]);
        for (size_t j = col; j < cols; ++j) M[row][j] = F.mul(M[row][j], ipv);
        for (size_t r = 0; r < M.size(); ++r) {
            if (r == row || M[r][col] == 0) continue;
            uint32_t f = M[r][col];
            for (size_t j = col; j < cols; ++j)
                M[r][j] = F.sub(M[r][j], F.mul(f, M[row][j]));
        }
        ++row;
        ++rank;
    }
    return rank;
}

// Basis of the right kernel {x : Mx = 0}.
std::vector<std::vector<uint32_t>> kernel_basis(std::vector<std::vector<uint32_t>> M,
                                                size_t cols, const Fq& F) {
    std::vector<int> pivot_of_col(cols, -1);
    size_t row = 0;
    for (size_t col = 0; col < cols && row < M.size(); ++col) {
        size_t piv = row;
        while (piv < M.size() && M[piv][col] == 0) ++piv;
        if (piv == M.size()) continue;
        std::swap(M[row], M[piv]);
        uint32_t ipv = F.inv(M[row][col]);
        for (size_t j = 0; j < cols; ++j) M[row][j] = F.mul(M[row][j], ipv);
        for (size_t r = 0; r < M.size(); ++r) {
            if (r == row || M[r][col] == 0) continue;
            uint32_t f = M[r][col];
            for (size_t j = 0; j < cols; ++j) M[r][j] = F.sub(M[r][j], F.mul(f, M[row][j]));
        }
        pivot_of_col[col] = (int)row;
        ++row;
    }
    std::vector<std::vector<uint32_t>> basis;
    for (size_t free_col = 0; free_col < cols; ++free_col) {
        if (pivot_of_col[free_col] >= 0) continue;
        std::vector<uint32_t> v(cols, 0);
        v[free_col] = 1;
        for (size_t col = 0; col < cols; ++col) {
            int pr = pivot_of_col[col];
            if (pr >= 0) v[col] = F.neg(M[pr][free_col]);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

long mult_at_origin(const Poly& f) {
    if (f.is_zero()) throw ParseError("multiplicity of the zero polynomial");
    long best = -1;
    for (const auto& [m, c] : f.terms()) {
        long d = (long)m.e[0] + m.e[1];
        if (best < 0 || d < best) best = d;
    }
    return best;
}

bool vanishes_at_origin(const Poly& f) {
    Monomial one{};
    return f.coeff(one) == 0;
}

// Normalise projective coordinates: scale so the last nonzero entry is 1.
std::vector<uint32_t> normalize_proj(const Fq& F, std::vector<uint32_t> c) {
    int last = -1;
    for (int i = 0; i < (int)c.size(); ++i)
        if (c[i] != 0) last = i;
    if (last < 0) throw ParseError("projective point with all coordinates zero");
    uint32_t s = F.inv(c[last]);
    for (auto& x : c) x = F.mul(x, s);
    return c;
}

std::array<uint32_t, 2> normalize_dir(const Fq& F, std::array<uint32_t, 2> d) {
    if (d[0] != 0) {
        uint32_t s = F.inv(d[0]);
        return {1, F.mul(d[1], s)};
    }
    if (d[1] == 0) throw ParseError("direction with both coordinates zero");
    return {0, 1};
}

}  // namespace

// ------------------------------------------------------------------ PointTree

int PointTree::depth_of(int i) const {
    int d = 0;
    while (nodes[i].parent >= 0) {
        i = nodes[i].parent;
        ++d;
    }
    return d;
}

std::string PointTree::canonical_string() const {
    std::ostringstream os;
    os << base << ";p=" << F.p() << ";k=" << F.k() << ";";
    for (size_t i = 0; i < nodes.size(); ++i) {
        const TreeNode& nd = nodes[i];
        os << "[" << nd.parent << ":";
        if (nd.parent < 0) {
            auto pt = normalize_proj(F, nd.point);
            if (base == "P1xP1") {
                auto fx = normalize_proj(F, {nd.point[0], nd.point[1]});
                auto fy = normalize_proj(F, {nd.point[2], nd.point[3]});
                pt = {fx[0], fx[1], fy[0], fy[1]};
            }
            for (uint32_t c : pt) os << " " << c;
        } else {
            auto d = normalize_dir(F, nd.dir);
            os << " " << d[0] << " " << d[1];
        }
        os << "]";
    }
    return os.str();
}

void validate_tree(const PointTree& tree) {
    if (tree.base != "P2" && tree.base != "P1xP1")
        throw ParseError("tree base must be P2 or P1xP1");
    int n = tree.n();
    if (n < 1) throw ParseError("a point tree needs at least one node");
    int maxn = tree.base == "P2" ? 8 : 7;
    if (n > maxn)
        throw ParseError("too many points: K^2 would drop below 1 (at most " +
                         std::to_string(maxn) + " on " + tree.base + ")");
    size_t coords = tree.base == "P2" ? 3 : 4;
    for (int i = 0; i < n; ++i) {
        const TreeNode& nd = tree.nodes[i];
        if (nd.parent >= i)
            throw ParseError("node " + std::to_string(i + 1) + ": parent must come earlier");
        if (nd.parent < 0) {
            if (nd.point.size() != coords)
                throw ParseError("node " + std::to_string(i + 1) + ": expected " +
                                 std::to_string(coords) + " coordinates on " + tree.base);
            for (uint32_t c : nd.point)
                if (c >= tree.F.q())
                    throw ParseError("node " + std::to_string(i + 1) +
                                     ": coordinate outside the field");
            if (tree.base == "P2") {
                normalize_proj(tree.F, nd.point);  // throws on the zero tuple
            } else {
                normalize_proj(tree.F, {nd.point[0], nd.point[1]});
                normalize_proj(tree.F, {nd.point[2], nd.point[3]});
            }
        } else {
            if (nd.dir[0] >= tree.F.q() || nd.dir[1] >= tree.F.q())
                throw ParseError("node " + std::to_string(i + 1) +
                                 ": direction outside the field");
            normalize_dir(tree.F, nd.dir);
        }
        if (tree.depth_of(i) > 3)
            throw ParseError("chains of more than 4 infinitely near points are outside "
                             "the classification range");
    }
    // distinct roots
    for (int i = 0; i < n; ++i) {
        if (tree.nodes[i].parent >= 0) continue;
        for (int j = i + 1; j < n; ++j) {
            if (tree.nodes[j].parent >= 0) continue;
            bool same;
            if (tree.base == "P2") {
                same = normalize_proj(tree.F, tree.nodes[i].point) ==
                       normalize_proj(tree.F, tree.nodes[j].point);
            } else {
                const auto &a = tree.nodes[i].point, &b = tree.nodes[j].point;
                same = normalize_proj(tree.F, {a[0], a[1]}) ==
                           normalize_proj(tree.F, {b[0], b[1]}) &&
                       normalize_proj(tree.F, {a[2], a[3]}) ==
                           normalize_proj(tree.F, {b[2], b[3]});
            }
            if (same)
                throw ParseError("nodes " + std::to_string(i + 1) + " and " +
                                 std::to_string(j + 1) + " are the same point");
        }
    }
    // distinct sibling directions
    for (int i = 0; i < n; ++i) {
        if (tree.nodes[i].parent < 0) continue;
        for (int j = i + 1; j < n; ++j) {
            if (tree.nodes[j].parent != tree.nodes[i].parent) continue;
            if (normalize_dir(tree.F, tree.nodes[i].dir) ==
                normalize_dir(tree.F, tree.nodes[j].dir))
                throw ParseError("nodes " + std::to_string(i + 1) + " and " +
                                 std::to_string(j + 1) +
                                 " are the same direction at their parent");
        }
    }
}

// -------------------------------------------------------------- TreeGeometry

TreeGeometry::TreeGeometry(const PointTree& tree) : tree_(tree) {
    validate_tree(tree_);
    const Fq& F = tree_.F;
    const Ambient& A2 = chart_ambient();
    int n = tree_.n();
    frames_.reserve(n);
    pullback_cache_.resize(n);

    Poly s = Poly::variable(A2, F, 0);
    Poly t = Poly::variable(A2, F, 1);

    // per-node strict equations of the older exceptionals through the node
    std::vector<std::vector<std::pair<int, Poly>>> curves(n);

    for (int i = 0; i < n; ++i) {
        const TreeNode& nd = tree_.nodes[i];
        Frame fr;
        if (nd.parent < 0) {
            // root chart: translate the point to the origin of an affine patch
            if (tree_.base == "P2") {
                auto pt = normalize_proj(F, nd.point);
                int piv = 2;
                while (pt[piv] == 0) --piv;
                int free_var = 0;
                for (int j = 0; j < 3; ++j) {
                    if (j == piv) {
                        fr.base_images.push_back(Poly::constant(A2, F, 1));
                    } else {
                        Poly coord = Poly::variable(A2, F, free_var++);
                        fr.base_images.push_back(Poly::constant(A2, F, pt[j]) + coord);
                    }
                }
            } else {
                auto fx = normalize_proj(F, {nd.point[0], nd.point[1]});
                auto fy = normalize_proj(F, {nd.point[2], nd.point[3]});
                int pivx = fx[1] != 0 ? 1 : 0;
                int pivy = fy[1] != 0 ? 1 : 0;
                fr.base_images.resize(4, Poly::zero(A2, F));
                for (int j = 0; j < 2; ++j)
                    fr.base_images[j] = j == pivx
                                            ? Poly::constant(A2, F, 1)
                                            : Poly::constant(A2, F, fx[j]) + s;
                for (int j = 0; j < 2; ++j)
                    fr.base_images[2 + j] = j == pivy
                                                ? Poly::constant(A2, F, 1)
                                                : Poly::constant(A2, F, fy[j]) + t;
            }
            fr.jac = Poly::constant(A2, F, 1);
            fr.k = 1;
        } else {
            const Frame& par = frames_[nd.parent];
            auto dir = normalize_dir(F, nd.dir);
            // step substitution: old frame coordinates as polys in the new ones
            std::vector<Poly> psi(2, Poly::zero(A2, F));
            Poly step_det = Poly::zero(A2, F);
            if (dir[0] != 0) {
                // direction [1 : tau]: (s, t) -> (s, s (t + tau))
                psi[0] = s;
                psi[1] = s * (t + Poly::constant(A2, F, dir[1]));
                step_det = s;
            } else {
                // direction [0 : 1]: (s, t) -> (s t, s)
                psi[0] = s * t;
                psi[1] = s;
                step_det = -s;
            }
            fr.base_images.reserve(par.base_images.size());
            for (const Poly& im : par.base_images) fr.base_images.push_back(im.substitute(psi));
            fr.jac = par.jac.substitute(psi) * step_det;
            // pull back the strict transforms of the older exceptionals;
            // those missing the origin of the new frame stay away from every
            // deeper node and are dropped
            for (const auto& [a, eq] : curves[nd.parent]) {
                Poly pulled = eq.substitute(psi);
                for (;;) {
                    auto div = pulled.divided_exactly_by(s);
                    if (!div) break;
                    pulled = *div;
                }
                if (vanishes_at_origin(pulled)) curves[i].push_back({a, pulled});
            }
            curves[i].push_back({nd.parent, s});
            for (const auto& [a, eq] : curves[i]) fr.prox.push_back(a);
            fr.k = 1;
            for (int a : fr.prox) fr.k += frames_[a].k;
            // cross-check against the Jacobian order along the new exceptional
            if (fr.k != mult_at_origin(fr.jac) + 1)
                throw std::logic_error("blowup chart invariant violated: canonical "
                                       "multiplicity disagrees with the Jacobian");
        }
        frames_.push_back(std::move(fr));
    }

    // prime-decomposition table of the total-transform classes:
    // prim_[j][i] = coefficient of the prime E_i in e_j
    prim_.assign(n, std::vector<long>(n, 0));
    for (int j = 0; j < n; ++j) {
        prim_[j][j] = 1;
        for (int i = j + 1; i < n; ++i)
            for (int a : frames_[i].prox) prim_[j][i] += prim_[j][a];
    }
}

long TreeGeometry::node_order(int i, const Poly& base_form) const {
    if (base_form.ambient().name != (tree_.base == "P2" ? "P2" : "P1xP1"))
        throw ParseError("form does not live on the base of the tree");
    if (!(base_form.field() == tree_.F))
        throw ParseError("form and tree live over different fields");
    return mult_at_origin(base_form.substitute(frames_[i].base_images));
}

const Poly& TreeGeometry::pullback_monomial(int i, const Monomial& m) const {
    auto& cache = pullback_cache_[i];
    auto it = cache.find(m.e);
    if (it != cache.end()) return it->second;
    const Fq& F = tree_.F;
    Poly result = Poly::zero(chart_ambient(), F);
    int nv = (int)frames_[i].base_images.size();
    bool trivial = true;
    for (int v = 0; v < nv && trivial; ++v)
        if (m.e[v] > 0) trivial = false;
    if (trivial) {
        result = Poly::constant(chart_ambient(), F, 1);
    } else {
        // peel one variable and reuse the cached smaller monomial
        int v = 0;
        while (m.e[v] == 0) ++v;
        Monomial rest = m;
        rest.e[v] -= 1;
        result = pullback_monomial(i, rest) * frames_[i].base_images[v];
    }
    return cache.emplace(m.e, std::move(result)).first->second;
}

std::vector<long> TreeGeometry::orders_from_multiplicities(const std::vector<long>& mt) const {
    int n = tree_.n();
    std::vector<long> c(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c[i] += mt[j] * prim_[j][i];
    return c;
}

std::vector<long> TreeGeometry::base_degree_of_class(const PicClass& cls) const {
    if (cls.n != tree_.rank()) throw ParseError("class rank does not match the tree");
    if (tree_.base == "P2") return {cls.d};
    return {(long)cls.d - cls.m[1], (long)cls.d - cls.m[0]};
}

std::vector<long> TreeGeometry::node_orders_of_class(const PicClass& cls) const {
    if (cls.n != tree_.rank()) throw ParseError("class rank does not match the tree");
    int n = tree_.n();
    std::vector<long> mt(n, 0);
    if (tree_.base == "P2") {
        for (int i = 0; i < n; ++i) mt[i] = cls.m[i];
    } else {
        mt[0] = (long)cls.d - cls.m[0] - cls.m[1];
        for (int i = 1; i < n; ++i) mt[i] = cls.m[i + 1];
    }
    return orders_from_multiplicities(mt);
}

std::vector<Monomial> TreeGeometry::form_basis(const std::vector<long>& deg) const {
    const Ambient& amb = Ambient::by_name(tree_.base);
    for (long d : deg)
        if (d < 0) return {};
    return amb.monomials_of_degree(deg);
}

std::vector<std::vector<uint32_t>> TreeGeometry::condition_matrix(
    const std::vector<long>& deg, const std::vector<long>& orders) const {
    std::vector<Monomial> basis = form_basis(deg);
    std::vector<std::vector<uint32_t>> M;
    for (int i = 0; i < tree_.n(); ++i) {
        long c = orders[i];
        if (c <= 0) continue;
        // one row per chart monomial of total degree < c: its coefficient in
        // the pullback of every basis form must vanish
        std::vector<Poly> pulls;
        pulls.reserve(basis.size());
        for (const Monomial& bm : basis) pulls.push_back(pullback_monomial(i, bm));
        for (long a = 0; a < c; ++a) {
            for (long b = 0; a + b < c; ++b) {
                Monomial cm{};
                cm.e[0] = (uint16_t)a;
                cm.e[1] = (uint16_t)b;
                std::vector<uint32_t> row(basis.size(), 0);
                bool any = false;
                for (size_t col = 0; col < basis.size(); ++col) {
                    row[col] = pulls[col].coeff(cm);
                    any = any || row[col] != 0;
                }
                if (any) M.push_back(std::move(row));
            }
        }
    }
    return M;
}

long TreeGeometry::h0(const PicClass& cls) const {
    std::vector<long> deg = base_degree_of_class(cls);
    for (long d : deg)
        if (d < 0) return 0;
    std::vector<Monomial> basis = form_basis(deg);
    if (basis.empty()) return 0;
    std::vector<long> orders = node_orders_of_class(cls);
    auto M = condition_matrix(deg, orders);
    return (long)basis.size() - matrix_rank(std::move(M), tree_.F);
}

// ------------------------------------------------------------- weak dP check

WeakDpReport weak_dp_check(const TreeGeometry& geom) {
    WeakDpReport rep;
    int R = geom.tree().rank();
    std::set<PicClass> seen;
    // candidate classes of irreducible curves with -K.C = -t < 0: for
    // arithmetic genus g they satisfy sum m = 3d + t, sum m^2 = d^2 + 2 - 2g + t;
    // d >= 0 because the (converted) hyperplane class is nef, and
    // Cauchy-Schwarz caps t and g
    for (int t = 1; t <= 12; ++t) {
        for (int g = 0; g <= 3; ++g) {
            for (const PicClass& c : classes_by_sums(R, t, 2 - 2 * g + t, 0, 30)) {
                if (seen.count(c)) continue;
                if (geom.h0(c) >= 1) {
                    seen.insert(c);
                    rep.violators.push_back(c);
                }
            }
        }
    }
    std::sort(rep.violators.begin(), rep.violators.end());
    rep.ok = rep.violators.empty();
    return rep;
}

WeakDpReport weak_dp_check(const PointTree& tree) {
    TreeGeometry geom(tree);
    return weak_dp_check(geom);
}

// ----------------------------------------------------------- effective roots

EffectiveRootsReport effective_roots(const TreeGeometry& geom) {
    EffectiveRootsReport rep;
    int R = geom.tree().rank();
    std::set<PicClass> eff;
    for (const PicClass& r : root_classes(R))
        if (geom.h0(r) >= 1) eff.insert(r);
    rep.effective.assign(eff.begin(), eff.end());
    // irreducible = not the sum of two effective roots
    for (const PicClass& r : rep.effective) {
        bool decomposable = false;
        for (const PicClass& a : rep.effective) {
            PicClass b = sub(r, a);
            if (is_root(b) && eff.count(b)) {
                decomposable = true;
                break;
            }
        }
        if (!decomposable) rep.curves.push_back(r);
    }
    rep.diag = classify_root_subsystem(R, rep.curves);
    return rep;
}

// ------------------------------------------------------------- discrepancies

std::vector<long> discrepancy_profile(const TreeGeometry& geom,
                                      const std::vector<Poly>& base_forms) {
    if (base_forms.empty()) throw ParseError("empty boundary");
    int n = geom.tree().n();
    std::vector<long> a(n, 0);
    for (int i = 0; i < n; ++i) {
        long v = 0;
        for (const Poly& f : base_forms) v += geom.node_order(i, f);
        a[i] = v - geom.frame(i).k;
    }
    return a;
}

// ------------------------------------------------------- certificate search

namespace {

struct PieceSpec {
    std::string role;
    std::vector<long> deg;        // base multidegree of the piece
    std::vector<long> smult;      // declared strict multiplicities per node
    std::vector<int> attached;    // 1-based labels for the certificate
};

// all descending paths starting at a root (each path = list of node indices)
std::vector<std::vector<int>> root_paths(const PointTree& tree) {
    int n = tree.n();
    std::vector<std::vector<int>> children(n);
    std::vector<std::vector<int>> paths;
    for (int i = 0; i < n; ++i) {
        if (tree.nodes[i].parent >= 0)
            children[tree.nodes[i].parent].push_back(i);
        else
            paths.push_back({i});
    }
    // grow: a path extends by any child of its last node
    for (size_t done = 0; done < paths.size(); ++done) {
        std::vector<int> base = paths[done];
        for (int ch : children[base.back()]) {
            std::vector<int> ext = base;
            ext.push_back(ch);
            paths.push_back(ext);
        }
    }
    return paths;
}

PieceSpec make_spec(const PointTree& tree, const std::string& role,
                    const std::vector<long>& deg, const std::vector<int>& nodes) {
    PieceSpec sp;
    sp.role = role;
    sp.deg = deg;
    sp.smult.assign(tree.n(), 0);
    for (int i : nodes) {
        sp.smult[i] = 1;
        sp.attached.push_back(i + 1);
    }
    std::sort(sp.attached.begin(), sp.attached.end());
    return sp;
}

std::vector<PieceSpec> build_pool(const PointTree& tree) {
    std::vector<PieceSpec> pool;
    std::vector<int> roots;
    for (int i = 0; i < tree.n(); ++i)
        if (tree.nodes[i].parent < 0) roots.push_back(i);
    auto paths = root_paths(tree);
    std::vector<int> all_nodes(tree.n());
    for (int i = 0; i < tree.n(); ++i) all_nodes[i] = i;

    if (tree.base == "P2") {
        for (size_t a = 0; a < roots.size(); ++a)
            for (size_t b = a + 1; b < roots.size(); ++b)
                pool.push_back(make_spec(tree, "join", {1}, {roots[a], roots[b]}));
        for (const auto& path : paths)
            pool.push_back(
                make_spec(tree, path.size() == 1 ? "through" : "tangent", {1}, path));
        pool.push_back(make_spec(tree, "free", {1}, {}));
        // conics osculating a path, optionally visiting further honest points
        for (const auto& path : paths) {
            if (path.size() < 2) continue;
            pool.push_back(make_spec(tree, "conic", {2}, path));
            for (int r : roots) {
                if (r == path[0]) continue;
                std::vector<int> nodes = path;
                nodes.push_back(r);
                pool.push_back(make_spec(tree, "conic", {2}, nodes));
            }
        }
        // conics through sets of honest points
        int R = (int)roots.size();
        for (int mask = 0; mask < (1 << R); ++mask) {
            int cnt = __builtin_popcount((unsigned)mask);
            if (cnt < 3 || cnt > 5) continue;
            std::vector<int> nodes;
            for (int j = 0; j < R; ++j)
                if (mask & (1 << j)) nodes.push_back(roots[j]);
            pool.push_back(make_spec(tree, "conic", {2}, nodes));
        }
        // the universal fallback: a cubic through the whole configuration
        pool.push_back(make_spec(tree, "cubic", {3}, all_nodes));
    } else {
        for (int r : roots) {
            pool.push_back(make_spec(tree, "fibre-x", {1, 0}, {r}));
            pool.push_back(make_spec(tree, "fibre-y", {0, 1}, {r}));
        }
        pool.push_back(make_spec(tree, "fibre-x", {1, 0}, {}));
        pool.push_back(make_spec(tree, "fibre-y", {0, 1}, {}));
        for (size_t a = 0; a < roots.size(); ++a)
            for (size_t b = a + 1; b < roots.size(); ++b)
                pool.push_back(make_spec(tree, "diagonal", {1, 1}, {roots[a], roots[b]}));
        for (const auto& path : paths)
            pool.push_back(make_spec(tree, "diagonal", {1, 1}, path));
        pool.push_back(make_spec(tree, "diagonal", {1, 1}, {}));
        pool.push_back(make_spec(tree, "biconic", {2, 2}, all_nodes));
    }
    return pool;
}

struct Template {
    std::vector<int> specs;  // indices into the pool
    long deficiency = 0;     // declared coverage shortfall
};

// multisets of pool pieces whose degrees add up to the anticanonical degree
std::vector<Template> build_templates(const TreeGeometry& geom,
                                      const std::vector<PieceSpec>& pool) {
    const PointTree& tree = geom.tree();
    std::vector<long> target = tree.base == "P2" ? std::vector<long>{3}
                                                 : std::vector<long>{2, 2};
    std::vector<Template> out;
    std::vector<int> chosen;
    std::vector<long> acc(target.size(), 0);

    // declared total orders per piece, via the proximity recursion
    std::vector<std::vector<long>> declared;
    declared.reserve(pool.size());
    for (const auto& sp : pool) {
        std::vector<long> c(tree.n(), 0);
        for (int i = 0; i < tree.n(); ++i) {
            c[i] = sp.smult[i];
            for (int a : geom.frame(i).prox) c[i] += c[a];
        }
        declared.push_back(c);
    }

    std::function<void(size_t)> rec = [&](size_t from) {
        bool full = true;
        for (size_t r = 0; r < target.size(); ++r)
            if (acc[r] != target[r]) full = false;
        if (full) {
            Template t;
            t.specs = chosen;
            std::vector<long> cov(tree.n(), 0);
            for (int s : chosen)
                for (int i = 0; i < tree.n(); ++i) cov[i] += declared[s][i];
            for (int i = 0; i < tree.n(); ++i)
                t.deficiency += std::max(0l, geom.frame(i).k - cov[i]);
            out.push_back(std::move(t));
            return;
        }
        for (size_t s = from; s < pool.size(); ++s) {
            bool fits = true;
            for (size_t r = 0; r < target.size(); ++r)
                if (acc[r] + pool[s].deg[r] > target[r]) fits = false;
            if (!fits) continue;
            for (size_t r = 0; r < target.size(); ++r) acc[r] += pool[s].deg[r];
            chosen.push_back((int)s);
            rec(s);  // multisets: allow repeats, keep non-decreasing indices
            chosen.pop_back();
            for (size_t r = 0; r < target.size(); ++r) acc[r] -= pool[s].deg[r];
        }
    };
    rec(0);

    std::stable_sort(out.begin(), out.end(), [](const Template& a, const Template& b) {
        if (a.deficiency != b.deficiency) return a.deficiency < b.deficiency;
        return a.specs.size() > b.specs.size();
    });
    const size_t kMaxTemplates = 600;
    if (out.size() > kMaxTemplates) out.resize(kMaxTemplates);
    return out;
}

// solve a spec's linear conditions and draw one kernel element
std::optional<Poly> draw_piece(const TreeGeometry& geom, const PieceSpec& sp,
                               SplitMix64* rng) {
    const PointTree& tree = geom.tree();
    const Fq& F = tree.F;
    const Ambient& amb = Ambient::by_name(tree.base);
    std::vector<Monomial> basis = geom.form_basis(sp.deg);
    if (basis.empty()) return std::nullopt;
    std::vector<long> orders(tree.n(), 0);
    {
        // declared orders from strict multiplicities
        std::vector<long> c(tree.n(), 0);
        for (int i = 0; i < tree.n(); ++i) {
            c[i] = sp.smult[i];
            for (int a : geom.frame(i).prox) c[i] += c[a];
        }
        orders = c;
    }
    auto M = geom.condition_matrix(sp.deg, orders);
    auto kern = kernel_basis(std::move(M), basis.size(), F);
    if (kern.empty()) return std::nullopt;
    std::vector<uint32_t> combo(basis.size(), 0);
    if (!rng) {
        combo = kern[0];
    } else {
        bool nonzero = false;
        while (!nonzero) {
            std::fill(combo.begin(), combo.end(), 0);
            for (const auto& kv : kern) {
                uint32_t c = F.random(*rng);
                if (c == 0) continue;
                for (size_t j = 0; j < combo.size(); ++j)
                    combo[j] = F.add(combo[j], F.mul(c, kv[j]));
            }
            for (uint32_t c : combo) nonzero = nonzero || c != 0;
        }
    }
    Poly f = Poly::zero(amb, F);
    for (size_t j = 0; j < basis.size(); ++j)
        if (combo[j] != 0) f.set_coeff(basis[j], combo[j]);
    if (f.is_zero()) return std::nullopt;
    return f;
}

PointTree lift_tree(const PointTree& tree, int k) {
    if (k == tree.F.k()) return tree;
    PointTree up = tree;
    up.F = Fq::ext(tree.F.p(), k);
    for (auto& nd : up.nodes) {
        for (auto& c : nd.point) c = up.F.embed_from(tree.F, c);
        if (nd.parent >= 0)
            for (auto& c : nd.dir) c = up.F.embed_from(tree.F, c);
    }
    return up;
}

}  // namespace

std::optional<BoundaryCertificate> find_boundary_certificate(const PointTree& tree,
                                                             int retries, uint64_t seed) {
    {
        WeakDpReport w = weak_dp_check(tree);
        if (!w.ok)
            throw RefusalError("the configuration is not anticanonically nef; no "
                               "boundary certificate can exist");
    }
    if (retries < 0) retries = 0;
    int k0 = tree.F.k();
    for (int k = k0; k <= 4; ++k) {
        if (k % k0 != 0) continue;  // need a field extension of the input field
        PointTree lifted = lift_tree(tree, k);
        TreeGeometry geom(lifted);
        auto pool = build_pool(lifted);
        auto templates = build_templates(geom, pool);
        for (int round = 0; round <= retries; ++round) {
            for (size_t ti = 0; ti < templates.size(); ++ti) {
                SplitMix64 rng =
                    substream(seed, (((uint64_t)k) << 40) ^ ((uint64_t)round << 20) ^ ti);
                std::vector<Poly> forms;
                std::vector<const PieceSpec*> used;
                bool filled = true;
                for (int si : templates[ti].specs) {
                    auto f = draw_piece(geom, pool[si], round == 0 ? nullptr : &rng);
                    if (!f) {
                        filled = false;
                        break;
                    }
                    forms.push_back(std::move(*f));
                    used.push_back(&pool[si]);
                }
                if (!filled) continue;
                std::vector<long> prof = discrepancy_profile(geom, forms);
                bool eff = true;
                for (long a : prof) eff = eff && a >= 0;
                if (!eff) continue;
                PairSplitResult pr = pair_fsplit(forms, 1);
                if (!pr.split) continue;
                BoundaryCertificate cert;
                cert.p = tree.F.p();
                cert.k = k;
                cert.profile = prof;
                cert.pair_coeff = pr.coeff;
                cert.rounds_used = round + 1;
                for (size_t j = 0; j < forms.size(); ++j) {
                    CertificatePiece piece;
                    piece.role = used[j]->role;
                    piece.nodes = used[j]->attached;
                    piece.form = forms[j].str();
                    cert.pieces.push_back(std::move(piece));
                }
                return cert;
            }
        }
    }
    return std::nullopt;
}

bool validate_certificate(const PointTree& tree, const BoundaryCertificate& cert) {
    if (cert.p != tree.F.p()) return false;
    if (cert.k < tree.F.k() || cert.k % tree.F.k() != 0 || cert.k > 4) return false;
    PointTree lifted = lift_tree(tree, cert.k);
    TreeGeometry geom(lifted);
    const Ambient& amb = Ambient::by_name(tree.base);
    std::vector<Poly> forms;
    std::vector<long> deg_sum(tree.base == "P2" ? 1 : 2, 0);
    for (const auto& piece : cert.pieces) {
        Poly f = Poly::parse(amb, lifted.F, piece.form);
        if (f.is_zero() || !f.is_homogeneous()) return false;
        for (size_t r = 0; r < deg_sum.size(); ++r) deg_sum[r] += f.degree((int)r);
        forms.push_back(std::move(f));
    }
    std::vector<long> want = tree.base == "P2" ? std::vector<long>{3}
                                               : std::vector<long>{2, 2};
    if (deg_sum != want) return false;
    std::vector<long> prof = discrepancy_profile(geom, forms);
    if (prof != cert.profile) return false;
    for (long a : prof)
        if (a < 0) return false;
    PairSplitResult pr = pair_fsplit(forms, 1);
    return pr.split && pr.coeff == cert.pair_coeff;
}

// ------------------------------------------------------------- random trees

namespace {

std::vector<uint32_t> random_p2_point(const Fq& F, SplitMix64& rng) {
    for (;;) {
        std::vector<uint32_t> c = {F.random(rng), F.random(rng), F.random(rng)};
        if (c[0] || c[1] || c[2]) return normalize_proj(F, c);
    }
}

std::vector<uint32_t> random_p1xp1_point(const Fq& F, SplitMix64& rng) {
    auto half = [&]() -> std::array<uint32_t, 2> {
        for (;;) {
            std::array<uint32_t, 2> c = {F.random(rng), F.random(rng)};
            if (c[0] || c[1]) {
                auto n = normalize_proj(F, {c[0], c[1]});
                return {n[0], n[1]};
            }
        }
    };
    auto fx = half(), fy = half();
    return {fx[0], fx[1], fy[0], fy[1]};
}

std::array<uint32_t, 2> random_dir(const Fq& F, SplitMix64& rng) {
    for (;;) {
        std::array<uint32_t, 2> d = {F.random(rng), F.random(rng)};
        if (d[0] || d[1]) return normalize_dir(F, d);
    }
}

}  // namespace

static PointTree random_tree_impl(const std::vector<int>& chains, bool p1xp1, const Fq& F,
                                  uint64_t seed, const std::string& label) {
    const int kAttempts = 500;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        SplitMix64 rng = substream(seed, attempt);
        PointTree t;
        t.F = F;
        t.base = p1xp1 ? "P1xP1" : "P2";
        for (int len : chains) {
            if (len < 1 || len > 4) throw ParseError("chain length out of range: " + label);
            TreeNode root;
            root.point = p1xp1 ? random_p1xp1_point(F, rng) : random_p2_point(F, rng);
            t.nodes.push_back(root);
            for (int j = 1; j < len; ++j) {
                TreeNode nd;
                nd.parent = (int)t.nodes.size() - 1;
                nd.dir = random_dir(F, rng);
                t.nodes.push_back(nd);
            }
        }
        try {
            validate_tree(t);
        } catch (const ParseError&) {
            continue;  // coincident points or directions; resample
        }
        if (weak_dp_check(t).ok) return t;
    }
    throw ResourceError("could not sample an anticanonically nef configuration of shape " +
                        label + " over F_{" + std::to_string(F.p()) + "^" +
                        std::to_string(F.k()) + "}");
}

PointTree random_tree(const std::vector<int>& chains, const Fq& F, uint64_t seed) {
    std::string label = "{";
    for (size_t i = 0; i < chains.size(); ++i)
        label += (i ? "," : "") + std::to_string(chains[i]);
    label += "}";
    return random_tree_impl(chains, false, F, seed, label);
}

PointTree random_tree(const std::string& shape, const Fq& F, uint64_t seed) {
    static const std::map<std::string, std::vector<int>> kShapes = {
        {"points4", {1, 1, 1, 1}}, {"points5", {1, 1, 1, 1, 1}}, {"chain2", {2, 1, 1}},
        {"chain22", {2, 2}},       {"chain3", {3, 1}},           {"chain4", {4}},
    };
    if (shape == "p1xp1") return random_tree_impl({1, 1, 1, 1}, true, F, seed, shape);
    auto it = kShapes.find(shape);
    if (it == kShapes.end()) throw ParseError("unknown tree shape: " + shape);
    return random_tree_impl(it->second, false, F, seed, shape);
}

}  // namespace frobsurf
