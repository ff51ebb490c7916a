#pragma once
// Configurations of (possibly infinitely near) points on P2 or P1xP1,
// realised through explicit blowup charts.
//
// A tree node is either a root (an honest point of the base) or a child,
// given by a direction [a : b] in the centred affine frame of its parent;
// blowing up a node turns directions at it into the points of the new
// exceptional line, so a grandchild's datum picks a point of E_parent.
// Chart substitutions: direction [1 : tau] uses (s,t) -> (s, s(t+tau)),
// direction [0 : 1] uses (s,t) -> (st, s).  Composing the steps gives, for
// every node, the map phi from its frame to the base affine patch; orders
// along E_node of pulled-back curves are multiplicities at the frame origin.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frobsurf/lattice.hpp"
#include "frobsurf/poly.hpp"

namespace frobsurf {

struct TreeNode {
    int parent = -1;              // -1 for roots
    std::vector<uint32_t> point;  // roots: 3 (P2) or 4 (P1xP1) coordinates
    std::array<uint32_t, 2> dir{};  // children: direction in the parent frame
};

struct PointTree {
    Fq F = Fq::prime(2);  // coordinate field of the configuration
    std::string base;     // "P2" or "P1xP1"
    std::vector<TreeNode> nodes;

    int n() const { return (int)nodes.size(); }
    int K2() const { return (base == "P2" ? 9 : 8) - n(); }
    // rank of the exceptional part of the Picard lattice in the e0-basis
    // (P1xP1 configurations are rewritten over P2 via f1 = e0-e1,
    //  f2 = e0-e2, first node = e0-e1-e2)
    int rank() const { return base == "P2" ? n() : n() + 1; }
    int depth_of(int i) const;
    std::string canonical_string() const;  // stable serialisation for hashing
};

// Structural validation: parent order, distinct roots, distinct sibling
// directions, chains of at most 4 nodes, lattice rank at most 8.
void validate_tree(const PointTree& tree);

// Per-node chart data computed once per tree.
struct Frame {
    std::vector<Poly> base_images;  // base coordinates as polys in the frame
    Poly jac;                       // Jacobian determinant of the composed map
    std::vector<int> prox;          // nodes whose exceptional passes through this one
    long k = 0;                     // coefficient of E_node in K_{X/base}
};

class TreeGeometry {
  public:
    explicit TreeGeometry(const PointTree& tree);

    const PointTree& tree() const { return tree_; }
    const Frame& frame(int i) const { return frames_[i]; }

    // order of the total transform of a base form along E_i
    long node_order(int i, const Poly& base_form) const;

    // coefficient of the prime divisor E_i in the total-transform class e_j
    long prime_coefficient(int j, int i) const { return prim_[j][i]; }

    // h^0 of a class in the e0-basis (rank() entries of m are used)
    long h0(const PicClass& cls) const;

    // conditions "order at node i >= c_i" as a linear system on the space of
    // base forms of the given multidegree; returns the coefficient matrix
    // (rows: truncation monomials, cols: the form basis) together with the
    // basis, used both by h0 and by the certificate search
    std::vector<Monomial> form_basis(const std::vector<long>& deg) const;
    std::vector<std::vector<uint32_t>> condition_matrix(const std::vector<long>& deg,
                                                        const std::vector<long>& orders) const;

    // e0-basis multidegree helpers (P1xP1 classes are converted)
    std::vector<long> base_degree_of_class(const PicClass& cls) const;
    std::vector<long> node_orders_of_class(const PicClass& cls) const;

  private:
    PointTree tree_;
    std::vector<Frame> frames_;
    std::vector<std::vector<long>> prim_;
    using MonoKey = std::array<uint16_t, kMaxVars>;
    mutable std::vector<std::map<MonoKey, Poly>> pullback_cache_;

    const Poly& pullback_monomial(int i, const Monomial& m) const;
    std::vector<long> orders_from_multiplicities(const std::vector<long>& mt) const;
};

struct WeakDpReport {
    bool ok = false;
    std::vector<PicClass> violators;  // effective classes with -K.C < 0
};

// -K nef test: enumerate the finitely many candidate violator classes and
// test their effectivity through h^0.
WeakDpReport weak_dp_check(const PointTree& tree);
WeakDpReport weak_dp_check(const TreeGeometry& geom);

struct EffectiveRootsReport {
    std::vector<PicClass> effective;  // all effective roots
    std::vector<PicClass> curves;     // the irreducible ones
    RootDiagnosis diag;               // ADE type of the configuration
};

EffectiveRootsReport effective_roots(const TreeGeometry& geom);

// multiplicities a_i of the exceptional divisors in the anticanonical
// boundary induced by base forms: a_i = ord_{E_i}(pullback) - k_i
std::vector<long> discrepancy_profile(const TreeGeometry& geom,
                                      const std::vector<Poly>& base_forms);

struct CertificatePiece {
    std::string role;           // "join", "tangent", "through", "free", "conic", "fibre"
    std::vector<int> nodes;     // 1-based node indices the piece is attached to
    std::string form;           // printed form (over the certificate field)
};

struct BoundaryCertificate {
    uint32_t p = 0;
    int k = 1;                   // field F_{p^k} the certificate lives over
    std::vector<CertificatePiece> pieces;
    std::vector<long> profile;   // discrepancy profile a_i (all >= 0)
    uint32_t pair_coeff = 0;     // pair-criterion coefficient on the base
    int rounds_used = 0;
};

// Search for an anticanonical boundary on the base whose pair splits and
// whose induced boundary upstairs is effective.  Deterministic given
// (tree, retries, seed); extends the coefficient field up to F_{p^4} before
// giving up.  Precondition: the tree passes weak_dp_check (RefusalError
// otherwise).  Returns nullopt when the budget is exhausted (which proves
// nothing).
std::optional<BoundaryCertificate> find_boundary_certificate(const PointTree& tree,
                                                             int retries, uint64_t seed);

// Recompute profile and pair coefficient of a stored certificate.
bool validate_certificate(const PointTree& tree, const BoundaryCertificate& cert);

// Deterministic samplers for the test harness: shapes are
// "points4", "points5", "chain2", "chain22", "chain3", "chain4", "p1xp1".
// Samples configurations over F until weak_dp_check passes.
PointTree random_tree(const std::string& shape, const Fq& F, uint64_t seed);
// Same, by explicit chain partition on P^2: one chain of the given length
// per entry, e.g. {2,1,1} = one tangent pair plus two points.
PointTree random_tree(const std::vector<int>& chains, const Fq& F, uint64_t seed);

}  // namespace frobsurf
