#pragma once
// The Picard lattice Z e_0 + Z e_1 + ... + Z e_n of a blown-up plane
// (intersection form diag(1,-1,...,-1), canonical class -3e_0 + sum e_i),
// its (-1)-classes and roots, Weyl-orbit oracles, and the ADE
// classification of root subsystems with the strong-F-regularity
// thresholds per component type.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "frobsurf/common.hpp"

namespace frobsurf {

struct PicClass {
    int d = 0;                  // e_0 coefficient
    std::array<int, 8> m{};     // e_i coefficients are -m[i] (so m = multiplicities)
    int n = 0;                  // number of exceptional directions

    bool operator==(const PicClass& o) const { return d == o.d && n == o.n && m == o.m; }
    bool operator<(const PicClass& o) const;  // lex on (d, m), for canonical order
};

long inner(const PicClass& a, const PicClass& b);  // d d' - sum m_i m_i'
PicClass canonical_class(int n);                   // K = (-3; -1,...,-1)
std::string class_str(const PicClass& c);          // "(d; m1,...,mn)"
PicClass neg(const PicClass& a);
PicClass add(const PicClass& a, const PicClass& b);
PicClass sub(const PicClass& a, const PicClass& b);

bool is_minus1_class(const PicClass& c);  // C^2 = -1, K.C = -1
bool is_root(const PicClass& c);          // C^2 = -2, K.C = 0

// Direct enumerators (bounded integer search), canonical ascending order.
std::vector<PicClass> minus1_classes(int n);  // 1 <= n <= 8
std::vector<PicClass> root_classes(int n);    // 0 <= n <= 8, both signs

// General bounded enumerator: classes with sum m = 3d + sum_offset and
// sum m^2 = d^2 + sq_offset, d restricted to [dmin, dmax].
std::vector<PicClass> classes_by_sums(int n, int sum_offset, int sq_offset,
                                      int dmin = -30, int dmax = 30);

// Weyl-orbit oracles: breadth-first closure under the simple reflections.
// Slower, independently correct; used for cross-checking.
std::vector<PicClass> minus1_classes_weyl(int n);
std::vector<PicClass> root_classes_weyl(int n);

// --------------------------------------------------------- ADE classification

struct RootComponent {
    char type = 'A';  // 'A', 'D' or 'E'
    int rank = 0;
};

struct RootDiagnosis {
    std::vector<RootComponent> comps;  // sorted by (rank desc, type)
    int total_rank() const;
    std::string name() const;  // e.g. "D4", "A2+2A1", "0" for empty
};

// Classify the subsystem generated by the given roots: closure under the
// reflections of the subsystem itself, choice of positive roots, simple
// roots, Dynkin graph, ADE type per connected component.
RootDiagnosis classify_root_subsystem(int n, const std::vector<PicClass>& roots);

// Strong F-regularity thresholds of the rational double point types:
// A_r always, D_r needs p > 2, E6/E7 need p > 3, E8 needs p > 5.
bool sfr_component_ok(char type, int rank, uint32_t p);
bool sfr_all_components(const RootDiagnosis& diag, uint32_t p);

// Uniform sufficient bound in terms of the degree: every canonical del
// Pezzo of degree K2 in characteristic p has only strongly F-regular
// singularities when this holds.
bool sfr_uniform_bound(int K2, uint32_t p);

// Whether a root subsystem occurs on a canonical del Pezzo of degree K2:
// rank fits inside the degree-9-K2 system, and in degree >= 5 only A-type
// configurations are geometrically realizable.
bool realizable_on_del_pezzo(int K2, const RootDiagnosis& diag);

// counts table helpers
struct LatticeCounts {
    int n;
    size_t minus1;
    size_t roots;
};
std::vector<LatticeCounts> lattice_count_table(bool use_weyl_oracle = false);

}  // namespace frobsurf
