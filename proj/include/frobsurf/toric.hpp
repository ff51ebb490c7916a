#pragma once
// Cohomology on Hirzebruch surfaces and the inductive-on-ambient
// F-splitting check for ruled bases.
//
// Classes on F_a are written (c, b) = c F + b C0 where F is a fibre and C0
// the negative section (C0^2 = -a); the Cox grading rows of the F_a ambients
// are exactly (F-degree, C0-degree).  P1xP1 is F_0 with C0 = {s0 = 0}.

#include <vector>

#include "frobsurf/poly.hpp"

namespace frobsurf {

// h^1(F_a, O(b C0 + c F)) via the ruling pushforward and Serre duality.
long h1_hirzebruch(int a, int b, long c);

struct IoaResult {
    bool split = false;
    uint32_t pair_coeff = 0;  // pair-criterion coefficient on S = P^1
    long h1 = 0;              // h^1(F_a, -S)
};

// Inductive criterion: S a fibre or an irreducible section (Cox form of
// C0-degree 0 or 1), B effective with K + S + sum(B) ~ 0.  The surface pair
// splits at level e iff the restricted pair splits on S = P^1 and the h^1
// obstruction vanishes.
IoaResult ioa_fsplit_check(const Poly& Sform, const std::vector<Poly>& Bforms, int e = 1);

}  // namespace frobsurf
