#pragma once
// Frobenius-splitting tests: Fedder's criterion for hypersurfaces and
// complete intersections, the pair criterion on minimal rational surfaces,
// and the bounded search for strong F-regularity certificates.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frobsurf/poly.hpp"

namespace frobsurf {

struct FedderResult {
    bool split = false;
    // graded-lex greatest monomial surviving the Frobenius reduction, with
    // its coefficient; empty witness when not split
    std::string witness;
    uint32_t witness_coeff = 0;
};

// Fedder's criterion at level e for S/(f_1,...,f_c):
// split  iff  (prod f_i)^{p^e-1} survives reduction modulo (x_0^{p^e},...).
FedderResult fedder_fpure(const std::vector<Poly>& forms, int e = 1);

struct PairSplitResult {
    bool split = false;
    uint32_t coeff = 0;  // coefficient of (prod x_i)^{p^e-1}
};

// Pair criterion on P1 (sum of degrees 2), P2 (sum 3) or P1xP1 (bidegree
// (2,2)): the boundary divisor sum B = div(prod forms) is anticanonical and
// (X, (1-1/p^e) B) splits iff the named coefficient is nonzero.
PairSplitResult pair_fsplit(const std::vector<Poly>& forms, int e = 1);

enum class SearchMode { Any, All };

struct GfrSearchResult {
    bool established = false;
    int e = 0;                 // level of the certificate (or the bound tried)
    std::string test_element;  // c with c f^{p^e-1} surviving
    std::string witness;       // surviving monomial
};

// Bounded strong-F-regularity search: look for a test element c among the
// nonzero coordinate partials of the forms and a level e <= e_max with
// c (prod f)^{p^e-1} not in (x_i^{p^e}).  A hit certifies strong
// F-regularity along c; exhaustion proves nothing (semidecision).
GfrSearchResult gfr_bounded_search(const std::vector<Poly>& forms, int e_max,
                                   SearchMode mode = SearchMode::Any);

// -------------------------------------------------------- classification data
// Exceptional (K^2, p) cells of the classification of canonical del Pezzo
// surfaces: in these cells some canonical surface fails global F-regularity.
const std::vector<std::pair<int, uint32_t>>& canonical_gfr_exceptions();
// Cells where some smooth del Pezzo fails global F-regularity.
const std::vector<std::pair<int, uint32_t>>& smooth_gfr_exceptions();
// Cells where some smooth del Pezzo fails to be F-split (equals the smooth
// global F-regularity table).
const std::vector<std::pair<int, uint32_t>>& fsplit_exceptions();

bool canonical_exceptional(int K2, uint32_t p);
bool smooth_exceptional(int K2, uint32_t p);
bool fsplit_exceptional(int K2, uint32_t p);

}  // namespace frobsurf
