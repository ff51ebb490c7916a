#pragma once
// Finite fields F_{p^k} for small primes p and k <= 4.
//
// Elements are packed into a uint32_t as sum c_i * p^i where (c_0,...,c_{k-1})
// are the coefficients of the residue modulo a fixed monic irreducible m(t) of
// degree k.  The modulus is chosen canonically: the monic irreducible whose
// packed coefficient value is smallest (a fixed "Conway-style" choice computed
// at construction, so every run of the toolkit agrees on the representation).
// Packed values enumerate the field exactly as 0 .. q-1.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "frobsurf/common.hpp"

namespace frobsurf {

namespace detail {
struct FieldData;
}

class Fq {
  public:
    // F_p (p prime, p <= 251).
    static Fq prime(uint32_t p);
    // F_{p^k}, 1 <= k <= 4, with the canonical modulus.
    static Fq ext(uint32_t p, int k);

    uint32_t p() const;
    int k() const;
    uint64_t q() const;
    bool operator==(const Fq& o) const;
    bool operator!=(const Fq& o) const { return !(*this == o); }

    // modulus coefficients m_0..m_k (m_k = 1); size k+1.  For k = 1 this is
    // {0, 1}, i.e. m(t) = t.
    std::vector<uint32_t> modulus() const;

    uint32_t add(uint32_t a, uint32_t b) const;
    uint32_t sub(uint32_t a, uint32_t b) const;
    uint32_t neg(uint32_t a) const;
    uint32_t mul(uint32_t a, uint32_t b) const;
    uint32_t inv(uint32_t a) const;  // a != 0
    uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }
    uint32_t pow(uint32_t a, uint64_t e) const;
    // Frobenius x -> x^{p^e}, iterated so e may be large.
    uint32_t frob(uint32_t a, int e = 1) const;

    // Reduce an integer into the prime subfield.
    uint32_t from_int(long long v) const;
    // The class of t (generator of the extension); requires k >= 2.
    uint32_t gen() const;
    // Coefficient digits c_0..c_{k-1} of an element.
    std::array<uint32_t, 4> digits(uint32_t a) const;

    // True iff a lies in the subfield F_{p^j} (j must divide k).
    bool in_subfield(uint32_t a, int j) const;

    // Canonical embedding F_{p^j} -> F_{p^k} for j | k: the generator of the
    // subfield is sent to the root of its modulus with smallest packed value.
    // Throws ResourceError when q is too large to search (q > 2^21).
    uint32_t embed_from(const Fq& sub, uint32_t a) const;

    // Element <-> string, e.g. "0", "2", "t", "t^2+2*t+1", "-1" parses too.
    std::string to_string(uint32_t a) const;
    uint32_t parse(const std::string& s) const;

    uint32_t random(SplitMix64& rng) const;
    uint32_t random_nonzero(SplitMix64& rng) const;

  private:
    explicit Fq(std::shared_ptr<const detail::FieldData> d) : d_(std::move(d)) {}
    std::shared_ptr<const detail::FieldData> d_;
};

}  // namespace frobsurf
