#pragma once
// Sparse multivariate polynomials over F_{p^k} with a graded-lex term order.
//
// An Ambient names the variables and carries one or more grading rows
// (weight vectors).  Projective spaces have one row, P1 x P1 and Hirzebruch
// surfaces have two.  The term order is graded by the first grading row
// (total degree for affine charts) with lex on exponents as tie-break,
// x before y before z counting as "larger".

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frobsurf/common.hpp"
#include "frobsurf/field.hpp"

namespace frobsurf {

constexpr int kMaxVars = 6;

struct Monomial {
    std::array<uint16_t, kMaxVars> e{};
    bool operator==(const Monomial& o) const { return e == o.e; }
};

struct Ambient {
    std::string name;
    std::vector<std::string> vars;
    std::vector<std::vector<int>> gradings;  // each row has vars.size() entries

    int nvars() const { return (int)vars.size(); }
    // weighted degree of a monomial under grading row r
    long degree(const Monomial& m, int r = 0) const;
    // all exponent vectors of the given multidegree (one entry per grading
    // row), in descending term order
    std::vector<Monomial> monomials_of_degree(const std::vector<long>& deg) const;

    // registry of the ambients used by the toolkit: P2, P3, P4, P(1,1,1,2),
    // P(1,1,2,3), P1, P1xP1, F1, F2, A2 (affine chart plane, vars u v)
    static const Ambient& by_name(const std::string& n);
};

// term order helper: graded (row 0) then lex with earlier variables larger
struct TermOrder {
    std::array<int, kMaxVars> w{};
    int n = 0;
    bool less(const Monomial& a, const Monomial& b) const {
        long da = 0, db = 0;
        for (int i = 0; i < n; ++i) {
            da += (long)w[i] * a.e[i];
            db += (long)w[i] * b.e[i];
        }
        if (da != db) return da < db;
        for (int i = 0; i < n; ++i)
            if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
        return false;
    }
};

struct MonoLess {
    TermOrder o;
    bool operator()(const Monomial& a, const Monomial& b) const { return o.less(a, b); }
};
using TermMap = std::map<Monomial, uint32_t, MonoLess>;

// Global cap on the number of terms any single polynomial may hold.
// Exceeding it raises ResourceError; the CLI exposes it as --cap.
uint64_t poly_term_cap();
void set_poly_term_cap(uint64_t cap);

class Poly {
  public:
    Poly(const Ambient& amb, const Fq& F);

    const Ambient& ambient() const { return amb_; }
    const Fq& field() const { return F_; }
    int nvars() const { return order_.n; }
    size_t nterms() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    // term access (ascending term order; leading term is the last one)
    const TermMap& terms() const { return terms_; }
    uint32_t coeff(const Monomial& m) const;
    void set_coeff(const Monomial& m, uint32_t c);
    Monomial leading_monomial() const;  // throws on zero
    uint32_t leading_coeff() const;

    // degree under grading row r (-1 on the zero polynomial)
    long degree(int r = 0) const;
    bool is_homogeneous() const;  // under every grading row

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly scaled(uint32_t c) const;
    bool operator==(const Poly& o) const;

    // plain binary powering
    Poly pow_binary(uint64_t e) const;
    // x^alpha -> x^{q alpha}, coefficients raised to the q-th power
    // (q must be a power of the characteristic)
    Poly frobenius_scale(uint64_t q) const;
    // f^{p^e - 1} through the Frobenius factorisation
    // f^{p^e-1} = prod_j (f^{p-1})^{p^j}; agrees with pow_binary
    Poly pow_pe_minus1(int e) const;
    // exact division; nullopt if o does not divide *this
    std::optional<Poly> divided_exactly_by(const Poly& o) const;

    // delete every term with some exponent >= q (q = p^e, validated)
    Poly frobenius_reduce(uint64_t q) const;

    Poly derivative(int var) const;
    // substitute images[i] for variable i; images live in a common ambient
    Poly substitute(const std::vector<Poly>& images) const;
    // evaluate at a point (coordinates packed field elements)
    uint32_t eval(const std::vector<uint32_t>& x) const;

    // map coefficients into an extension field (canonical embedding)
    Poly lifted_to(const Fq& bigger) const;

    std::string str() const;

    static Poly zero(const Ambient& amb, const Fq& F) { return Poly(amb, F); }
    static Poly constant(const Ambient& amb, const Fq& F, uint32_t c);
    static Poly variable(const Ambient& amb, const Fq& F, int var);
    static Poly monomial(const Ambient& amb, const Fq& F, const Monomial& m, uint32_t c);
    static Poly parse(const Ambient& amb, const Fq& F, const std::string& text);
    // random homogeneous form of the given multidegree (uniform coefficients)
    static Poly random_form(const Ambient& amb, const Fq& F, const std::vector<long>& deg,
                            SplitMix64& rng);

  private:
    Ambient amb_;
    Fq F_;
    TermOrder order_;
    TermMap terms_;

    void add_term(const Monomial& m, uint32_t c);  // accumulate, drop zeros
    void check_compatible(const Poly& o) const;
    void check_cap() const;
};

// pretty printer for a monomial in an ambient ("x^2*y*z")
std::string monomial_str(const Ambient& amb, const Monomial& m);

}  // namespace frobsurf
