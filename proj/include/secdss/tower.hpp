#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "secdss/galois.hpp"
#include "secdss/matgf.hpp"

namespace secdss {

/// Extension tower GF(q) in GF(q^N): the extension field is represented as
/// polynomials over the base field modulo a monic irreducible degree-N
/// polynomial with base-field coefficients. The fixed GF(q)-basis is the
/// polynomial basis {1, g, ..., g^(N-1)} with g the residue class of x.
/// Elements are canonical integers 0..q^N-1 via base-q digit expansion of the
/// coordinate vector, which is consistent with the base field's own base-p
/// encoding of each digit.
class Tower {
public:
    using Elem = std::uint64_t;

    /// Builds GF(q^N) over the given base. A missing modulus is chosen as the
    /// lexicographically smallest monic irreducible degree-N polynomial over
    /// the base (coefficients compared from the constant term up, by their
    /// canonical encodings).
    static std::shared_ptr<const Tower> make(
        FieldPtr base, int ext_degree,
        const std::optional<std::vector<Field::Elem>>& modulus = std::nullopt);

    const FieldPtr& base() const { return base_; }
    int ext_degree() const { return n_; }
    std::uint64_t order() const { return order_; }
    /// Monic modulus over the base field, N+1 coefficients, constant first.
    const std::vector<Field::Elem>& modulus() const { return mod_; }

    bool same(const Tower& o) const {
        return n_ == o.n_ && base_->same(*o.base_) && mod_ == o.mod_;
    }

    Elem add(Elem a, Elem b) const;
    Elem sub(Elem a, Elem b) const;
    Elem neg(Elem a) const;
    Elem mul(Elem a, Elem b) const;
    Elem inv(Elem a) const;  // throws std::domain_error on zero
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::uint64_t e) const;
    /// a^(q^i): the i-fold Frobenius over the base field; GF(q)-linear.
    Elem frobenius(Elem a, int i) const;

    /// Embedding of the base field as the constant polynomials.
    Elem embed(Field::Elem v) const { return static_cast<Elem>(v); }
    /// Residue class of x.
    Elem gamma() const;
    /// Basis element gamma^i, 0 <= i < N.
    Elem basis_elem(int i) const;

    /// Base-field coordinates in the polynomial basis, length N.
    std::vector<Field::Elem> coords(Elem a) const;
    Elem from_coords(const std::vector<Field::Elem>& c) const;
    Elem element(std::uint64_t v) const {
        if (v >= order_) throw std::out_of_range("tower element encoding out of range");
        return v;
    }

private:
    Tower(FieldPtr base, int n, std::vector<Field::Elem> mod);

    FieldPtr base_;
    int n_;
    std::uint64_t order_;
    std::vector<Field::Elem> mod_;
    std::vector<Elem> gamma_pows_;  // gamma^0 .. gamma^(N-1)
};

using TowerPtr = std::shared_ptr<const Tower>;

/// GF(q)-linear map on GF(q^N) as a linearized polynomial
/// x -> sum_i coeffs[i] * x^(q^i), 0 <= i < N.
struct LinearizedMap {
    TowerPtr tower;
    std::vector<Tower::Elem> coeffs;

    static LinearizedMap zero(TowerPtr t);
    static LinearizedMap mul_by(TowerPtr t, Tower::Elem c);
    static LinearizedMap frobenius_power(TowerPtr t, int i);

    Tower::Elem apply(Tower::Elem x) const;
    /// this after inner: (f o g)(x) = f(g(x)), again a linearized map.
    LinearizedMap compose(const LinearizedMap& inner) const;
};

/// Flattens a GF(q)-linear map on GF(q^N) to the N x N base-field matrix
/// acting on polynomial-basis coordinates: column j holds the coordinates of
/// the image of gamma^j. Flattening is multiplicative over composition.
Mat<Field> flatten_linear_map(const LinearizedMap& map);

/// Base-field matrix of multiplication by c, a common special case.
Mat<Field> flatten_mul(const TowerPtr& t, Tower::Elem c);

/// Entry-wise embedding of a base-field matrix into the extension field.
Mat<Tower> lift_to_tower(const Mat<Field>& m, const TowerPtr& t);

/// Expands a matrix over GF(q^N) into the (rows*N) x (cols*N) base-field
/// matrix acting on stacked coordinate vectors: entry (i, j) becomes the
/// N x N block of multiplication by that entry.
Mat<Field> flatten_tower_matrix(const Mat<Tower>& m);

}  // namespace secdss
