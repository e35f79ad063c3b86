#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace secdss {

/// Finite field GF(p^m), represented as Z_p[x] modulo a monic irreducible
/// polynomial of degree m. Elements are canonical integers 0..q-1 obtained by
/// base-p digit expansion of the coefficient vector (constant term first), so
/// equality of elements is equality of encodings and serialization is exact.
///
/// Immutable after construction; safe to share across threads.
class Field {
public:
    using Elem = std::uint32_t;

    /// Builds GF(p^m). When no modulus is given, the lexicographically
    /// smallest monic irreducible polynomial is selected (coefficients
    /// compared from the constant term up). A supplied modulus must be monic
    /// of degree m with digits < p, and is verified irreducible by trial
    /// division against every lower-degree monic polynomial.
    static std::shared_ptr<const Field> make(
        std::uint32_t p, int m = 1,
        const std::optional<std::vector<Elem>>& modulus = std::nullopt);

    std::uint32_t characteristic() const { return p_; }
    int degree() const { return m_; }
    std::uint64_t order() const { return q_; }
    /// Monic modulus, m+1 coefficients, constant term first.
    const std::vector<Elem>& modulus() const { return mod_; }

    /// Structural equality: same (p, m, modulus).
    bool same(const Field& o) const {
        return p_ == o.p_ && m_ == o.m_ && mod_ == o.mod_;
    }

    // The table fast paths stay in the header: eliminations over small
    // fields live and die by these three lookups.
    Elem add(Elem a, Elem b) const {
        if (!add_tab_.empty()) return add_tab_[static_cast<size_t>(a) * q_ + b];
        return add_slow(a, b);
    }
    Elem sub(Elem a, Elem b) const {
        if (p_ == 2) return add(a, b);
        return add(a, neg(b));
    }
    Elem neg(Elem a) const;
    Elem mul(Elem a, Elem b) const {
        if (!mul_tab_.empty()) return mul_tab_[static_cast<size_t>(a) * q_ + b];
        return mul_slow(a, b);
    }
    Elem inv(Elem a) const {
        if (a == 0) throw std::domain_error("division by zero in field");
        if (!inv_tab_.empty()) return inv_tab_[a];
        return pow(a, q_ - 2);
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::uint64_t e) const;
    /// a^(p^i): the i-fold Frobenius over the prime subfield.
    Elem frobenius(Elem a, int i) const;

    /// Base-p digits of the coefficient vector, length m.
    std::vector<Elem> coeffs(Elem a) const;
    Elem from_coeffs(const std::vector<Elem>& c) const;
    /// Range-checked element from its canonical integer encoding.
    Elem element(std::uint64_t v) const {
        if (v >= q_) throw std::out_of_range("field element encoding out of range");
        return static_cast<Elem>(v);
    }

private:
    Field(std::uint32_t p, int m, std::vector<Elem> mod);
    void build_tables();
    Elem add_slow(Elem a, Elem b) const;
    Elem mul_slow(Elem a, Elem b) const;

    std::uint32_t p_;
    int m_;
    std::uint64_t q_;
    std::vector<Elem> mod_;
    // Dense op tables, built when q <= 256.
    std::vector<Elem> add_tab_, mul_tab_, inv_tab_;
};

using FieldPtr = std::shared_ptr<const Field>;

/// Owned element value for API-level arithmetic; matrices store raw
/// encodings instead and carry the field once.
struct FieldElem {
    FieldPtr field;
    Field::Elem v = 0;

    FieldElem() = default;
    FieldElem(FieldPtr f, Field::Elem val) : field(std::move(f)), v(val) {}

    FieldElem operator+(const FieldElem& o) const { return {owner(o), field->add(v, o.v)}; }
    FieldElem operator-(const FieldElem& o) const { return {owner(o), field->sub(v, o.v)}; }
    FieldElem operator*(const FieldElem& o) const { return {owner(o), field->mul(v, o.v)}; }
    FieldElem operator/(const FieldElem& o) const { return {owner(o), field->div(v, o.v)}; }
    FieldElem inverse() const { return {field, field->inv(v)}; }
    bool operator==(const FieldElem& o) const { return field->same(*o.field) && v == o.v; }
    bool operator!=(const FieldElem& o) const { return !(*this == o); }

private:
    FieldPtr owner(const FieldElem& o) const {
        if (!field || !o.field || !field->same(*o.field))
            throw std::invalid_argument("field mismatch between elements");
        return field;
    }
};

bool is_prime(std::uint64_t x);

}  // namespace secdss
