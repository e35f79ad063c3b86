#include "secdss/galois.hpp"

#include <algorithm>

namespace secdss {

namespace {

constexpr std::uint64_t kMaxOrder = 1u << 20;
constexpr std::uint64_t kTableLimit = 256;

using Poly = std::vector<Field::Elem>;  // coefficients over Z_p, constant first

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            out[i + j] = static_cast<Field::Elem>(
                (out[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
    }
    trim(out);
    return out;
}

// Remainder of a by monic divisor d.
Poly poly_mod(Poly a, const Poly& d, std::uint32_t p) {
    trim(a);
    while (deg(a) >= deg(d)) {
        Field::Elem c = a.back();
        int shift = deg(a) - deg(d);
        for (size_t j = 0; j < d.size(); ++j) {
            std::uint64_t sub = static_cast<std::uint64_t>(c) * d[j] % p;
            a[shift + j] = static_cast<Field::Elem>((a[shift + j] + p - sub) % p);
        }
        trim(a);
    }
    return a;
}

// Trial division against every lower-degree monic polynomial; exact and fast
// enough at the field sizes this library admits.
bool irreducible_over_prime(const Poly& f, std::uint32_t p) {
    int m = deg(f);
    if (m <= 0) return false;
    if (m == 1) return true;
    if (f[0] == 0) return false;  // divisible by x
    for (int d = 1; d <= m - 1; ++d) {
        Poly cand(d + 1, 0);
        cand[d] = 1;
        while (true) {
            if (poly_mod(f, cand, p).empty()) return false;
            int pos = 0;
            while (pos < d && cand[pos] == p - 1) cand[pos++] = 0;
            if (pos == d) break;
            ++cand[pos];
        }
    }
    return true;
}

}  // namespace

bool is_prime(std::uint64_t x) {
    if (x < 2) return false;
    for (std::uint64_t f = 2; f * f <= x; ++f)
        if (x % f == 0) return false;
    return true;
}

Field::Field(std::uint32_t p, int m, std::vector<Elem> mod)
    : p_(p), m_(m), q_(1), mod_(std::move(mod)) {
    for (int i = 0; i < m_; ++i) q_ *= p_;
    build_tables();
}

std::shared_ptr<const Field> Field::make(std::uint32_t p, int m,
                                         const std::optional<std::vector<Elem>>& modulus) {
    if (!is_prime(p)) throw std::invalid_argument("characteristic must be prime");
    if (m < 1) throw std::invalid_argument("extension degree must be positive");
    std::uint64_t q = 1;
    for (int i = 0; i < m; ++i) {
        q *= p;
        if (q > kMaxOrder) throw std::invalid_argument("field order too large");
    }
    std::vector<Elem> mod;
    if (modulus) {
        mod = *modulus;
        if (static_cast<int>(mod.size()) != m + 1 || mod.back() != 1)
            throw std::invalid_argument("modulus must be monic of degree m");
        for (Elem c : mod)
            if (c >= p) throw std::invalid_argument("modulus coefficient out of range");
        if (!irreducible_over_prime(mod, p))
            throw std::invalid_argument("modulus is reducible");
    } else {
        // Lexicographically smallest monic irreducible, constant term first.
        // Degree >= 2 candidates with zero constant term are divisible by x,
        // so the search starts past that whole block.
        mod.assign(m + 1, 0);
        mod[m] = 1;
        std::vector<Elem> low(m, 0);
        if (m >= 2) low[0] = 1;
        while (true) {
            for (int i = 0; i < m; ++i) mod[i] = low[i];
            if (irreducible_over_prime(mod, p)) break;
            int pos = m - 1;
            while (pos >= 0 && low[pos] == p - 1) low[pos--] = 0;
            if (pos < 0) throw std::logic_error("no irreducible polynomial found");
            ++low[pos];
        }
    }
    return std::shared_ptr<const Field>(new Field(p, m, std::move(mod)));
}

void Field::build_tables() {
    if (q_ > kTableLimit) return;
    auto n = static_cast<size_t>(q_);
    add_tab_.resize(n * n);
    mul_tab_.resize(n * n);
    for (size_t a = 0; a < n; ++a) {
        for (size_t b = 0; b < n; ++b) {
            Elem ea = static_cast<Elem>(a), eb = static_cast<Elem>(b);
            // digit-wise sum
            Elem s = 0, mulp = 1;
            std::uint64_t xa = ea, xb = eb;
            for (int i = 0; i < m_; ++i) {
                s += static_cast<Elem>((xa % p_ + xb % p_) % p_ * mulp);
                xa /= p_;
                xb /= p_;
                mulp *= p_;
            }
            add_tab_[a * n + b] = s;
            mul_tab_[a * n + b] = mul_slow(ea, eb);
        }
    }
    inv_tab_.assign(n, 0);
    for (size_t a = 1; a < n; ++a)
        for (size_t b = 1; b < n; ++b)
            if (mul_tab_[a * n + b] == 1) {
                inv_tab_[a] = static_cast<Elem>(b);
                break;
            }
}

std::vector<Field::Elem> Field::coeffs(Elem a) const {
    std::vector<Elem> c(m_, 0);
    std::uint64_t x = a;
    for (int i = 0; i < m_; ++i) {
        c[i] = static_cast<Elem>(x % p_);
        x /= p_;
    }
    return c;
}

Field::Elem Field::from_coeffs(const std::vector<Elem>& c) const {
    std::uint64_t v = 0, mulp = 1;
    for (int i = 0; i < m_; ++i) {
        Elem ci = i < static_cast<int>(c.size()) ? c[i] : 0;
        if (ci >= p_) throw std::out_of_range("coefficient out of range");
        v += ci * mulp;
        mulp *= p_;
    }
    return static_cast<Elem>(v);
}

Field::Elem Field::add_slow(Elem a, Elem b) const {
    if (p_ == 2) return a ^ b;
    auto ca = coeffs(a), cb = coeffs(b);
    for (int i = 0; i < m_; ++i) ca[i] = (ca[i] + cb[i]) % p_;
    return from_coeffs(ca);
}

Field::Elem Field::neg(Elem a) const {
    if (p_ == 2) return a;
    auto c = coeffs(a);
    for (int i = 0; i < m_; ++i) c[i] = c[i] == 0 ? 0 : p_ - c[i];
    return from_coeffs(c);
}

Field::Elem Field::mul_slow(Elem a, Elem b) const {
    Poly prod = poly_mul(coeffs(a), coeffs(b), p_);
    Poly red = poly_mod(std::move(prod), mod_, p_);
    red.resize(m_, 0);
    return from_coeffs(red);
}

Field::Elem Field::pow(Elem a, std::uint64_t e) const {
    Elem acc = 1, base = a;
    while (e) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
        e >>= 1;
    }
    return acc;
}

Field::Elem Field::frobenius(Elem a, int i) const {
    if (i < 0) throw std::invalid_argument("negative frobenius power");
    Elem x = a;
    for (int t = 0; t < i; ++t) x = pow(x, p_);
    return x;
}

}  // namespace secdss
