#include "secdss/tower.hpp"

#include <algorithm>

namespace secdss {

namespace {

constexpr std::uint64_t kMaxTowerOrder = 1ULL << 62;

using BPoly = std::vector<Field::Elem>;  // coefficients over the base field

void trim(BPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const BPoly& a) { return static_cast<int>(a.size()) - 1; }

BPoly poly_mul(const Field& f, const BPoly& a, const BPoly& b) {
    if (a.empty() || b.empty()) return {};
    BPoly out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
    }
    trim(out);
    return out;
}

BPoly poly_mod(const Field& f, BPoly a, const BPoly& d) {
    trim(a);
    Field::Elem lead_inv = f.inv(d.back());
    while (deg(a) >= deg(d)) {
        Field::Elem c = f.mul(a.back(), lead_inv);
        int shift = deg(a) - deg(d);
        for (size_t j = 0; j < d.size(); ++j)
            a[shift + j] = f.sub(a[shift + j], f.mul(c, d[j]));
        trim(a);
    }
    return a;
}

BPoly poly_mulmod(const Field& f, const BPoly& a, const BPoly& b, const BPoly& mod) {
    return poly_mod(f, poly_mul(f, a, b), mod);
}

BPoly poly_powmod(const Field& f, BPoly base, std::uint64_t e, const BPoly& mod) {
    BPoly acc{1};
    base = poly_mod(f, std::move(base), mod);
    while (e) {
        if (e & 1) acc = poly_mulmod(f, acc, base, mod);
        base = poly_mulmod(f, base, base, mod);
        e >>= 1;
    }
    return acc;
}

BPoly poly_gcd(const Field& f, BPoly a, BPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        BPoly r = poly_mod(f, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() != 1) {
        Field::Elem s = f.inv(a.back());
        for (auto& c : a) c = f.mul(c, s);
    }
    return a;
}

std::vector<int> prime_factors(int n) {
    std::vector<int> out;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Rabin's criterion: f of degree N over GF(q) is irreducible iff
// x^(q^N) = x mod f and gcd(x^(q^(N/l)) - x, f) = 1 for every prime l | N.
bool irreducible_over_base(const Field& f, const BPoly& mod) {
    int n = deg(mod);
    if (n <= 0) return false;
    if (n == 1) return true;
    std::uint64_t q = f.order();
    const BPoly x{0, 1};
    auto q_power_of_x = [&](int e) {
        BPoly acc = x;
        for (int i = 0; i < e; ++i) acc = poly_powmod(f, acc, q, mod);
        return acc;
    };
    for (int l : prime_factors(n)) {
        BPoly g = q_power_of_x(n / l);
        // g - x
        BPoly diff = g;
        diff.resize(std::max<size_t>(diff.size(), 2), 0);
        diff[1] = f.sub(diff[1], 1);
        trim(diff);
        BPoly gc = poly_gcd(f, mod, diff);
        if (deg(gc) != 0) return false;
    }
    BPoly top = q_power_of_x(n);
    BPoly diff = top;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = f.sub(diff[1], 1);
    trim(diff);
    return diff.empty();
}

}  // namespace

Tower::Tower(FieldPtr base, int n, std::vector<Field::Elem> mod)
    : base_(std::move(base)), n_(n), order_(1), mod_(std::move(mod)) {
    for (int i = 0; i < n_; ++i) order_ *= base_->order();
    gamma_pows_.resize(n_);
    gamma_pows_[0] = 1;
    for (int i = 1; i < n_; ++i) gamma_pows_[i] = mul(gamma_pows_[i - 1], gamma());
}

std::shared_ptr<const Tower> Tower::make(FieldPtr base, int ext_degree,
                                         const std::optional<std::vector<Field::Elem>>& modulus) {
    if (!base) throw std::invalid_argument("tower needs a base field");
    if (ext_degree < 1) throw std::invalid_argument("extension degree must be positive");
    std::uint64_t q = base->order(), order = 1;
    for (int i = 0; i < ext_degree; ++i) {
        if (order > kMaxTowerOrder / q) throw std::invalid_argument("tower order too large");
        order *= q;
    }
    std::vector<Field::Elem> mod;
    if (modulus) {
        mod = *modulus;
        if (static_cast<int>(mod.size()) != ext_degree + 1 || mod.back() != 1)
            throw std::invalid_argument("tower modulus must be monic of degree N");
        for (Field::Elem c : mod)
            if (c >= q) throw std::invalid_argument("tower modulus coefficient out of range");
        if (!irreducible_over_base(*base, mod))
            throw std::invalid_argument("tower modulus is reducible");
    } else {
        // Lex-first monic irreducible over the base; a zero constant term
        // means a factor of x, so the search starts past that block.
        mod.assign(ext_degree + 1, 0);
        mod[ext_degree] = 1;
        std::vector<Field::Elem> low(ext_degree, 0);
        if (ext_degree >= 2) low[0] = 1;
        while (true) {
            for (int i = 0; i < ext_degree; ++i) mod[i] = low[i];
            if (irreducible_over_base(*base, mod)) break;
            int pos = ext_degree - 1;
            while (pos >= 0 && low[pos] == q - 1) low[pos--] = 0;
            if (pos < 0) throw std::logic_error("no irreducible tower modulus found");
            ++low[pos];
        }
    }
    auto t = std::shared_ptr<const Tower>(new Tower(std::move(base), ext_degree, std::move(mod)));
    // Basis sanity: the polynomial basis flattens to independent columns.
    Mat<Field> id(t->base(), t->ext_degree(), t->ext_degree());
    for (int j = 0; j < t->ext_degree(); ++j) {
        auto c = t->coords(t->basis_elem(j));
        for (int i = 0; i < t->ext_degree(); ++i) id(i, j) = c[i];
    }
    if (rank(id) != t->ext_degree())
        throw std::logic_error("tower basis is not independent over the base");
    return t;
}

std::vector<Field::Elem> Tower::coords(Elem a) const {
    std::vector<Field::Elem> c(n_, 0);
    std::uint64_t q = base_->order(), x = a;
    for (int i = 0; i < n_; ++i) {
        c[i] = static_cast<Field::Elem>(x % q);
        x /= q;
    }
    return c;
}

Tower::Elem Tower::from_coords(const std::vector<Field::Elem>& c) const {
    std::uint64_t q = base_->order(), v = 0, mulq = 1;
    for (int i = 0; i < n_; ++i) {
        Field::Elem ci = i < static_cast<int>(c.size()) ? c[i] : 0;
        if (ci >= q) throw std::out_of_range("coordinate out of range");
        v += ci * mulq;
        mulq *= q;
    }
    return v;
}

Tower::Elem Tower::add(Elem a, Elem b) const {
    auto ca = coords(a), cb = coords(b);
    for (int i = 0; i < n_; ++i) ca[i] = base_->add(ca[i], cb[i]);
    return from_coords(ca);
}

Tower::Elem Tower::neg(Elem a) const {
    auto c = coords(a);
    for (int i = 0; i < n_; ++i) c[i] = base_->neg(c[i]);
    return from_coords(c);
}

Tower::Elem Tower::sub(Elem a, Elem b) const { return add(a, neg(b)); }

Tower::Elem Tower::mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    BPoly prod = poly_mul(*base_, coords(a), coords(b));
    BPoly red = poly_mod(*base_, std::move(prod), mod_);
    red.resize(n_, 0);
    return from_coords(red);
}

Tower::Elem Tower::pow(Elem a, std::uint64_t e) const {
    Elem acc = 1, base = a;
    while (e) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
        e >>= 1;
    }
    return acc;
}

Tower::Elem Tower::inv(Elem a) const {
    if (a == 0) throw std::domain_error("division by zero in tower field");
    return pow(a, order_ - 2);
}

Tower::Elem Tower::frobenius(Elem a, int i) const {
    if (i < 0) throw std::invalid_argument("negative frobenius power");
    Elem x = a;
    for (int t = 0; t < i; ++t) x = pow(x, base_->order());
    return x;
}

Tower::Elem Tower::gamma() const {
    if (n_ == 1) {
        // Degree-one extension: gamma is the root of the linear modulus.
        return embed(base_->neg(mod_[0]));
    }
    std::vector<Field::Elem> c(n_, 0);
    c[1] = 1;
    return from_coords(c);
}

Tower::Elem Tower::basis_elem(int i) const {
    if (i < 0 || i >= n_) throw std::out_of_range("basis index out of range");
    return gamma_pows_[i];
}

LinearizedMap LinearizedMap::zero(TowerPtr t) {
    return LinearizedMap{std::move(t), {}};
}

LinearizedMap LinearizedMap::mul_by(TowerPtr t, Tower::Elem c) {
    return LinearizedMap{std::move(t), {c}};
}

LinearizedMap LinearizedMap::frobenius_power(TowerPtr t, int i) {
    int n = t->ext_degree();
    std::vector<Tower::Elem> coeffs(static_cast<size_t>(i % n) + 1, 0);
    coeffs[i % n] = 1;
    return LinearizedMap{std::move(t), std::move(coeffs)};
}

Tower::Elem LinearizedMap::apply(Tower::Elem x) const {
    Tower::Elem acc = 0;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0) continue;
        acc = tower->add(acc, tower->mul(coeffs[i], tower->frobenius(x, static_cast<int>(i))));
    }
    return acc;
}

LinearizedMap LinearizedMap::compose(const LinearizedMap& inner) const {
    if (!tower->same(*inner.tower)) throw std::invalid_argument("tower mismatch in compose");
    int n = tower->ext_degree();
    std::vector<Tower::Elem> out(n, 0);
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0) continue;
        for (size_t j = 0; j < inner.coeffs.size(); ++j) {
            if (inner.coeffs[j] == 0) continue;
            // a_i * (b_j x^{q^j})^{q^i} = a_i b_j^{q^i} x^{q^{i+j}}
            size_t idx = (i + j) % n;
            Tower::Elem term =
                tower->mul(coeffs[i], tower->frobenius(inner.coeffs[j], static_cast<int>(i)));
            out[idx] = tower->add(out[idx], term);
        }
    }
    return LinearizedMap{tower, std::move(out)};
}

Mat<Field> flatten_linear_map(const LinearizedMap& map) {
    const auto& t = map.tower;
    int n = t->ext_degree();
    Mat<Field> out(t->base(), n, n);
    for (int j = 0; j < n; ++j) {
        auto img = t->coords(map.apply(t->basis_elem(j)));
        for (int i = 0; i < n; ++i) out(i, j) = img[i];
    }
    return out;
}

Mat<Field> flatten_mul(const TowerPtr& t, Tower::Elem c) {
    return flatten_linear_map(LinearizedMap::mul_by(t, c));
}

Mat<Tower> lift_to_tower(const Mat<Field>& m, const TowerPtr& t) {
    if (!m.field()->same(*t->base()))
        throw std::invalid_argument("matrix field is not the tower base");
    Mat<Tower> out(t, m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) = t->embed(m(i, j));
    return out;
}

Mat<Field> flatten_tower_matrix(const Mat<Tower>& m) {
    const auto& t = m.field();
    int n = t->ext_degree();
    Mat<Field> out(t->base(), m.rows() * n, m.cols() * n);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (m(i, j) == 0) continue;
            Mat<Field> block = flatten_mul(t, m(i, j));
            for (int bi = 0; bi < n; ++bi)
                for (int bj = 0; bj < n; ++bj) out(i * n + bi, j * n + bj) = block(bi, bj);
        }
    }
    return out;
}

}  // namespace secdss
