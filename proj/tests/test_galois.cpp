#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "secdss/galois.hpp"
#include "secdss/tower.hpp"

using namespace secdss;

TEST_CASE("prime field and extension construction") {
    auto gf2 = Field::make(2);
    CHECK(gf2->order() == 2);
    CHECK(gf2->degree() == 1);
    CHECK(gf2->modulus() == std::vector<Field::Elem>{0, 1});  // x

    auto gf4 = Field::make(2, 2, std::vector<Field::Elem>{1, 1, 1});
    CHECK(gf4->order() == 4);

    // Lex-first selection picks the same quadratic, the only irreducible one.
    auto gf4_auto = Field::make(2, 2);
    CHECK(gf4_auto->modulus() == std::vector<Field::Elem>{1, 1, 1});
    CHECK(gf4->same(*gf4_auto));

    // Cubic irreducibility oracle over GF(2): no roots means irreducible.
    auto eval = [](const std::vector<Field::Elem>& f, int x) {
        int acc = 0;
        for (size_t i = 0; i < f.size(); ++i) acc ^= (x == 0 && i > 0) ? 0 : f[i];
        return acc & 1;
    };
    std::vector<Field::Elem> cubic{1, 1, 0, 1};  // x^3 + x + 1
    CHECK(eval(cubic, 0) == 1);
    CHECK(eval(cubic, 1) == 1);
    auto gf8 = Field::make(2, 3, cubic);
    CHECK(gf8->order() == 8);

    // Lex-first cubic over GF(2) is x^3 + x^2 + 1.
    auto gf8_auto = Field::make(2, 3);
    CHECK(gf8_auto->modulus() == std::vector<Field::Elem>{1, 0, 1, 1});

    auto gf9 = Field::make(3, 2);
    CHECK(gf9->modulus() == std::vector<Field::Elem>{1, 0, 1});  // x^2 + 1

    CHECK_THROWS_AS(Field::make(4), std::invalid_argument);
    CHECK_THROWS_AS(Field::make(1), std::invalid_argument);
    // x^2 + 1 = (x+1)^2 over GF(2)
    CHECK_THROWS_AS(Field::make(2, 2, std::vector<Field::Elem>{1, 0, 1}),
                    std::invalid_argument);
}

TEST_CASE("GF(4) arithmetic") {
    auto gf4 = Field::make(2, 2);
    const Field::Elem w = 2;  // the residue class of x
    CHECK(gf4->add(w, w) == 0);
    CHECK(gf4->mul(w, w) == 3);  // w^2 = w + 1

    // Independent oracle for the inverse: exhaustive search.
    Field::Elem found = 0;
    for (Field::Elem x = 1; x < 4; ++x)
        if (gf4->mul(w, x) == 1) found = x;
    CHECK(found == 3);
    CHECK(gf4->inv(w) == found);
    CHECK(gf4->div(1, w) == 3);

    CHECK_THROWS_AS(gf4->inv(0), std::domain_error);

    auto gf3 = Field::make(3);
    FieldElem a{gf4, w}, b{gf3, 2};
    CHECK_THROWS_AS(a + b, std::invalid_argument);
    FieldElem c{gf4, 3};
    CHECK((a * c).v == gf4->mul(2, 3));
}

TEST_CASE("field axioms hold exhaustively on small fields") {
    for (auto [p, m] : {std::pair<int, int>{2, 1}, {3, 1}, {2, 2}, {2, 3}, {3, 2}}) {
        auto f = Field::make(p, m);
        auto q = static_cast<Field::Elem>(f->order());
        for (Field::Elem a = 0; a < q; ++a) {
            if (a != 0) CHECK(f->mul(a, f->inv(a)) == 1);
            CHECK(f->add(a, f->neg(a)) == 0);
            for (Field::Elem b = 0; b < q; ++b) {
                CHECK(f->add(a, b) == f->add(b, a));
                CHECK(f->mul(a, b) == f->mul(b, a));
                for (Field::Elem c = 0; c < q; ++c) {
                    CHECK(f->add(f->add(a, b), c) == f->add(a, f->add(b, c)));
                    CHECK(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
                    CHECK(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
                }
            }
        }
    }
}

TEST_CASE("frobenius") {
    auto gf4 = Field::make(2, 2);
    CHECK(gf4->frobenius(2, 0) == 2);
    CHECK(gf4->frobenius(2, 1) == 3);  // w^2 = w + 1
    // Additivity in characteristic 2, all pairs.
    for (Field::Elem a = 0; a < 4; ++a)
        for (Field::Elem b = 0; b < 4; ++b)
            CHECK(gf4->frobenius(gf4->add(a, b), 1) ==
                  gf4->add(gf4->frobenius(a, 1), gf4->frobenius(b, 1)));
    // frobenius(., m) is the identity on GF(p^m), exhaustively up to q = 256.
    for (auto [p, m] : {std::pair<int, int>{2, 2}, {2, 3}, {3, 2}, {5, 1}, {2, 4}, {3, 4},
                        {5, 2}, {2, 7}, {2, 8}}) {
        auto f = Field::make(p, m);
        bool all_fixed = true;
        for (Field::Elem a = 0; a < f->order(); ++a)
            all_fixed = all_fixed && f->frobenius(a, m) == a;
        CHECK(all_fixed);
    }
}

TEST_CASE("tower construction and arithmetic") {
    auto gf2 = Field::make(2);
    auto t4 = Tower::make(gf2, 2);  // GF(4) over GF(2)
    CHECK(t4->order() == 4);
    CHECK(t4->modulus() == std::vector<Field::Elem>{1, 1, 1});
    CHECK(t4->frobenius(2, 1) == 3);
    CHECK(t4->frobenius(2, 0) == 2);

    auto gf4 = Field::make(2, 2);
    auto t16 = Tower::make(gf4, 2);  // GF(16) over GF(4)
    CHECK(t16->order() == 16);
    for (Tower::Elem a = 0; a < 16; ++a) CHECK(t16->frobenius(a, 2) == a);

    // Explicit moduli are verified; reducible ones are rejected.
    auto t16b = Tower::make(gf4, 2, t16->modulus());
    CHECK(t16b->same(*t16));
    // x^2 + 1 = (x + 1)^2 over GF(4) as well.
    CHECK_THROWS_AS(Tower::make(gf4, 2, std::vector<Field::Elem>{1, 0, 1}),
                    std::invalid_argument);

    auto big = Tower::make(gf4, 8);  // GF(4^8)
    CHECK(big->order() == 65536ULL);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        Tower::Elem a = rng() % big->order(), b = rng() % big->order(),
                    c = rng() % big->order();
        CHECK(big->mul(big->mul(a, b), c) == big->mul(a, big->mul(b, c)));
        CHECK(big->mul(a, big->add(b, c)) == big->add(big->mul(a, b), big->mul(a, c)));
        if (a != 0) CHECK(big->mul(a, big->inv(a)) == 1);
        CHECK(big->frobenius(a, 8) == a);
        // Frobenius is base-linear: fixed on GF(4), additive everywhere.
        CHECK(big->frobenius(big->add(a, b), 1) ==
              big->add(big->frobenius(a, 1), big->frobenius(b, 1)));
    }
    for (Field::Elem c = 0; c < 4; ++c) CHECK(big->frobenius(big->embed(c), 1) == big->embed(c));
}

TEST_CASE("flatten of linear maps on the tower") {
    auto gf2 = Field::make(2);
    auto t4 = Tower::make(gf2, 2);

    // Multiplication by one flattens to the identity.
    Mat<Field> id = flatten_mul(t4, 1);
    CHECK(id == Mat<Field>::identity(gf2, 2));

    // Multiplication by w on basis {1, w}: columns are the images.
    Mat<Field> mw = flatten_mul(t4, 2);
    CHECK(mw(0, 0) == 0);
    CHECK(mw(0, 1) == 1);
    CHECK(mw(1, 0) == 1);
    CHECK(mw(1, 1) == 1);

    // Flattening respects composition.
    CHECK(mw * mw == flatten_mul(t4, t4->mul(2, 2)));

    auto gf4 = Field::make(2, 2);
    auto t16 = Tower::make(gf4, 2);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        LinearizedMap f{t16, {rng() % 16, rng() % 16}};
        LinearizedMap g{t16, {rng() % 16, rng() % 16}};
        CHECK(flatten_linear_map(f.compose(g)) ==
              flatten_linear_map(f) * flatten_linear_map(g));
        // The flattened matrix acts exactly as the map on coordinates.
        Tower::Elem x = rng() % 16;
        auto lhs = t16->coords(f.apply(x));
        auto rhs = flatten_linear_map(f).apply(t16->coords(x));
        CHECK(lhs == rhs);
    }

    // The q-power map is invertible, so its flattening has full rank.
    CHECK(rank(flatten_linear_map(LinearizedMap::frobenius_power(t16, 1))) == 2);
}

TEST_CASE("flattened tower matrices act on stacked coordinates") {
    // For any matrix M over GF(q^N) and vector x, the flattening applied to
    // the stacked coordinates of x equals the stacked coordinates of M x.
    std::mt19937_64 rng(59);
    auto gf2 = Field::make(2);
    auto gf4 = Field::make(2, 2);
    for (const TowerPtr& t :
         {Tower::make(gf2, 2), Tower::make(gf4, 2), Tower::make(gf4, 8)}) {
        const int n = t->ext_degree();
        for (int trial = 0; trial < 20; ++trial) {
            int rows = 1 + static_cast<int>(rng() % 3);
            int cols = 1 + static_cast<int>(rng() % 3);
            Mat<Tower> m(t, rows, cols);
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j) m(i, j) = rng() % t->order();
            std::vector<Tower::Elem> x(cols);
            for (auto& v : x) v = rng() % t->order();

            std::vector<Field::Elem> stacked_in;
            for (Tower::Elem v : x) {
                auto c = t->coords(v);
                stacked_in.insert(stacked_in.end(), c.begin(), c.end());
            }
            std::vector<Field::Elem> lhs = flatten_tower_matrix(m).apply(stacked_in);

            std::vector<Field::Elem> rhs;
            for (Tower::Elem v : m.apply(x)) {
                auto c = t->coords(v);
                rhs.insert(rhs.end(), c.begin(), c.end());
            }
            CHECK(lhs == rhs);
            CHECK(static_cast<int>(lhs.size()) == rows * n);
        }
    }
}
