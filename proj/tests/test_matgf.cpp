#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "secdss/galois.hpp"
#include "secdss/matgf.hpp"

using namespace secdss;

namespace {

Mat<Field> random_matrix(const FieldPtr& f, int rows, int cols, std::mt19937_64& rng) {
    Mat<Field> m(f, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = static_cast<Field::Elem>(rng() % f->order());
    return m;
}

// Row selection of the coordinate slab {v in Z_2^3 : digit t of v is zero},
// ambient dimension 8.
Mat<Field> slab(const FieldPtr& f, int t) {
    std::vector<int> rows;
    for (int v = 0; v < 8; ++v)
        if (((v >> t) & 1) == 0) rows.push_back(v);
    Mat<Field> m(f, 4, 8);
    for (int s = 0; s < 4; ++s) m(s, rows[s]) = 1;
    return m;
}

}  // namespace

TEST_CASE("rref basics") {
    auto gf2 = Field::make(2);
    auto id = Mat<Field>::identity(gf2, 3);
    auto r = rref(id);
    CHECK(r.rank == 3);
    CHECK(r.pivots == std::vector<int>{0, 1, 2});
    CHECK(r.reduced == id);

    Mat<Field> zero(gf2, 2, 4);
    CHECK(rank(zero) == 0);

    auto m = Mat<Field>::from_rows(gf2, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
    CHECK(rank(m) == 2);  // third row is the sum of the first two
}

TEST_CASE("rref properties on random input") {
    std::mt19937_64 rng(3);
    for (auto pm : {std::pair<int, int>{2, 1}, {3, 1}, {2, 2}}) {
        auto f = Field::make(pm.first, pm.second);
        for (int trial = 0; trial < 50; ++trial) {
            int rows = 1 + static_cast<int>(rng() % 6);
            int cols = 1 + static_cast<int>(rng() % 6);
            Mat<Field> m = random_matrix(f, rows, cols, rng);
            auto r = rref(m);
            CHECK(r.rank <= std::min(rows, cols));
            CHECK(rref(r.reduced).reduced == r.reduced);  // idempotent
            auto rt = rref(m, true);
            CHECK(rt.transform * m == rt.reduced);
        }
    }
}

TEST_CASE("solve") {
    auto gf3 = Field::make(3);
    auto id = Mat<Field>::identity(gf3, 3);
    std::vector<Field::Elem> b{2, 0, 1};
    auto s = solve(id, b);
    CHECK(s.consistent);
    CHECK(s.solution == b);
    CHECK(s.kernel.rows() == 0);

    Mat<Field> zero(gf3, 2, 2);
    auto bad = solve(zero, std::vector<Field::Elem>{1, 0});
    CHECK_FALSE(bad.consistent);
    // Certificate: y with yA = 0 and yb != 0.
    Field::Elem dot = 0;
    for (int i = 0; i < 2; ++i) dot = gf3->add(dot, gf3->mul(bad.left_certificate[i], i == 0 ? 1 : 0));
    CHECK(dot != 0);

    // x + y = 1, x + 2y = 0 over GF(3); oracle enumerates all nine pairs.
    auto a = Mat<Field>::from_rows(gf3, {{1, 1}, {1, 2}});
    std::vector<Field::Elem> rhs{1, 0};
    int hits = 0;
    std::vector<Field::Elem> expect;
    for (Field::Elem x = 0; x < 3; ++x)
        for (Field::Elem y = 0; y < 3; ++y)
            if (gf3->add(x, y) == 1 && gf3->add(x, gf3->mul(2, y)) == 0) {
                expect = {x, y};
                ++hits;
            }
    CHECK(hits == 1);
    CHECK(expect == std::vector<Field::Elem>{2, 2});
    auto sol = solve(a, rhs);
    CHECK(sol.consistent);
    CHECK(sol.solution == expect);
}

TEST_CASE("solve and certificate properties on random systems") {
    std::mt19937_64 rng(5);
    for (auto pm : {std::pair<int, int>{2, 1}, {3, 1}, {2, 2}}) {
        auto f = Field::make(pm.first, pm.second);
        int inconsistent_seen = 0;
        for (int trial = 0; trial < 80; ++trial) {
            int rows = 1 + static_cast<int>(rng() % 5);
            int cols = 1 + static_cast<int>(rng() % 5);
            Mat<Field> a = random_matrix(f, rows, cols, rng);
            std::vector<Field::Elem> b(rows);
            for (auto& v : b) v = static_cast<Field::Elem>(rng() % f->order());
            auto s = solve(a, b);
            if (s.consistent) {
                CHECK(a.apply(s.solution) == b);
                for (int kr = 0; kr < s.kernel.rows(); ++kr) {
                    std::vector<Field::Elem> kv(a.cols());
                    for (int c = 0; c < a.cols(); ++c) kv[c] = s.kernel(kr, c);
                    std::vector<Field::Elem> zero(rows, 0);
                    CHECK(a.apply(kv) == zero);
                }
            } else {
                ++inconsistent_seen;
                std::vector<Field::Elem> ya(cols, 0), zero(cols, 0);
                Field::Elem yb = 0;
                for (int i = 0; i < rows; ++i) {
                    for (int c = 0; c < cols; ++c)
                        ya[c] = f->add(ya[c], f->mul(s.left_certificate[i], a(i, c)));
                    yb = f->add(yb, f->mul(s.left_certificate[i], b[i]));
                }
                CHECK(ya == zero);
                CHECK(yb != 0);
            }
        }
        CHECK(inconsistent_seen > 0);
    }
}

TEST_CASE("subspace sums and intersections") {
    auto gf2 = Field::make(2);

    Mat<Field> s0 = slab(gf2, 0), s1 = slab(gf2, 1);
    CHECK(subspace_sum_dim<Field>({s0, s0}) == 4);  // idempotent
    // Complementary halves of F^2.
    auto top = Mat<Field>::from_rows(gf2, {{1, 0}});
    auto bot = Mat<Field>::from_rows(gf2, {{0, 1}});
    CHECK(subspace_sum_dim<Field>({top, bot}) == 2);
    CHECK(subspace_intersection_dim(top, bot) == 0);

    // Counting oracle: the two slabs cover 6 of the 8 coordinates and share
    // the 2 with both digits zero.
    CHECK(subspace_sum_dim<Field>({s0, s1}) == 6);
    CHECK(subspace_intersection_dim(s0, s1) == 4 + 4 - 6);

    Mat<Field> wrong(gf2, 1, 7);
    CHECK_THROWS_AS(subspace_sum_dim<Field>({s0, wrong}), std::invalid_argument);
}

TEST_CASE("modular identity against the kernel-method oracle") {
    std::mt19937_64 rng(9);
    for (auto pm : {std::pair<int, int>{2, 1}, {3, 1}, {2, 2}}) {
        auto f = Field::make(pm.first, pm.second);
        for (int trial = 0; trial < 200; ++trial) {
            int ambient = 2 + static_cast<int>(rng() % 5);
            Mat<Field> a = random_matrix(f, 1 + static_cast<int>(rng() % 4), ambient, rng);
            Mat<Field> b = random_matrix(f, 1 + static_cast<int>(rng() % 4), ambient, rng);
            int inter = subspace_intersection_dim(a, b);
            Mat<Field> basis = intersection_basis_by_kernel(a, b);
            CHECK(basis.rows() == inter);
            CHECK(rank(a) + rank(b) == subspace_sum_dim<Field>({a, b}) + inter);
            // Every oracle basis row lies in both row spaces.
            if (basis.rows() > 0) {
                CHECK(rowspace_contains(a, basis));
                CHECK(rowspace_contains(b, basis));
            }
        }
    }
}

TEST_CASE("subspace sum is order-invariant and monotone") {
    std::mt19937_64 rng(13);
    auto f = Field::make(2, 2);
    for (int trial = 0; trial < 40; ++trial) {
        int ambient = 3 + static_cast<int>(rng() % 4);
        std::vector<Mat<Field>> parts;
        for (int i = 0; i < 3; ++i)
            parts.push_back(random_matrix(f, 1 + static_cast<int>(rng() % 3), ambient, rng));
        int base = subspace_sum_dim(parts);
        std::vector<Mat<Field>> shuffled{parts[2], parts[0], parts[1]};
        CHECK(subspace_sum_dim(shuffled) == base);
        parts.push_back(random_matrix(f, 2, ambient, rng));
        CHECK(subspace_sum_dim(parts) >= base);
    }
}

TEST_CASE("canonical subspace representative") {
    std::mt19937_64 rng(17);
    auto f = Field::make(3);
    for (int trial = 0; trial < 40; ++trial) {
        Mat<Field> m = random_matrix(f, 3, 5, rng);
        auto s = Subspace<Field>::from_rows(m);
        // Re-present the same span: permuted rows plus a scaled row sum.
        Mat<Field> again(f, 4, 5);
        for (int j = 0; j < 5; ++j) {
            again(0, j) = m(2, j);
            again(1, j) = m(0, j);
            again(2, j) = m(1, j);
            again(3, j) = f->add(m(0, j), f->mul(2, m(1, j)));
        }
        CHECK(Subspace<Field>::from_rows(again) == s);
        CHECK(s.dim() == rank(m));
    }
}

TEST_CASE("inverse") {
    auto gf4 = Field::make(2, 2);
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        Mat<Field> m = random_matrix(gf4, 4, 4, rng);
        if (rank(m) < 4) {
            CHECK_THROWS_AS(inverse(m), std::domain_error);
            continue;
        }
        CHECK(inverse(m) * m == Mat<Field>::identity(gf4, 4));
    }
}
