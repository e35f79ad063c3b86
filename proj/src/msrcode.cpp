#include "secdss/msrcode.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace secdss {

namespace {

// Digit t of v in base r.
int digit(int v, int t, int r) {
    for (int i = 0; i < t; ++i) v /= r;
    return v % r;
}

// Index with digit t incremented by one modulo r.
int bump_digit(int v, int t, int r) {
    int scale = 1;
    for (int i = 0; i < t; ++i) scale *= r;
    int d = digit(v, t, r);
    return v - d * scale + ((d + 1) % r) * scale;
}

// Permutation matrix of v -> v + e_t over Z_r^k coordinates.
Mat<Field> shift_permutation(const FieldPtr& f, int alpha, int t, int r) {
    Mat<Field> p(f, alpha, alpha);
    for (int v = 0; v < alpha; ++v) p(bump_digit(v, t, r), v) = 1;
    return p;
}

// Row selection of the coordinate slab {v : digit_i(v) = 0}.
Mat<Field> slab_selection(const FieldPtr& f, int alpha, int i, int r) {
    std::vector<int> rows;
    for (int v = 0; v < alpha; ++v)
        if (digit(v, i, r) == 0) rows.push_back(v);
    Mat<Field> sel(f, static_cast<int>(rows.size()), alpha);
    for (size_t s = 0; s < rows.size(); ++s) sel(static_cast<int>(s), rows[s]) = 1;
    return sel;
}

void subsets_rec(int from, int n, int need, std::vector<int>& cur,
                 std::vector<std::vector<int>>& out) {
    if (need == 0) {
        out.push_back(cur);
        return;
    }
    for (int i = from; i + need <= n; ++i) {
        cur.push_back(i);
        subsets_rec(i + 1, n, need - 1, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> subsets(int n, int size) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    subsets_rec(0, n, size, cur, out);
    return out;
}

// Reduced MDS criterion for one k-subset: with systematic survivors S and
// parity rows T, the stacked map is invertible iff the block matrix of
// coding blocks [A_{t,j}] over t in T, j missing is. Equivalent to the full
// stacked test but much smaller inside the coefficient search.
bool block_invertible(const std::vector<std::vector<Mat<Field>>>& coding,
                      const std::vector<int>& parities, const std::vector<int>& missing,
                      const FieldPtr& f, int alpha) {
    int s = static_cast<int>(parities.size());
    Mat<Field> block(f, s * alpha, s * alpha);
    for (int bi = 0; bi < s; ++bi)
        for (int bj = 0; bj < s; ++bj) {
            const Mat<Field>& a = coding[parities[bi]][missing[bj]];
            for (int i = 0; i < alpha; ++i)
                for (int j = 0; j < alpha; ++j) block(bi * alpha + i, bj * alpha + j) = a(i, j);
        }
    return rank(block) == s * alpha;
}

}  // namespace

void DssParams::validate() const {
    if (!field) throw std::invalid_argument("params need a field");
    if (k < 1 || n <= k) throw std::invalid_argument("need 1 <= k < n");
    if (d < k || d > n - 1) throw std::invalid_argument("need k <= d <= n-1");
    if (alpha < 1 || beta < 1) throw std::invalid_argument("need positive alpha, beta");
    if (beta * (d - k + 1) != alpha)
        throw std::invalid_argument("optimal-bandwidth identity beta*(d-k+1) = alpha violated");
}

const Mat<Field>& MsrCode::repair_matrix(int helper, int failed) const {
    if (failed < 0 || failed >= params.k) throw std::out_of_range("failed node not systematic");
    if (helper < 0 || helper >= params.n || helper == failed)
        throw std::out_of_range("bad helper id");
    return repair[helper][failed];
}

Mat<Field> MsrCode::node_map(int node) const {
    const int k = params.k, alpha = params.alpha;
    Mat<Field> m(params.field, alpha, k * alpha);
    if (node < k) {
        for (int i = 0; i < alpha; ++i) m(i, node * alpha + i) = 1;
        return m;
    }
    int t = node - k;
    for (int j = 0; j < k; ++j) {
        const Mat<Field>& a = coding[t][j];
        for (int i = 0; i < alpha; ++i)
            for (int c = 0; c < alpha; ++c) m(i, j * alpha + c) = a(i, c);
    }
    return m;
}

MsrCode zigzag_construct(int k, int r, FieldPtr field, int max_alpha) {
    if (k < 2) throw std::invalid_argument("need k >= 2");
    if (r < 2) throw std::invalid_argument("need at least two parities");
    if (!field) throw std::invalid_argument("need a field");
    long long alpha_ll = 1;
    for (int i = 0; i < k; ++i) {
        alpha_ll *= r;
        if (alpha_ll > max_alpha)
            throw std::invalid_argument("r^k exceeds the configured storage limit");
    }
    const int alpha = static_cast<int>(alpha_ll);
    const int beta = alpha / r;
    const int n = k + r;

    DssParams params{n, k, n - 1, alpha, beta, field};
    params.validate();

    std::vector<Mat<Field>> perm_pow;  // P_j^t at index t*k + j
    perm_pow.reserve(static_cast<size_t>(r) * k);
    for (int t = 0; t < r; ++t)
        for (int j = 0; j < k; ++j) {
            Mat<Field> p = Mat<Field>::identity(field, alpha);
            for (int i = 0; i < t; ++i) p = shift_permutation(field, alpha, j, r) * p;
            perm_pow.push_back(std::move(p));
        }

    // All reduced MDS checks, largest parity blocks first so a failing
    // assignment dies as early as possible.
    struct Check {
        std::vector<int> parities, missing;
    };
    std::vector<Check> checks;
    for (int s = std::min(r, k); s >= 1; --s)
        for (const auto& t_set : subsets(r, s))
            for (const auto& j_set : subsets(k, s)) checks.push_back({t_set, j_set});

    const auto q = field->order();
    const std::uint64_t nonzero = q - 1;
    std::vector<std::uint64_t> pick(static_cast<size_t>(r) * k, 0);  // c = pick + 1
    auto coeff = [&](int t, int j) {
        return static_cast<Field::Elem>(pick[static_cast<size_t>(t) * k + j] + 1);
    };

    // Every check is invariant under scaling a parity row or a systematic
    // column of the coefficient grid, so failures are memoized on the
    // scaling-canonical profile. The first assignment whose profile is not
    // known-bad is checked for real, keeping lex-first semantics exact.
    std::set<std::vector<Field::Elem>> failed_profiles;
    auto profile = [&]() {
        std::vector<Field::Elem> key;
        key.reserve(static_cast<size_t>(r - 1) * (k - 1));
        Field::Elem c00 = coeff(0, 0);
        for (int t = 1; t < r; ++t) {
            Field::Elem row = field->mul(c00, field->inv(coeff(t, 0)));
            for (int j = 1; j < k; ++j)
                key.push_back(field->mul(field->mul(coeff(t, j), row),
                                         field->inv(coeff(0, j))));
        }
        return key;
    };

    std::vector<std::vector<Mat<Field>>> coding(r, std::vector<Mat<Field>>(k));
    while (true) {
        bool found = false;
        if (!failed_profiles.count(profile())) {
            for (int t = 0; t < r; ++t)
                for (int j = 0; j < k; ++j)
                    coding[t][j] =
                        perm_pow[static_cast<size_t>(t) * k + j].scaled(coeff(t, j));
            found = true;
            for (const auto& c : checks) {
                if (!block_invertible(coding, c.parities, c.missing, field, alpha)) {
                    found = false;
                    failed_profiles.insert(profile());
                    break;
                }
            }
        }
        if (found) break;
        // Lexicographic odometer over nonzero coefficients, last index fastest.
        int pos = static_cast<int>(pick.size()) - 1;
        while (pos >= 0 && pick[pos] == nonzero - 1) pick[pos--] = 0;
        if (pos < 0)
            throw std::domain_error("coefficient search exhausted: field too small for MDS");
        ++pick[pos];
    }

    MsrCode code;
    code.params = params;
    code.coding = std::move(coding);
    code.repair.assign(n, std::vector<Mat<Field>>(k));
    for (int i = 0; i < k; ++i) {
        Mat<Field> sel = slab_selection(field, alpha, i, r);
        for (int j = 0; j < n; ++j)
            if (j != i) code.repair[j][i] = sel;
    }

    auto mds = verify_mds(code);
    if (!mds.ok) throw std::logic_error("constructed code failed the MDS verifier");
    auto rep = verify_exact_repair(code);
    if (!rep.ok) throw std::logic_error("constructed code failed the exact-repair verifier");
    for (int j = 0; j < k; ++j)
        if (!verify_subspace_conditions(code, j).ok)
            throw std::logic_error("constructed code failed the subspace conditions");
    return code;
}

std::vector<std::vector<Field::Elem>> encode(
    const MsrCode& code, const std::vector<std::vector<Field::Elem>>& systematic) {
    return encode_symbols<Field>(code, systematic, code.params.field);
}

MdsReport verify_mds(const MsrCode& code) {
    const auto& p = code.params;
    MdsReport report;
    report.ok = true;
    for (const auto& subset : subsets(p.n, p.k)) {
        std::vector<Mat<Field>> blocks;
        blocks.reserve(subset.size());
        for (int node : subset) blocks.push_back(code.node_map(node));
        int rk = rank(Mat<Field>::vstack_all(blocks));
        ++report.subsets_checked;
        if (rk != p.k * p.alpha) {
            report.ok = false;
            report.failures.push_back({subset, rk});
        }
    }
    return report;
}

RepairValidityReport verify_exact_repair(const MsrCode& code) {
    const auto& p = code.params;
    RepairValidityReport report;
    report.ok = true;
    for (int i = 0; i < p.k; ++i) {
        std::vector<Mat<Field>> rows;
        for (int j = 0; j < p.n; ++j) {
            if (j == i) continue;
            rows.push_back(code.repair_matrix(j, i) * code.node_map(j));
        }
        Mat<Field> stacked = Mat<Field>::vstack_all(rows);
        std::vector<int> other_cols;
        for (int c = 0; c < p.k * p.alpha; ++c)
            if (c / p.alpha != i) other_cols.push_back(c);
        // The lost block is determined iff its columns add full dimension on
        // top of everything the transcripts say about the other blocks.
        if (rank(stacked) != rank(stacked.select_cols(other_cols)) + p.alpha) {
            report.ok = false;
            report.failing_nodes.push_back(i);
        }
    }
    return report;
}

AlignmentReport verify_subspace_conditions(const MsrCode& code, int j) {
    const auto& p = code.params;
    if (j < 0 || j >= p.k) throw std::out_of_range("node not systematic");
    const int r = p.parity_count();
    AlignmentReport report;
    report.node = j;

    std::vector<Mat<Field>> own_projections;
    own_projections.reserve(r);
    for (int t = 0; t < r; ++t)
        own_projections.push_back(code.repair_matrix(p.k + t, j) * code.coding[t][j]);
    report.span_dim = subspace_sum_dim(own_projections);
    report.span_ok = report.span_dim == p.alpha;

    bool interference_ok = true;
    for (int i = 0; i < p.k; ++i) {
        if (i == j) continue;
        bool ok = true;
        if (r == 2) {
            // Literal two-parity conditions: S_1 A_i, S_2 B_i and V_{i,j}
            // are one and the same subspace.
            Mat<Field> s1a = code.repair_matrix(p.k, j) * code.coding[0][i];
            Mat<Field> s2b = code.repair_matrix(p.k + 1, j) * code.coding[1][i];
            ok = same_rowspace(s1a, s2b) && same_rowspace(s2b, code.repair_matrix(i, j));
        } else {
            // Generalized form: every parity-projected interference block
            // must land inside what helper i transmits.
            for (int t = 0; t < r && ok; ++t) {
                Mat<Field> proj = code.repair_matrix(p.k + t, j) * code.coding[t][i];
                ok = rowspace_contains(code.repair_matrix(i, j), proj);
            }
        }
        report.interference.push_back({i, ok});
        interference_ok = interference_ok && ok;
    }
    report.ok = report.span_ok && interference_ok;
    return report;
}

SpanProfile repair_span_profile(const MsrCode& code, int helper,
                                const std::vector<int>& failed_set) {
    const auto& p = code.params;
    if (helper < 0 || helper >= p.k) throw std::invalid_argument("helper must be systematic");
    for (int j : failed_set) {
        if (j == helper) throw std::invalid_argument("helper cannot appear in the failed set");
        if (j < 0 || j >= p.k) throw std::invalid_argument("failed set must be systematic");
    }
    SpanProfile out;
    if (failed_set.empty()) {
        out.dim = 0;
        out.bound = Rational(0);
        out.meets = true;
        return out;
    }
    std::vector<Mat<Field>> parts;
    parts.reserve(failed_set.size());
    for (int j : failed_set) parts.push_back(code.repair_matrix(helper, j));
    out.dim = subspace_sum_dim(parts);
    Rational ratio(p.d - p.k, p.d - p.k + 1);
    out.bound = (Rational(1) - rational_pow(ratio, static_cast<int>(failed_set.size()))) *
                Rational(p.alpha);
    out.meets = Rational(out.dim) >= out.bound;
    return out;
}

}  // namespace secdss
