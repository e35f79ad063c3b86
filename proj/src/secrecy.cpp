#include "secdss/secrecy.hpp"

#include <algorithm>
#include <map>

namespace secdss {

namespace {

bool sorted_unique(const std::vector<int>& v) {
    return std::is_sorted(v.begin(), v.end()) &&
           std::adjacent_find(v.begin(), v.end()) == v.end();
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

std::vector<std::vector<int>> subsets_of(const std::vector<int>& pool, int size) {
    std::vector<std::vector<int>> idx;
    std::vector<int> cur;
    subsets_rec(0, static_cast<int>(pool.size()), size, cur, idx);
    std::vector<std::vector<int>> out;
    out.reserve(idx.size());
    for (const auto& s : idx) {
        std::vector<int> mapped;
        mapped.reserve(s.size());
        for (int i : s) mapped.push_back(pool[i]);
        out.push_back(std::move(mapped));
    }
    return out;
}

}  // namespace

void EavesdropperPattern::validate(const DssParams& p) const {
    if (!sorted_unique(stored_only) || !sorted_unique(repair_observed))
        throw std::invalid_argument("pattern sets must be sorted and duplicate-free");
    for (int i : stored_only)
        if (i < 0 || i >= p.n) throw std::invalid_argument("stored-only node out of range");
    for (int i : repair_observed) {
        if (i < 0 || i >= p.k)
            throw std::invalid_argument("repair observation is limited to systematic nodes");
        if (std::binary_search(stored_only.begin(), stored_only.end(), i))
            throw std::invalid_argument("pattern sets must be disjoint");
    }
    if (l1() + l2() >= p.k)
        throw std::invalid_argument("pattern must observe fewer than k nodes");
    if (l2() > 0 && p.d != p.n - 1)
        throw std::invalid_argument("repair observation assumes all-survivor repair (d = n-1)");
}

Mat<Field> eve_view_matrix(const MsrCode& code, const EavesdropperPattern& pattern) {
    const auto& p = code.params;
    pattern.validate(p);
    Mat<Field> view(p.field, 0, p.k * p.alpha);
    for (int i : pattern.stored_only) view = view.vstack(code.node_map(i));
    for (int i : pattern.repair_observed)
        for (int j = 0; j < p.n; ++j) {
            if (j == i) continue;
            view = view.vstack(code.repair_matrix(j, i) * code.node_map(j));
        }
    return view;
}

int linear_entropy(const Mat<Field>& view) { return rank(view); }

Rational secrecy_upper_bound(int n, int k, int d, int alpha, int l1, int l2) {
    if (l1 < 0 || l2 < 0 || l1 + l2 >= k)
        throw std::invalid_argument("need l1 + l2 < k");
    if (d < k || d > n - 1) throw std::invalid_argument("need k <= d <= n-1");
    Rational ratio(d - k, d - k + 1);
    return Rational(k - l1 - l2) * rational_pow(ratio, l2) * Rational(alpha);
}

CapacityPoint msr_secrecy_capacity(int n, int k, int l1, int l2) {
    if (k < 1 || n <= k) throw std::invalid_argument("need 1 <= k < n");
    long long alpha = 1;
    for (int i = 0; i < k; ++i) alpha *= n - k;
    Rational value = secrecy_upper_bound(n, k, n - 1, static_cast<int>(alpha), l1, l2);
    if (!value.is_integer()) throw std::logic_error("capacity must be integral at alpha=(n-k)^k");
    return CapacityPoint{static_cast<int>(alpha), value.num};
}

void Precoder::validate() const {
    if (!tower) throw std::invalid_argument("precoder needs a tower");
    if (secret_size < 0 || secret_size > total)
        throw std::invalid_argument("secret size out of range");
    if (generator.rows() != total || generator.cols() != total)
        throw std::invalid_argument("generator must be total x total");
    if (rank(generator) != total) throw std::invalid_argument("generator must be invertible");
}

Precoder gabidulin_precoder(int total, int secret_size, const TowerPtr& tower) {
    if (total < 1) throw std::invalid_argument("need at least one position");
    if (secret_size < 0 || secret_size > total)
        throw std::invalid_argument("secret size out of range");
    if (tower->ext_degree() < total)
        throw std::invalid_argument("tower degree must be at least the number of positions");
    // Row i evaluates the q-powers of point g_i, so stored position i holds
    // the linearized polynomial with input coefficients evaluated at g_i.
    // Any base-field row combination an eavesdropper applies then turns into
    // a Moore block on independent points, which keeps full rank on the key
    // columns whenever the observation fits inside them.
    Mat<Tower> g(tower, total, total);
    for (int i = 0; i < total; ++i) {
        Tower::Elem point = tower->basis_elem(i);
        for (int j = 0; j < total; ++j) g(i, j) = tower->frobenius(point, j);
    }
    Precoder pre{tower, total, secret_size, std::move(g)};
    if (rank(pre.generator) != total)
        throw std::logic_error("Moore generator unexpectedly singular");
    return pre;
}

LeakageReport leakage_accounting(const MsrCode& code, const EavesdropperPattern& pattern,
                                 const Precoder* scheme) {
    const auto& p = code.params;
    pattern.validate(p);
    LeakageReport report;
    report.pattern = pattern;
    report.view_rank = linear_entropy(eve_view_matrix(code, pattern));

    // Retained set: the first k - l1 - l2 systematic nodes outside the
    // pattern. Sized exactly so the per-node accounting matches the closed
    // form; stored-only parity nodes leave more candidates than needed.
    int want = p.k - pattern.l1() - pattern.l2();
    std::vector<int> retained;
    for (int i = 0; i < p.k && static_cast<int>(retained.size()) < want; ++i) {
        bool in_es = std::binary_search(pattern.stored_only.begin(), pattern.stored_only.end(), i);
        bool in_ed =
            std::binary_search(pattern.repair_observed.begin(), pattern.repair_observed.end(), i);
        if (!in_es && !in_ed) retained.push_back(i);
    }

    long long total = 0;
    for (int i : retained) {
        int dim = 0;
        if (!pattern.repair_observed.empty()) {
            std::vector<Mat<Field>> parts;
            for (int j : pattern.repair_observed) parts.push_back(code.repair_matrix(i, j));
            dim = subspace_sum_dim(parts);
        }
        report.per_node_residual.push_back({i, p.alpha, dim});
        total += p.alpha - dim;
    }
    report.bound = Rational(total);
    report.secrecy_ok = scheme ? perfect_secrecy_check(code, *scheme, pattern) : true;
    return report;
}

bool linear_scheme_secure(const Mat<Field>& observation, int key_cols) {
    if (key_cols < 0 || key_cols > observation.cols())
        throw std::invalid_argument("key column count out of range");
    return rank(observation) == rank(observation.col_slice(0, key_cols));
}

namespace {

// Eavesdropper view of the precoded positions, flattened to the base field:
// rows act on GF(q^N) symbols, the generator mixes (keys | secret), and the
// result is one base-field matrix over the scheme's inputs.
Mat<Field> flattened_composite(const MsrCode& code, const Precoder& precoder,
                               const EavesdropperPattern& pattern) {
    const auto& p = code.params;
    if (precoder.total != p.k * p.alpha)
        throw std::invalid_argument("precoder positions must equal k*alpha");
    if (!precoder.tower->base()->same(*p.field))
        throw std::invalid_argument("precoder tower must extend the code field");
    Mat<Field> view = eve_view_matrix(code, pattern);
    Mat<Tower> composite = lift_to_tower(view, precoder.tower) * precoder.generator;
    return flatten_tower_matrix(composite);
}

}  // namespace

bool perfect_secrecy_check(const MsrCode& code, const Precoder& precoder,
                           const EavesdropperPattern& pattern) {
    if (precoder.secret_size == 0) return true;
    Mat<Field> composite = flattened_composite(code, precoder, pattern);
    return linear_scheme_secure(composite, precoder.key_count() * precoder.tower->ext_degree());
}

bool bruteforce_secrecy_check(const Mat<Field>& observation, int key_cols) {
    const auto& f = observation.field();
    const int t = observation.cols();
    if (key_cols < 0 || key_cols > t) throw std::invalid_argument("key column count out of range");
    double states = 1;
    for (int i = 0; i < t; ++i) {
        states *= static_cast<double>(f->order());
        if (states > 3e6) throw std::invalid_argument("instance too large for brute force");
    }
    const int secret_len = t - key_cols;
    std::uint64_t secret_states = 1;
    for (int i = 0; i < secret_len; ++i) secret_states *= f->order();

    std::map<std::vector<Field::Elem>, std::map<std::vector<Field::Elem>, std::uint64_t>> counts;
    std::vector<Field::Elem> z(t, 0);
    while (true) {
        std::vector<Field::Elem> obs = observation.apply(z);
        std::vector<Field::Elem> secret(z.begin() + key_cols, z.end());
        ++counts[obs][secret];
        int pos = t - 1;
        while (pos >= 0 && z[pos] == f->order() - 1) z[pos--] = 0;
        if (pos < 0) break;
        ++z[pos];
    }
    for (const auto& [obs, by_secret] : counts) {
        if (by_secret.size() != secret_states) return false;
        std::uint64_t first = by_secret.begin()->second;
        for (const auto& [secret, count] : by_secret)
            if (count != first) return false;
    }
    return true;
}

std::vector<EavesdropperPattern> enumerate_patterns(const DssParams& p, int l1, int l2) {
    if (l1 < 0 || l2 < 0 || l1 + l2 >= p.k)
        throw std::invalid_argument("need l1 + l2 < k");
    std::vector<int> all_nodes(p.n);
    for (int i = 0; i < p.n; ++i) all_nodes[i] = i;
    std::vector<EavesdropperPattern> out;
    for (const auto& es : subsets_of(all_nodes, l1)) {
        std::vector<int> remaining_sys;
        for (int i = 0; i < p.k; ++i)
            if (!std::binary_search(es.begin(), es.end(), i)) remaining_sys.push_back(i);
        for (const auto& ed : subsets_of(remaining_sys, l2)) {
            EavesdropperPattern pat{es, ed};
            pat.validate(p);
            out.push_back(std::move(pat));
        }
    }
    return out;
}

CapacitySearchResult max_secure_filesize(const MsrCode& code, int l1, int l2,
                                         const TowerPtr& tower) {
    const auto& p = code.params;
    const int total = p.k * p.alpha;
    const int n_ext = tower->ext_degree();
    CapacitySearchResult result;
    result.tower_degree = n_ext;
    result.upper_bound_positions = secrecy_upper_bound(p.n, p.k, p.d, p.alpha, l1, l2);

    auto patterns = enumerate_patterns(p, l1, l2);
    Precoder probe = gabidulin_precoder(total, 0, tower);

    // The flattened composite is independent of the key/secret split, and a
    // single elimination yields the rank of every leading column block: the
    // rank of the first c columns is the number of pivots below c.
    std::vector<std::vector<int>> pivot_cols;
    std::vector<int> full_ranks;
    pivot_cols.reserve(patterns.size());
    for (const auto& pat : patterns) {
        auto r = rref(flattened_composite(code, probe, pat));
        full_ranks.push_back(r.rank);
        pivot_cols.push_back(std::move(r.pivots));
    }

    auto secure_at = [&](int ms, int* failing) {
        for (size_t i = 0; i < patterns.size(); ++i) {
            int key_cols = (total - ms) * n_ext;
            int key_rank = static_cast<int>(
                std::lower_bound(pivot_cols[i].begin(), pivot_cols[i].end(), key_cols) -
                pivot_cols[i].begin());
            if (key_rank != full_ranks[i]) {
                if (failing) *failing = static_cast<int>(i);
                return false;
            }
        }
        return true;
    };

    long long start = std::min<long long>(result.upper_bound_positions.floor(), total);
    int achieved = 0;
    for (long long ms = start; ms >= 0; --ms) {
        if (ms == 0 || secure_at(static_cast<int>(ms), nullptr)) {
            achieved = static_cast<int>(ms);
            break;
        }
    }
    result.achieved_positions = achieved;
    result.achieved_base_symbols = static_cast<long long>(achieved) * n_ext;
    for (const auto& pat : patterns) result.certificate.push_back({pat, true});
    if (achieved < total) {
        int failing = -1;
        if (!secure_at(achieved + 1, &failing) && failing >= 0)
            result.tight_failure = patterns[failing];
    }
    return result;
}

}  // namespace secdss
