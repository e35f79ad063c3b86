#pragma once

#include <map>
#include <memory>
#include <vector>

#include "secdss/galois.hpp"
#include "secdss/matgf.hpp"
#include "secdss/rational.hpp"
#include "secdss/tower.hpp"

namespace secdss {

/// Parameters of an (n,k,d) distributed storage system at the minimum-storage
/// point: n nodes of alpha symbols each, any k reconstruct, failed nodes are
/// rebuilt from d helpers downloading beta symbols per helper, with
/// d*beta = d*alpha/(d-k+1) holding exactly.
struct DssParams {
    int n = 0;
    int k = 0;
    int d = 0;
    int alpha = 0;
    int beta = 0;
    FieldPtr field;

    int parity_count() const { return n - k; }
    /// Throws std::invalid_argument on any violated constraint.
    void validate() const;
};

/// Systematic MSR code: node j < k stores the data vector w_j verbatim;
/// parity node k+t stores sum_j coding[t][j] * w_j. Repair of systematic node
/// i downloads repair_matrix(j, i) * w_j from every helper j.
struct MsrCode {
    DssParams params;
    /// coding[t][j]: alpha x alpha coding matrix, parity t in [0, n-k),
    /// systematic j in [0, k).
    std::vector<std::vector<Mat<Field>>> coding;
    /// repair[j][i]: beta x alpha matrix applied by helper j in [0, n) when
    /// systematic node i in [0, k) is repaired; unused for j == i.
    std::vector<std::vector<Mat<Field>>> repair;

    const Mat<Field>& repair_matrix(int helper, int failed) const;
    /// alpha x k*alpha map from stacked systematic data to node contents.
    Mat<Field> node_map(int node) const;
};

struct MdsFailure {
    std::vector<int> subset;  // 0-based node ids
    int rank = 0;
};

struct MdsReport {
    bool ok = false;
    int subsets_checked = 0;
    std::vector<MdsFailure> failures;
};

struct RepairValidityReport {
    bool ok = false;
    std::vector<int> failing_nodes;  // systematic nodes whose repair is not determined
};

struct AlignmentCheck {
    int interfering_node = 0;
    bool ok = false;
};

/// Outcome of the subspace conditions for the repair of one systematic node:
/// every parity-projected interference block from node i aligns with the
/// subspace V_{i,j} the helper transmits, and the projections addressed to
/// the node itself jointly span the full space.
struct AlignmentReport {
    int node = 0;
    bool ok = false;
    bool span_ok = false;
    int span_dim = 0;
    std::vector<AlignmentCheck> interference;
};

struct SpanProfile {
    int dim = 0;
    Rational bound;
    bool meets = false;
};

/// Builds an (n, k, d=n-1) MSR code with n = k + r, alpha = r^k and
/// beta = r^(k-1) over the given field.
///
/// Storage coordinates are indexed by vectors v in Z_r^k encoded as
/// sum_t v_t * r^t (digit t belongs to systematic node t). Parity t uses
/// coding matrices c[t][j] * P_j^t where P_j is the permutation adding one to
/// digit j, and every helper projects onto the coordinate slab {v : v_i = 0}
/// when node i is repaired. The nonzero coefficients c[t][j] are found by a
/// deterministic lexicographic search, keeping the first assignment that
/// makes every k-subset reconstruction invertible; the MDS, exact-repair and
/// alignment verifiers all run before the code is returned.
///
/// Throws std::domain_error when the search exhausts the field and
/// std::invalid_argument when r^k exceeds max_alpha.
MsrCode zigzag_construct(int k, int r, FieldPtr field, int max_alpha = 4096);

/// Systematic encode over any symbol field carrying the code's base field
/// (the base field itself, or an extension tower over it).
template <class SF>
std::vector<std::vector<typename SF::Elem>> encode_symbols(
    const MsrCode& code, const std::vector<std::vector<typename SF::Elem>>& systematic,
    const std::shared_ptr<const SF>& sym);

/// Base-field encode: nodes 0..k-1 store the inputs verbatim, parity node
/// k+t stores sum_j coding[t][j] * w_j.
std::vector<std::vector<Field::Elem>> encode(
    const MsrCode& code, const std::vector<std::vector<Field::Elem>>& systematic);

/// Checks that every k-subset of nodes determines the systematic data: the
/// stacked k*alpha x k*alpha map must be invertible. Failures are report
/// content, not errors.
MdsReport verify_mds(const MsrCode& code);

/// Structural exact-repair check: for every systematic node, the stacked
/// helper transcripts pin down the lost block uniquely.
RepairValidityReport verify_exact_repair(const MsrCode& code);

/// Rebuilds systematic node `failed` from helper transcripts
/// {j -> repair_matrix(j, failed) * w_j} taken over all survivors (d = n-1).
/// Throws std::runtime_error if the transcripts do not determine the block.
template <class SF>
std::vector<typename SF::Elem> exact_repair(
    const MsrCode& code, int failed,
    const std::map<int, std::vector<typename SF::Elem>>& transcripts,
    const std::shared_ptr<const SF>& sym);

/// Subspace conditions for the repair of systematic node j. For two parities
/// this is the literal row-space equality S_1 A_i ~ S_2 B_i ~ V_{i,j} plus
/// S_1 A_j + S_2 B_j spanning F^alpha; for other parity counts the
/// generalized containment form is checked.
AlignmentReport verify_subspace_conditions(const MsrCode& code, int j);

/// Dimension of the summed repair subspaces sum_{j in failed_set} V_{i,j}
/// transmitted by helper i, against the lower bound
/// (1 - ((d-k)/(d-k+1))^|set|) * alpha.
SpanProfile repair_span_profile(const MsrCode& code, int helper,
                                const std::vector<int>& failed_set);

// --- template implementations ---

namespace detail {

template <class SF>
typename SF::Elem lift_entry(const SF& sym, const Field& base, Field::Elem v);

template <>
inline Field::Elem lift_entry<Field>(const Field& sym, const Field& base, Field::Elem v) {
    if (!sym.same(base)) throw std::invalid_argument("symbol field mismatch");
    return v;
}

template <>
inline Tower::Elem lift_entry<Tower>(const Tower& sym, const Field& base, Field::Elem v) {
    if (!sym.base()->same(base)) throw std::invalid_argument("tower base mismatch");
    return sym.embed(v);
}

template <class SF>
Mat<SF> lift_matrix(const Mat<Field>& m, const std::shared_ptr<const SF>& sym) {
    Mat<SF> out(sym, m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            out(i, j) = lift_entry<SF>(*sym, *m.field(), m(i, j));
    return out;
}

}  // namespace detail

template <class SF>
std::vector<std::vector<typename SF::Elem>> encode_symbols(
    const MsrCode& code, const std::vector<std::vector<typename SF::Elem>>& systematic,
    const std::shared_ptr<const SF>& sym) {
    const auto& p = code.params;
    if (static_cast<int>(systematic.size()) != p.k)
        throw std::invalid_argument("need k systematic vectors");
    for (const auto& w : systematic)
        if (static_cast<int>(w.size()) != p.alpha)
            throw std::invalid_argument("systematic vector length mismatch");
    std::vector<std::vector<typename SF::Elem>> nodes(p.n);
    for (int j = 0; j < p.k; ++j) nodes[j] = systematic[j];
    for (int t = 0; t < p.parity_count(); ++t) {
        std::vector<typename SF::Elem> acc(p.alpha, typename SF::Elem(0));
        for (int j = 0; j < p.k; ++j) {
            auto part = detail::lift_matrix<SF>(code.coding[t][j], sym).apply(systematic[j]);
            for (int i = 0; i < p.alpha; ++i) acc[i] = sym->add(acc[i], part[i]);
        }
        nodes[p.k + t] = std::move(acc);
    }
    return nodes;
}

template <class SF>
std::vector<typename SF::Elem> exact_repair(
    const MsrCode& code, int failed,
    const std::map<int, std::vector<typename SF::Elem>>& transcripts,
    const std::shared_ptr<const SF>& sym) {
    const auto& p = code.params;
    if (failed < 0 || failed >= p.k) throw std::invalid_argument("only systematic repair");
    if (static_cast<int>(transcripts.size()) != p.d)
        throw std::invalid_argument("expected one transcript per survivor");
    Mat<SF> stacked;
    std::vector<typename SF::Elem> rhs;
    bool first = true;
    for (const auto& [helper, values] : transcripts) {
        if (helper == failed || helper < 0 || helper >= p.n)
            throw std::invalid_argument("bad helper id");
        if (static_cast<int>(values.size()) != p.beta)
            throw std::invalid_argument("transcript length mismatch");
        Mat<SF> block = detail::lift_matrix<SF>(
            code.repair_matrix(helper, failed) * code.node_map(helper), sym);
        stacked = first ? block : stacked.vstack(block);
        first = false;
        rhs.insert(rhs.end(), values.begin(), values.end());
    }
    auto sol = solve(stacked, rhs);
    if (!sol.consistent) throw std::runtime_error("repair system inconsistent");
    for (int kr = 0; kr < sol.kernel.rows(); ++kr)
        for (int c = failed * p.alpha; c < (failed + 1) * p.alpha; ++c)
            if (sol.kernel(kr, c) != typename SF::Elem(0))
                throw std::runtime_error("repair system does not determine the lost block");
    return std::vector<typename SF::Elem>(sol.solution.begin() + failed * p.alpha,
                                          sol.solution.begin() + (failed + 1) * p.alpha);
}

}  // namespace secdss
