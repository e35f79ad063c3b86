#pragma once

#include <optional>
#include <vector>

#include "secdss/msrcode.hpp"
#include "secdss/rational.hpp"
#include "secdss/tower.hpp"

namespace secdss {

/// Which nodes the eavesdropper sees: stored contents only for the nodes in
/// stored_only (any nodes), full repair downloads for the systematic nodes in
/// repair_observed. The sets are disjoint and together smaller than k.
/// Node ids are 0-based here; serialization uses 1-based ids.
struct EavesdropperPattern {
    std::vector<int> stored_only;      // E_s, sorted
    std::vector<int> repair_observed;  // E_d, sorted, subset of [0, k)

    int l1() const { return static_cast<int>(stored_only.size()); }
    int l2() const { return static_cast<int>(repair_observed.size()); }
    void validate(const DssParams& p) const;
};

/// Everything the pattern reveals as one linear map from the k*alpha
/// systematic coordinates to observed symbols: the full node map for each
/// stored-only node, and one repair event's transcripts (from all survivors)
/// for each repair-observed node. The failed node's own contents are implied
/// by its transcripts and add no extra rows.
Mat<Field> eve_view_matrix(const MsrCode& code, const EavesdropperPattern& pattern);

/// Rank of a view; the entropy of the observation in field symbols when the
/// underlying data is uniform.
int linear_entropy(const Mat<Field>& view);

/// Upper bound on the secure file size of an (n,k,d) MSR code with storage
/// alpha when l1 nodes are stored-observed and l2 systematic repairs are
/// seen: (k-l1-l2) * (1 - 1/(d-k+1))^l2 * alpha, in alpha-units.
Rational secrecy_upper_bound(int n, int k, int d, int alpha, int l1, int l2);

struct CapacityPoint {
    int alpha = 0;        // (n-k)^k
    long long value = 0;  // integer capacity in alpha-units
};

/// Achievable secrecy capacity at d = n-1 and alpha = (n-k)^k:
/// (k-l1-l2) * (1 - 1/(n-k))^l2 * alpha, an exact integer.
CapacityPoint msr_secrecy_capacity(int n, int k, int l1, int l2);

struct NodeResidual {
    int node = 0;        // 0-based systematic node id
    int alpha = 0;       // stored entropy
    int repair_dim = 0;  // dim of the summed repair subspaces it leaks
};

struct LeakageReport {
    EavesdropperPattern pattern;
    int view_rank = 0;
    std::vector<NodeResidual> per_node_residual;
    Rational bound;  // serialized under the wire key "thm1_bound"
    bool secrecy_ok = true;
};

/// Linear precoder over a tower GF(q) in GF(q^N): an invertible total x total
/// generator mixing key symbols (first key_count inputs) with secret symbols
/// (last secret_size inputs) into the stored positions.
struct Precoder {
    TowerPtr tower;
    int total = 0;        // stored positions, = k*alpha when used with a code
    int secret_size = 0;  // secret positions
    Mat<Tower> generator;

    int key_count() const { return total - secret_size; }
    void validate() const;
};

/// Moore-matrix precoder: generator[i][j] = g_j^(q^i) with evaluation points
/// g_j the first `total` polynomial-basis elements of the tower, which are
/// base-field independent, so the generator is invertible. Requires
/// ext_degree >= total.
Precoder gabidulin_precoder(int total, int secret_size, const TowerPtr& tower);

/// Per-retained-node accounting of what a pattern leaks. The retained set R
/// is the first k-l1-l2 systematic nodes outside the pattern; the reported
/// bound sum_{i in R} (alpha - dim sum_{j in E_d} V_{i,j}) equals the closed
/// form of secrecy_upper_bound whenever the repair subspaces meet the
/// subspace-sum bound with equality. When a scheme is supplied its secrecy
/// verdict is included; with no scheme the verdict is vacuously true.
LeakageReport leakage_accounting(const MsrCode& code, const EavesdropperPattern& pattern,
                                 const Precoder* scheme = nullptr);

/// Rank test for a linear scheme given the flattened observation map on
/// (keys | secret) inputs: the observation reveals nothing about the secret
/// iff the secret columns add no rank to the key columns.
bool linear_scheme_secure(const Mat<Field>& observation, int key_cols);

/// Perfect secrecy of (code, precoder) against a pattern: the eavesdropper's
/// composite map is flattened to the base field and checked for rank
/// equality between all inputs and key inputs only.
bool perfect_secrecy_check(const MsrCode& code, const Precoder& precoder,
                           const EavesdropperPattern& pattern);

/// Independent oracle: enumerates every (key, secret) assignment of a small
/// explicit scheme and tests that each observable value leaves the secret
/// exactly uniform. Guarded to q^inputs <= 3e6; throws when larger.
bool bruteforce_secrecy_check(const Mat<Field>& observation, int key_cols);

/// All patterns with the given part sizes, in deterministic order.
std::vector<EavesdropperPattern> enumerate_patterns(const DssParams& p, int l1, int l2);

struct PatternCheck {
    EavesdropperPattern pattern;
    bool ok = false;
};

struct CapacitySearchResult {
    int achieved_positions = 0;            // GF(q^N) positions, alpha-units
    long long achieved_base_symbols = 0;   // = achieved_positions * N
    Rational upper_bound_positions;        // closed-form bound for comparison
    int tower_degree = 0;                  // N, the positions-to-symbols factor
    std::vector<PatternCheck> certificate; // every pattern checked at the result
    std::optional<EavesdropperPattern> tight_failure;  // a pattern failing one above
};

/// Largest secret size (in positions) for which the Moore precoder passes
/// perfect_secrecy_check against every pattern with parts (l1, l2),
/// descending from the closed-form bound. The certificate lists all patterns
/// checked; when the result is below the total, a witness pattern failing at
/// one position more is included.
CapacitySearchResult max_secure_filesize(const MsrCode& code, int l1, int l2,
                                         const TowerPtr& tower);

}  // namespace secdss
