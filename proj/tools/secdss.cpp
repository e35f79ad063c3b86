#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "secdss/galois.hpp"
#include "secdss/msrcode.hpp"
#include "secdss/secrecy.hpp"
#include "secdss/serialize.hpp"
#include "secdss/sim.hpp"

namespace {

using namespace secdss;

constexpr int kExitOk = 0;
constexpr int kExitSecrecyViolation = 1;
constexpr int kExitVerificationFailure = 2;
constexpr int kExitConfigError = 64;

struct Options {
    int n = 4, k = 2;
    std::optional<int> d;
    std::optional<std::uint32_t> p;
    std::optional<int> m;
    std::vector<Field::Elem> modulus;
    std::optional<int> tower_degree;
    std::optional<int> l1_max, l2_max;
    std::vector<int> es, ed;  // 1-based on the command line
    std::optional<int> ms;
    std::uint64_t seed = 0;
    std::string out;
    std::string code_path;
    std::vector<int> fail_sequence;  // 1-based
    int max_alpha = 4096;
    int n_max = 8;
    bool no_achieved = false;
    std::string config_path;
};

void apply_config_file(CLI::App& app, Options& o) {
    if (o.config_path.empty()) return;
    Json cfg = Json::parse(read_text_file(o.config_path));
    // A config value applies only when the same option was not given on the
    // command line, either globally or on the parsed subcommand.
    auto unset = [&](const char* name) {
        auto set_on = [&](const CLI::App* a) {
            const CLI::Option* opt = a->get_option_no_throw(name);
            return opt != nullptr && opt->count() > 0;
        };
        if (set_on(&app)) return false;
        for (const CLI::App* sub : app.get_subcommands())
            if (set_on(sub)) return false;
        return true;
    };
    if (cfg.contains("n") && unset("--n")) o.n = cfg["n"].get<int>();
    if (cfg.contains("k") && unset("--k")) o.k = cfg["k"].get<int>();
    if (cfg.contains("d") && unset("--d")) o.d = cfg["d"].get<int>();
    if (cfg.contains("field")) {
        const auto& f = cfg["field"];
        if (unset("--p")) o.p = f.at("p").get<std::uint32_t>();
        if (unset("--m")) o.m = f.at("m").get<int>();
        if (f.contains("modulus") && unset("--modulus"))
            o.modulus = f["modulus"].get<std::vector<Field::Elem>>();
    }
    if (cfg.contains("tower_degree") && unset("--tower-degree"))
        o.tower_degree = cfg["tower_degree"].get<int>();
    if (cfg.contains("l1_max") && unset("--l1-max")) o.l1_max = cfg["l1_max"].get<int>();
    if (cfg.contains("l2_max") && unset("--l2-max")) o.l2_max = cfg["l2_max"].get<int>();
    if (cfg.contains("es") && unset("--es")) o.es = cfg["es"].get<std::vector<int>>();
    if (cfg.contains("ed") && unset("--ed")) o.ed = cfg["ed"].get<std::vector<int>>();
    if (cfg.contains("ms") && unset("--ms")) o.ms = cfg["ms"].get<int>();
    if (cfg.contains("seed") && unset("--seed")) o.seed = cfg["seed"].get<std::uint64_t>();
    if (cfg.contains("out") && unset("--out")) o.out = cfg["out"].get<std::string>();
    if (cfg.contains("code") && unset("--code")) o.code_path = cfg["code"].get<std::string>();
    if (cfg.contains("fail") && unset("--fail"))
        o.fail_sequence = cfg["fail"].get<std::vector<int>>();
    if (cfg.contains("max_alpha") && unset("--max-alpha"))
        o.max_alpha = cfg["max_alpha"].get<int>();
    if (cfg.contains("n_max") && unset("--n-max")) o.n_max = cfg["n_max"].get<int>();
    if (cfg.contains("no_achieved") && unset("--no-achieved"))
        o.no_achieved = cfg["no_achieved"].get<bool>();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

FieldPtr explicit_field(const Options& o) {
    if (!o.p) return nullptr;
    std::optional<std::vector<Field::Elem>> mod;
    if (!o.modulus.empty()) mod = o.modulus;
    return Field::make(*o.p, o.m.value_or(1), mod);
}

// Deterministic construction-field ladder used when no field is requested:
// GF(4) first (the default for two parities), then the next prime powers
// until the verifying coefficient search succeeds.
MsrCode construct_with_ladder(const Options& o, Json* log) {
    int r = o.n - o.k;
    if (FieldPtr f = explicit_field(o)) {
        MsrCode code = zigzag_construct(o.k, r, f, o.max_alpha);
        if (log) (*log)["field"] = field_to_json(*f);
        return code;
    }
    const std::pair<std::uint32_t, int> ladder[] = {{2, 2},  {5, 1}, {7, 1}, {2, 3},
                                                    {3, 2},  {11, 1}, {13, 1}, {2, 4}};
    std::string attempts;
    for (auto [p, m] : ladder) {
        FieldPtr f = Field::make(p, m);
        try {
            MsrCode code = zigzag_construct(o.k, r, f, o.max_alpha);
            if (log) (*log)["field"] = field_to_json(*f);
            return code;
        } catch (const std::domain_error&) {
            attempts += " GF(" + std::to_string(f->order()) + ")";
        }
    }
    throw std::domain_error("no ladder field admits an MDS coefficient assignment; tried:" +
                            attempts);
}

Json verification_report(const MsrCode& code) {
    const auto& p = code.params;
    Json rep;
    rep["params"] = params_to_json(p);
    rep["bandwidth_identity_ok"] = p.beta * (p.d - p.k + 1) == p.alpha;
    auto mds = verify_mds(code);
    rep["mds_ok"] = mds.ok;
    rep["mds_subsets_checked"] = mds.subsets_checked;
    if (!mds.ok) {
        Json fails = Json::array();
        for (const auto& f : mds.failures) {
            Json e;
            std::vector<int> ids;
            for (int v : f.subset) ids.push_back(v + 1);
            e["subset"] = ids;
            e["rank"] = f.rank;
            fails.push_back(std::move(e));
        }
        rep["mds_failures"] = std::move(fails);
    }
    auto repair = verify_exact_repair(code);
    rep["exact_repair_ok"] = repair.ok;
    bool coding_ok = true;
    for (const auto& row : code.coding)
        for (const auto& a : row) coding_ok = coding_ok && rank(a) == p.alpha;
    rep["coding_invertible_ok"] = coding_ok;
    bool projections_ok = true;
    for (int helper = 0; helper < p.n; ++helper)
        for (int failed = 0; failed < p.k; ++failed)
            if (helper != failed)
                projections_ok =
                    projections_ok && rank(code.repair_matrix(helper, failed)) == p.beta;
    rep["repair_full_rank_ok"] = projections_ok;
    Json alignment = Json::array();
    bool align_ok = true;
    for (int j = 0; j < p.k; ++j) {
        auto a = verify_subspace_conditions(code, j);
        Json e;
        e["node"] = j + 1;
        e["ok"] = a.ok;
        e["span_dim"] = a.span_dim;
        alignment.push_back(std::move(e));
        align_ok = align_ok && a.ok;
    }
    rep["subspace_conditions"] = std::move(alignment);
    rep["ok"] = rep["bandwidth_identity_ok"].get<bool>() && mds.ok && repair.ok &&
                coding_ok && projections_ok && align_ok;
    return rep;
}

MsrCode load_or_construct(const Options& o, Json* log) {
    if (!o.code_path.empty()) {
        MsrCode code = code_from_json(Json::parse(read_text_file(o.code_path)));
        auto rep = verification_report(code);
        if (!rep["ok"].get<bool>()) throw std::runtime_error("loaded code fails verification");
        return code;
    }
    return construct_with_ladder(o, log);
}

EavesdropperPattern pattern_from_options(const Options& o) {
    EavesdropperPattern pat;
    for (int i : o.es) pat.stored_only.push_back(i - 1);
    for (int i : o.ed) pat.repair_observed.push_back(i - 1);
    std::sort(pat.stored_only.begin(), pat.stored_only.end());
    std::sort(pat.repair_observed.begin(), pat.repair_observed.end());
    return pat;
}

TowerPtr tower_for(const MsrCode& code, const Options& o) {
    int need = code.params.k * code.params.alpha;
    return Tower::make(code.params.field, o.tower_degree.value_or(need));
}

int cmd_construct(const Options& o) {
    if (o.d && *o.d != o.n - 1) {
        std::cerr << "error: no achievable construction exists for d < n-1\n";
        return kExitConfigError;
    }
    Json log;
    MsrCode code = construct_with_ladder(o, &log);
    Json rep = verification_report(code);
    rep["field"] = log["field"];
    std::string code_path = o.out.empty() ? "code.json" : o.out;
    write_text_file(code_path, code_to_json(code).dump(2) + "\n");
    rep["code_file"] = code_path;
    std::cout << rep.dump(2) << "\n";
    return rep["ok"].get<bool>() ? kExitOk : kExitVerificationFailure;
}

int cmd_verify(const Options& o) {
    if (o.code_path.empty()) {
        std::cerr << "error: verify needs --code\n";
        return kExitConfigError;
    }
    MsrCode code = code_from_json(Json::parse(read_text_file(o.code_path)));
    Json rep = verification_report(code);
    std::cout << rep.dump(2) << "\n";
    return rep["ok"].get<bool>() ? kExitOk : kExitVerificationFailure;
}

int cmd_capacity(const Options& o) {
    Json log;
    MsrCode code = load_or_construct(o, &log);
    const auto& p = code.params;
    TowerPtr tower;
    if (!o.no_achieved && p.d == p.n - 1) {
        try {
            tower = tower_for(code, o);
        } catch (const std::invalid_argument&) {
            tower = nullptr;  // k*alpha positions exceed the exact-arithmetic range
        }
    }
    std::string csv = capacity_csv_header() + "\n";
    int l1_cap = o.l1_max.value_or(p.k - 1);
    int l2_cap = o.l2_max.value_or(p.k - 1);
    for (int l1 = 0; l1 <= l1_cap && l1 < p.k; ++l1) {
        for (int l2 = 0; l2 <= l2_cap && l1 + l2 < p.k; ++l2) {
            Rational bound = secrecy_upper_bound(p.n, p.k, p.d, p.alpha, l1, l2);
            std::string achieved;
            if (tower) {
                auto res = max_secure_filesize(code, l1, l2, tower);
                achieved = std::to_string(res.achieved_positions);
            }
            csv += capacity_csv_row(p.n, p.k, p.d, p.alpha, l1, l2, bound, achieved) + "\n";
        }
    }
    emit(csv, o.out);
    return kExitOk;
}

int cmd_attack(const Options& o) {
    Json log;
    MsrCode code = load_or_construct(o, &log);
    const auto& p = code.params;
    EavesdropperPattern pattern = pattern_from_options(o);
    pattern.validate(p);

    TowerPtr tower = tower_for(code, o);
    int total = p.k * p.alpha;
    int ms = o.ms.value_or(
        static_cast<int>(msr_secrecy_capacity(p.n, p.k, pattern.l1(), pattern.l2()).value));
    Precoder pre = gabidulin_precoder(total, ms, tower);

    // Run the storage system for real: store, repair every observed node,
    // and let the eavesdropper accumulate its transcript.
    std::vector<Tower::Elem> secret(ms);
    std::mt19937_64 rng(o.seed + 1);
    for (auto& s : secret) s = rng() % tower->order();
    DssSim sim = DssSim::store(code, pre, secret, o.seed);
    EveLog evelog = sim.eve_start(pattern);
    sim.eve_observe_stored(evelog);
    for (int node : pattern.repair_observed) {
        RepairEvent ev = sim.fail_and_repair(node);
        sim.eve_observe_repair(evelog, ev);
    }
    if (!sim.log_consistent(evelog)) throw std::runtime_error("eve log inconsistent");
    int leaked = sim.attempt_decode(evelog);

    LeakageReport report = leakage_accounting(code, pattern, &pre);
    if (report.secrecy_ok != (leaked == 0))
        throw std::runtime_error("static secrecy check disagrees with the simulated attack");
    Json j = leakage_report_to_json(report);
    j["leaked_positions"] = leaked;
    j["secret_positions"] = ms;
    j["position_base_symbols"] = tower->ext_degree();
    emit(j.dump(2) + "\n", o.out);
    return report.secrecy_ok ? kExitOk : kExitSecrecyViolation;
}

int cmd_simulate(const Options& o) {
    Json log;
    MsrCode code = load_or_construct(o, &log);
    const auto& p = code.params;
    TowerPtr tower = tower_for(code, o);
    int total = p.k * p.alpha;
    int ms = o.ms.value_or(total);
    Precoder pre = gabidulin_precoder(total, ms, tower);

    std::vector<Tower::Elem> secret(ms);
    std::mt19937_64 rng(o.seed + 1);
    for (auto& s : secret) s = rng() % tower->order();
    DssSim sim = DssSim::store(code, pre, secret, o.seed);
    std::string initial_digest = sim.digest();

    std::optional<EavesdropperPattern> pattern;
    if (!o.es.empty() || !o.ed.empty()) {
        pattern = pattern_from_options(o);
        pattern->validate(p);
    }
    std::optional<EveLog> evelog;
    if (pattern) {
        evelog = sim.eve_start(*pattern);
        sim.eve_observe_stored(*evelog);
    }

    std::vector<int> fails = o.fail_sequence;
    if (fails.empty())
        for (int i = 1; i <= p.k; ++i) fails.push_back(i);

    std::string lines;
    Json store_ev;
    store_ev["type"] = "store";
    store_ev["secret_positions"] = ms;
    store_ev["seed"] = o.seed;
    store_ev["digest"] = initial_digest;
    lines += store_ev.dump() + "\n";

    for (int node1 : fails) {
        RepairEvent ev = sim.fail_and_repair(node1 - 1);
        if (evelog && std::binary_search(pattern->repair_observed.begin(),
                                         pattern->repair_observed.end(), ev.failed))
            sim.eve_observe_repair(*evelog, ev);
        Json e;
        e["type"] = "repair";
        e["node"] = node1;
        std::vector<int> helpers;
        for (int h : ev.helpers) helpers.push_back(h + 1);
        e["helpers"] = helpers;
        e["download_symbols"] = static_cast<long long>(p.d) * p.beta;
        Json digests;
        for (const auto& [helper, values] : ev.transcripts) {
            std::uint64_t h = fnv1a64(values.data(), values.size() * sizeof(Tower::Elem));
            std::ostringstream hex;
            hex << std::hex << h;
            digests[std::to_string(helper + 1)] = hex.str();
        }
        e["transcript_digests"] = std::move(digests);
        lines += e.dump() + "\n";
    }

    bool invariant_ok = sim.digest() == initial_digest;
    auto collected = sim.collect([&] {
        std::vector<int> subset;
        for (int i = 0; i < p.k; ++i) subset.push_back(i);
        return subset;
    }());
    bool collect_ok = collected == secret;

    int leaked = 0;
    if (evelog) leaked = sim.attempt_decode(*evelog);

    Json fin;
    fin["type"] = "final";
    fin["digest"] = sim.digest();
    fin["invariant_ok"] = invariant_ok;
    fin["collect_ok"] = collect_ok;
    if (evelog) fin["leaked_positions"] = leaked;
    lines += fin.dump() + "\n";
    emit(lines, o.out);

    if (!invariant_ok || !collect_ok) return kExitVerificationFailure;
    if (evelog && leaked > 0) return kExitSecrecyViolation;
    return kExitOk;
}

int cmd_fig1(const Options& o) {
    Fig1Report rep = repair_leak_demo();
    emit(rep.text + "\n", o.out);
    return rep.as_expected ? kExitOk : kExitVerificationFailure;
}

int cmd_table(const Options& o) {
    std::string csv = capacity_csv_header() + "\n";
    for (int n = 2; n <= o.n_max; ++n)
        for (int k = 1; k < n; ++k)
            for (int l1 = 0; l1 < k; ++l1)
                for (int l2 = 0; l1 + l2 < k; ++l2) {
                    auto cap = msr_secrecy_capacity(n, k, l1, l2);
                    csv += capacity_csv_row(n, k, n - 1, cap.alpha, l1, l2,
                                            Rational(cap.value), "") +
                           "\n";
                }
    emit(csv, o.out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Construction, verification, attack simulation and capacity tables for "
                 "eavesdropper-resistant regenerating codes"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.add_option("--config", o.config_path, "JSON config file; flags override its values");
    app.add_option("--seed", o.seed, "deterministic seed for keys and data fills");
    app.add_option("--out", o.out, "output path (default: stdout, construct: code.json)");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--n", o.n, "total nodes");
        sub->add_option("--k", o.k, "reconstruction degree");
        sub->add_option("--d", o.d, "repair degree (must be n-1 for construction)");
        sub->add_option("--p", o.p, "field characteristic");
        sub->add_option("--m", o.m, "field extension degree");
        sub->add_option("--modulus", o.modulus, "field modulus coefficients, constant first");
        sub->add_option("--max-alpha", o.max_alpha, "guard on r^k");
        sub->add_option("--code", o.code_path, "existing code file");
        sub->add_option("--tower-degree", o.tower_degree, "extension degree for the precoder");
    };

    CLI::App* construct = app.add_subcommand("construct", "build and verify a code");
    add_common(construct);
    CLI::App* verify = app.add_subcommand("verify", "re-verify a code file");
    verify->add_option("--code", o.code_path, "code file to verify");
    CLI::App* capacity = app.add_subcommand("capacity", "bound/achieved table for one code");
    add_common(capacity);
    capacity->add_option("--l1-max", o.l1_max, "largest stored-only count");
    capacity->add_option("--l2-max", o.l2_max, "largest repair-observed count");
    capacity->add_flag("--no-achieved", o.no_achieved, "skip the achievability search");
    CLI::App* attack = app.add_subcommand("attack", "run one eavesdropper pattern");
    add_common(attack);
    attack->add_option("--es", o.es, "stored-only nodes (1-based)");
    attack->add_option("--ed", o.ed, "repair-observed systematic nodes (1-based)");
    attack->add_option("--ms", o.ms, "secret positions (default: the capacity value)");
    CLI::App* simulate = app.add_subcommand("simulate", "failure/repair event log");
    add_common(simulate);
    simulate->add_option("--es", o.es, "stored-only nodes (1-based)");
    simulate->add_option("--ed", o.ed, "repair-observed systematic nodes (1-based)");
    simulate->add_option("--ms", o.ms, "secret positions (default: all of them)");
    simulate->add_option("--fail", o.fail_sequence, "failure sequence (default: 1..k)");
    CLI::App* fig1 = app.add_subcommand("fig1", "single-key repair-leak walkthrough");
    CLI::App* table = app.add_subcommand("table", "capacity formula sweep");
    table->add_option("--n-max", o.n_max, "largest node count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfigError;
    }

    try {
        apply_config_file(app, o);
        if (construct->parsed()) return cmd_construct(o);
        if (verify->parsed()) return cmd_verify(o);
        if (capacity->parsed()) return cmd_capacity(o);
        if (attack->parsed()) return cmd_attack(o);
        if (simulate->parsed()) return cmd_simulate(o);
        if (fig1->parsed()) return cmd_fig1(o);
        if (table->parsed()) return cmd_table(o);
        std::cerr << "error: no subcommand\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return kExitVerificationFailure;
    }
}
