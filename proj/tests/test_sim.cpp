#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "secdss/sim.hpp"

using namespace secdss;

namespace {

DssSim make_sim(int secret_positions, std::uint64_t seed) {
    auto gf4 = Field::make(2, 2);
    MsrCode code = zigzag_construct(2, 2, gf4);
    auto tower = Tower::make(gf4, 8);
    Precoder pre = gabidulin_precoder(8, secret_positions, tower);
    std::vector<Tower::Elem> secret(secret_positions);
    std::mt19937_64 rng(seed ^ 0x5ecd55ULL);
    for (auto& s : secret) s = rng() % tower->order();
    return DssSim::store(std::move(code), std::move(pre), secret, seed);
}

}  // namespace

TEST_CASE("store") {
    // Zero inputs give the all-zero state: no keys, zero secret.
    auto gf4 = Field::make(2, 2);
    MsrCode code = zigzag_construct(2, 2, gf4);
    auto tower = Tower::make(gf4, 8);
    Precoder unkeyed = gabidulin_precoder(8, 8, tower);
    DssSim zero = DssSim::store(code, unkeyed, std::vector<Tower::Elem>(8, 0), 1);
    for (const auto& block : zero.nodes())
        for (auto v : block) CHECK(v == 0);

    // Same seed, same state; different seed, different keys.
    DssSim a = make_sim(2, 7), b = make_sim(2, 7), c = make_sim(2, 8);
    CHECK(a.digest() == b.digest());
    CHECK(a.digest() != c.digest());

    CHECK_THROWS_AS(DssSim::store(code, unkeyed, std::vector<Tower::Elem>(3, 0), 1),
                    std::invalid_argument);
}

TEST_CASE("collect recovers the secret from every k-subset") {
    DssSim sim = make_sim(2, 11);
    const auto& p = sim.code().params;
    std::vector<Tower::Elem> expected = sim.collect({0, 1});
    int subsets = 0;
    for (int a = 0; a < p.n; ++a)
        for (int b = a + 1; b < p.n; ++b) {
            CHECK(sim.collect({a, b}) == expected);
            ++subsets;
        }
    CHECK(subsets == 6);
}

TEST_CASE("fail and repair restores state") {
    DssSim sim = make_sim(2, 13);
    const auto& p = sim.code().params;
    std::string digest0 = sim.digest();
    auto secret0 = sim.collect({0, 2});

    for (int round = 0; round < 3; ++round) {
        for (int node = 0; node < p.k; ++node) {
            RepairEvent ev = sim.fail_and_repair(node);
            CHECK(ev.failed == node);
            CHECK(static_cast<int>(ev.helpers.size()) == p.d);
            long long downloaded = 0;
            for (const auto& [helper, values] : ev.transcripts)
                downloaded += static_cast<long long>(values.size());
            CHECK(downloaded == static_cast<long long>(p.d) * p.beta);  // 6 for (4,2,3)
        }
    }
    CHECK(sim.digest() == digest0);
    CHECK(sim.generation() == 6);
    CHECK(sim.collect({1, 3}) == secret0);

    CHECK_THROWS_AS(sim.fail_and_repair(2), std::invalid_argument);  // parity node
}

TEST_CASE("eavesdropper accumulation and decode attempts") {
    DssSim sim = make_sim(2, 17);

    // Empty log leaks nothing.
    EveLog empty = sim.eve_start(EavesdropperPattern{{}, {0}});
    CHECK(sim.attempt_decode(empty) == 0);

    // A capacity-sized scheme survives one observed repair.
    EveLog log = sim.eve_start(EavesdropperPattern{{}, {0}});
    RepairEvent ev = sim.fail_and_repair(0);
    sim.eve_observe_repair(log, ev);
    CHECK(sim.log_consistent(log));
    CHECK(sim.attempt_decode(log) == 0);

    // Decode dimensions grow monotonically with the log.
    DssSim sim2 = make_sim(4, 19);  // over capacity for l2 = 1
    EveLog log2 = sim2.eve_start(EavesdropperPattern{{}, {0}});
    int before = sim2.attempt_decode(log2);
    RepairEvent ev2 = sim2.fail_and_repair(0);
    sim2.eve_observe_repair(log2, ev2);
    int after = sim2.attempt_decode(log2);
    CHECK(before == 0);
    CHECK(after >= before);
    CHECK(after > 0);  // 4 > capacity 2, so one repair already leaks

    // Stored-only observation of one node leaks nothing at half capacity.
    DssSim sim3 = make_sim(4, 23);  // capacity for l1 = 1 is 4
    EveLog log3 = sim3.eve_start(EavesdropperPattern{{1}, {}});
    sim3.eve_observe_stored(log3);
    CHECK(sim3.log_consistent(log3));
    CHECK(sim3.attempt_decode(log3) == 0);
}

TEST_CASE("event order does not change what the eavesdropper ends up with") {
    auto gf4 = Field::make(2, 2);
    MsrCode code = zigzag_construct(3, 2, gf4);
    auto tower = Tower::make(gf4, 24);
    Precoder pre = gabidulin_precoder(24, 2, tower);
    std::vector<Tower::Elem> secret{5, 9};

    for (auto order : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
        DssSim sim = DssSim::store(code, pre, secret, 29);
        std::string d0 = sim.digest();
        EveLog log = sim.eve_start(EavesdropperPattern{{}, {0, 1}});
        for (int node : order) {
            RepairEvent ev = sim.fail_and_repair(node);
            sim.eve_observe_repair(log, ev);
        }
        CHECK(sim.digest() == d0);
        CHECK(sim.attempt_decode(log) == 0);
        CHECK(sim.collect({0, 1, 2}) == secret);
    }
}

TEST_CASE("unkeyed storage leaks through any observation") {
    DssSim sim = make_sim(8, 31);  // all positions secret, no keys
    EveLog log = sim.eve_start(EavesdropperPattern{{0}, {}});
    sim.eve_observe_stored(log);
    CHECK(sim.attempt_decode(log) == 32);  // a full node: alpha * N base symbols
}

TEST_CASE("decode attempts agree with the static secrecy check") {
    // Zero leaked dimensions exactly when the rank check declares the
    // pattern perfectly secret, across secret sizes on both sides of the
    // capacity.
    auto gf4 = Field::make(2, 2);
    MsrCode code = zigzag_construct(2, 2, gf4);
    auto tower = Tower::make(gf4, 8);
    for (int ms : {1, 2, 3, 5}) {
        Precoder pre = gabidulin_precoder(8, ms, tower);
        std::vector<Tower::Elem> secret(ms, 7);
        for (const auto& pat :
             {EavesdropperPattern{{}, {0}}, EavesdropperPattern{{2}, {}}}) {
            DssSim sim = DssSim::store(code, pre, secret, 99);
            EveLog log = sim.eve_start(pat);
            sim.eve_observe_stored(log);
            for (int node : pat.repair_observed) {
                RepairEvent ev = sim.fail_and_repair(node);
                sim.eve_observe_repair(log, ev);
            }
            CHECK((sim.attempt_decode(log) == 0) == perfect_secrecy_check(code, pre, pat));
        }
    }
}

TEST_CASE("single-key demo walkthrough") {
    Fig1Report rep = repair_leak_demo();
    CHECK(rep.as_expected);
    REQUIRE(rep.checks.size() == 4);
    for (int i = 0; i < 3; ++i) {
        CHECK(rep.checks[i].leaked == 0);
        CHECK(rep.checks[i].expected == 0);
    }
    CHECK(rep.checks[3].leaked == 1);
    CHECK(rep.checks[3].expected == 1);
    CHECK_FALSE(rep.text.empty());
}

TEST_CASE("demo code passes the code verifiers") {
    MsrCode code = demo_code_gf3();
    CHECK(verify_mds(code).ok);
    CHECK(verify_exact_repair(code).ok);
}
