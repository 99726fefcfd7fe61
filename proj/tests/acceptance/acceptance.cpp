// Copyright 2026 The QTSL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance driver. Each criterion prints one PASS/FAIL line and the
// process exits 0 only if every selected criterion passed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracle.hpp"
#include "convert.hpp"
#include "qtsl/cli.hpp"
#include "qtsl/codec.hpp"
#include "qtsl/f2lin.hpp"
#include "qtsl/games.hpp"
#include "qtsl/money.hpp"
#include "qtsl/privts.hpp"
#include "qtsl/qsim.hpp"
#include "qtsl/stack.hpp"

namespace fs = std::filesystem;
using namespace qtsl;
using f2::F2Vector;
using f2::Subspace;

namespace {

struct Verdict {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            notes.push_back("FAILED " + what);
        }
    }
    void note(const std::string &what) {
        notes.push_back(what);
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

double q_rate(std::size_t n) {
    const double h = std::ldexp(1.0, static_cast<int>(n / 2));
    return (h - 1) / (h * h);
}

double ok_rate(std::size_t n) {
    return 1.0 - std::ldexp(1.0, -static_cast<int>(n / 2));
}

// |measured - expected| <= 3 sigma, sigma from the expected rate.
bool within_3sigma(double measured, double expected, std::uint64_t trials) {
    return std::abs(measured - expected) <= 3.0 * games::binomial_sigma(expected, trials) + 1e-12;
}

std::vector<Subspace> test_subspaces(std::size_t n, std::size_t count, Rng &rng) {
    if (n == 4) {
        return f2::enumerate_subspaces(4, 2);
    }
    std::vector<Subspace> out;
    for (std::size_t i = 0; i < count; i++) {
        out.push_back(f2::sample_subspace(n, rng));
    }
    return out;
}

// ---------------------------------------------------------------------------

Verdict criterion_1() {
    Verdict v;
    Rng rng(101);
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::size_t n : {4u, 6u, 8u, 10u, 12u}) {
        for (const auto &a : test_subspaces(n, 200, rng)) {
            auto h = qsim::dense_hadamard_all(qsim::to_dense(qsim::prepare_subspace_state(a)));
            auto d = qsim::to_dense(qsim::prepare_subspace_state(f2::dual(a)));
            worst = std::max(worst, qsim::max_abs_difference(h, d));
            checked++;
        }
    }
    v.check(checked == 35 + 4 * 200, "subspace count " + std::to_string(checked));
    v.check(worst <= 1e-10, "max |H|A> - |A^perp>| = " + fmt(worst));
    v.note(std::to_string(checked) + " subspaces, max deviation " + fmt(worst));
    return v;
}

Verdict criterion_2() {
    Verdict v;
    Rng rng(102);
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::size_t n : {4u, 8u}) {
        for (const auto &a : test_subspaces(n, 50, rng)) {
            // Compare the two operators column by column.
            for (std::uint64_t col = 0; col < (1ULL << n); col++) {
                auto e = qsim::dense_basis(F2Vector::from_index(col, n));
                auto lhs = qsim::dense_apply_verification(e, a);
                auto rhs = qsim::dense_apply_rank_one(e, a);
                worst = std::max(worst, qsim::max_abs_difference(lhs, rhs));
            }
            checked++;
        }
    }
    v.check(checked == 35 + 50, "subspace count " + std::to_string(checked));
    v.check(worst <= 1e-10, "max operator deviation " + fmt(worst));
    v.note(std::to_string(checked) + " subspaces, max deviation " + fmt(worst));
    return v;
}

Verdict criterion_3() {
    Verdict v;
    auto a = f2::canonicalize({F2Vector::from_string("0011"), F2Vector::from_string("1110")}, 4);
    std::set<std::string> elems, duals;
    for (const auto &e : a.elements()) {
        elems.insert(e.to_string());
    }
    for (const auto &e : f2::dual(a).elements()) {
        duals.insert(e.to_string());
    }
    v.check(elems == std::set<std::string>{"0000", "0011", "1110", "1101"}, "A elements");
    v.check(duals == std::set<std::string>{"0000", "0111", "1011", "1100"}, "A^perp elements");
    auto d = qsim::to_dense(qsim::prepare_subspace_state(a));
    bool amplitudes = true;
    for (std::uint64_t i = 0; i < 16; i++) {
        const auto s = F2Vector::from_index(i, 4).to_string();
        const double expected = elems.count(s) != 0 ? 0.5 : 0.0;
        amplitudes = amplitudes && d.amplitudes[i] == std::complex<double>(expected, 0.0);
    }
    v.check(amplitudes, "|A> amplitudes exactly 1/2 on A and 0 elsewhere");
    return v;
}

Verdict criterion_4() {
    Verdict v;
    for (unsigned m = 0; m <= 4; m++) {
        for (unsigned k = 0; k <= m; k++) {
            const auto brute = oracle::all_subspaces(m, k).size();
            const auto formula = f2::gaussian_binomial(m, k);
            v.check(formula == brute, "G(" + std::to_string(m) + "," + std::to_string(k) + ")");
            v.check(f2::enumerate_subspaces(m, k).size() == brute,
                    "enumerate(" + std::to_string(m) + "," + std::to_string(k) + ")");
        }
    }
    v.check(f2::gaussian_binomial(4, 2) == 35, "G(4,2) = 35");
    return v;
}

// Observation codes for one step of a script. Measurements are reduced to
// {in A, in A^perp, equals previous outcome, zero}; projections to the
// accept bit. A record ends at the first rejection.
enum class Op { H, M, P };

std::string run_coset(const std::vector<Op> &script, const Subspace &a, const Subspace &a_perp, Rng &rng) {
    auto s = qsim::prepare_subspace_state(a);
    std::string rec;
    std::optional<F2Vector> prev;
    for (Op op : script) {
        if (op == Op::H) {
            s = qsim::hadamard_all(s);
            rec += 'h';
        } else if (op == Op::M) {
            auto m = qsim::measure_standard(s, rng);
            rec += char('a' + (a.contains(m.outcome) ? 1 : 0) + (a_perp.contains(m.outcome) ? 2 : 0) +
                         (prev && *prev == m.outcome ? 4 : 0) + (m.outcome.is_zero() ? 8 : 0));
            prev = m.outcome;
            s = std::move(m.post);
        } else {
            auto p = qsim::project_subspace(s, a, rng);
            rec += p.accepted ? '1' : '0';
            if (!p.accepted) {
                break;
            }
            s = std::move(p.post);
        }
    }
    return rec;
}

std::string run_dense(const std::vector<Op> &script, const Subspace &a, const Subspace &a_perp, Rng &rng) {
    auto s = qsim::to_dense(qsim::prepare_subspace_state(a));
    std::string rec;
    std::optional<F2Vector> prev;
    for (Op op : script) {
        if (op == Op::H) {
            s = qsim::dense_hadamard_all(std::move(s));
            rec += 'h';
        } else if (op == Op::M) {
            auto m = qsim::dense_measure(s, rng);
            rec += char('a' + (a.contains(m.outcome) ? 1 : 0) + (a_perp.contains(m.outcome) ? 2 : 0) +
                         (prev && *prev == m.outcome ? 4 : 0) + (m.outcome.is_zero() ? 8 : 0));
            prev = m.outcome;
            s = std::move(m.post);
        } else {
            auto p = qsim::dense_project(s, a, rng);
            rec += p.accepted ? '1' : '0';
            if (!p.accepted) {
                break;
            }
            s = std::move(p.post);
        }
    }
    return rec;
}

std::vector<Op> parse_script(const std::string &text) {
    std::vector<Op> out;
    for (char c : text) {
        out.push_back(c == 'H' ? Op::H : c == 'M' ? Op::M : Op::P);
    }
    return out;
}

Verdict criterion_5(std::uint64_t trials) {
    Verdict v;
    // Curated 6-op scripts: each op type in every position, every ordered
    // pair of op types adjacent at least once, and repeated ops.
    const std::vector<std::string> scripts = {"PHPHPH", "HPHPHP", "MPMPMP", "PMPMPM", "HMHMHM", "MHMHMH",
                                              "MHPMHP", "HPMHPM", "PMHPMH", "MMHMMP", "HHMPPM", "PPHMMH"};
    double worst = 0.0;
    std::string worst_at;
    for (std::size_t n : {4u, 6u, 8u}) {
        for (std::size_t si = 0; si < scripts.size(); si++) {
            const auto script = parse_script(scripts[si]);
            std::map<std::string, std::uint64_t> coset, dense;
            const Rng master(5000 + 100 * n + si);
            for (std::uint64_t t = 0; t < trials; t++) {
                Rng rng = master.split(t);
                const auto a = f2::sample_subspace(n, rng);
                const auto a_perp = f2::dual(a);
                Rng rc = rng.split(1), rd = rng.split(2);
                coset[run_coset(script, a, a_perp, rc)]++;
                dense[run_dense(script, a, a_perp, rd)]++;
            }
            std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> joint;
            for (const auto &[k, c] : coset) {
                joint[k].first = c;
            }
            for (const auto &[k, c] : dense) {
                joint[k].second = c;
            }
            double tv = 0.0;
            for (const auto &[k, c] : joint) {
                tv += std::abs(static_cast<double>(c.first) - static_cast<double>(c.second));
            }
            tv /= 2.0 * static_cast<double>(trials);
            if (tv > worst) {
                worst = tv;
                worst_at = scripts[si] + " n=" + std::to_string(n);
            }
            v.check(tv <= 0.02, "TV " + fmt(tv) + " for " + scripts[si] + " at n=" + std::to_string(n));
        }
    }
    v.note(std::to_string(scripts.size() * 3) + " script classes x " + std::to_string(trials) +
           " trials, worst TV " + fmt(worst) + " (" + worst_at + ")");
    return v;
}

// Honest sign-then-verify through the testability harness with k = 0.
void check_honest(Verdict &v, const std::string &layer, std::size_t n, std::size_t r, std::uint64_t trials,
                  std::uint64_t seed) {
    auto scheme = games::make_scheme(layer, n, r, 16);
    auto rep = games::game_testability(*scheme, 0, trials, seed);
    const double expected = std::pow(ok_rate(n), static_cast<double>(layer == "ot1" || layer == "priv-ot1" ? 1 : r));
    const bool ok = within_3sigma(rep.rate, expected, rep.trials);
    v.check(ok, layer + " n=" + std::to_string(n) + " r=" + std::to_string(r) + " rate " + fmt(rep.rate) +
                    " expected " + fmt(expected));
}

Verdict criterion_6() {
    Verdict v;
    std::uint64_t seed = 600;
    for (std::size_t n : {4u, 8u}) {
        check_honest(v, "ot1", n, 1, 100000, seed++);
        for (const char *layer : {"otr", "ot", "ts"}) {
            for (std::size_t r : {1u, 4u, 8u}) {
                check_honest(v, layer, n, r, 10000, seed++);
            }
        }
    }
    v.note("20 configurations");
    return v;
}

struct NaiveResult {
    double conditional = 0.0;
    std::uint64_t prefix = 0;
    double joint = 0.0;
    std::uint64_t trials = 0;
};

NaiveResult naive_double_sign(const std::string &layer, std::size_t n, std::uint64_t trials, std::uint64_t seed) {
    auto scheme = games::make_scheme(layer, n, 1, 16);
    auto strategy = games::naive_double_sign();
    auto rep = games::game_unforgeability(*scheme, *strategy, 1, trials, seed);
    NaiveResult r;
    r.trials = rep.trials;
    r.joint = rep.rate;
    r.prefix = static_cast<std::uint64_t>(rep.extras.at("prefix_valid"));
    r.conditional = r.prefix == 0 ? 0.0 : static_cast<double>(rep.successes) / static_cast<double>(r.prefix);
    return r;
}

void check_naive_rates(Verdict &v, const std::string &layer, std::vector<double> *conditional_rates) {
    std::uint64_t seed = 700;
    for (std::size_t n : {4u, 6u, 8u, 10u}) {
        auto r = naive_double_sign(layer, n, 100000, seed++);
        const double q = q_rate(n);
        v.check(within_3sigma(r.conditional, q, r.prefix),
                layer + " n=" + std::to_string(n) + " conditional " + fmt(r.conditional) + " vs " + fmt(q));
        v.check(within_3sigma(r.joint, ok_rate(n) * q, r.trials),
                layer + " n=" + std::to_string(n) + " joint " + fmt(r.joint) + " vs " + fmt(ok_rate(n) * q));
        v.note("n=" + std::to_string(n) + " conditional " + fmt(r.conditional) + " (q=" + fmt(q) + ")");
        if (conditional_rates) {
            conditional_rates->push_back(r.conditional);
        }
    }
}

Verdict criterion_7() {
    Verdict v;
    check_naive_rates(v, "ot1", nullptr);
    return v;
}

Verdict criterion_7_slope() {
    Verdict v;
    std::vector<double> rates;
    check_naive_rates(v, "ot1", &rates);
    v = Verdict{};
    const std::vector<double> ns{4, 6, 8, 10};
    auto fit = games::log2_linear_fit(ns, rates);
    std::vector<double> exact;
    for (double n : ns) {
        exact.push_back(q_rate(static_cast<std::size_t>(n)));
    }
    auto exact_fit = games::log2_linear_fit(ns, exact);
    v.check(fit.slope >= -0.55 && fit.slope <= -0.45,
            "fitted slope " + fmt(fit.slope) + " outside -0.5 +/- 10% (exact-formula slope " +
                fmt(exact_fit.slope) + ")");
    v.note("fitted slope " + fmt(fit.slope) + ", exact-formula slope " + fmt(exact_fit.slope));
    return v;
}

Verdict criterion_8() {
    Verdict v;
    const std::size_t n = 8;
    auto rep = games::relation_statistics(n, 100000, 800);
    const double dmin = rep.extras.at("intersection_dim_min");
    const double dmax = rep.extras.at("intersection_dim_max");
    v.check(dmin == n / 2 - 1 && dmax == n / 2 - 1, "intersection dimension " + fmt(dmin) + ".." + fmt(dmax));
    const double overlap = std::ldexp(1.0, static_cast<int>(dmin) - static_cast<int>(n / 2));
    v.check(overlap == 0.5, "<A|B> = " + fmt(overlap));
    v.check(rep.extras.at("inner_product_min") == 0.5 && rep.extras.at("inner_product_max") == 0.5,
            "measured <A|B> range");
    const double h = std::ldexp(1.0, static_cast<int>(n / 2));
    const double product = 0.5 * (1.0 - 1.0 / (h - 1)) * ((h / 2 - 1) / (h - 1));
    const double sigma = games::binomial_sigma(product, rep.trials);
    v.check(rep.rate <= 0.25 + 3 * games::binomial_sigma(0.25, rep.trials), "rate " + fmt(rep.rate) + " > 1/4");
    v.check(std::abs(rep.rate - product) <= 3 * sigma,
            "rate " + fmt(rep.rate) + " vs product " + fmt(product) + " (sigma " + fmt(sigma) + ")");
    v.note("rate " + fmt(rep.rate) + " product " + fmt(product));
    return v;
}

void check_testability(Verdict &v, const std::string &layer, std::uint64_t trials, std::uint64_t seed) {
    const std::size_t n = 8, r = 8;
    auto scheme = games::make_scheme(layer, n, r, 16);
    auto rep = games::game_testability(*scheme, 100, trials, seed);
    const double floor = std::pow(ok_rate(n), static_cast<double>(r)) - 0.02;
    v.check(rep.extras.at("all_accepted") == static_cast<double>(trials),
            layer + " honest token rejected by verify-token");
    v.check(rep.rate >= floor, layer + " rate " + fmt(rep.rate) + " < " + fmt(floor));
    v.note(layer + " rate " + fmt(rep.rate) + " floor " + fmt(floor));
}

Verdict criterion_9() {
    Verdict v;
    check_testability(v, "ts", 10000, 900);
    return v;
}

Verdict criterion_10() {
    Verdict v;
    std::uint64_t seed = 1000;
    for (std::size_t n : {4u, 8u}) {
        auto scheme = games::make_scheme("ts", n, 8, 16);
        const double q = q_rate(n);
        struct Case {
            const char *strategy;
            std::size_t t;
        };
        for (auto c : {Case{"spent-token-return", 1}, Case{"revoke-twice", 0}}) {
            auto strategy = games::make_strategy(c.strategy);
            auto rep = games::game_revocability(*scheme, *strategy, 1, c.t, 20000, seed++);
            const double bound = q + 3 * games::binomial_sigma(q, rep.trials);
            v.check(rep.rate <= bound, std::string(c.strategy) + " n=" + std::to_string(n) + " rate " +
                                           fmt(rep.rate) + " > " + fmt(bound));
            v.note(std::string(c.strategy) + " n=" + std::to_string(n) + " rate " + fmt(rep.rate) + " bound " +
                   fmt(bound));
        }
    }
    return v;
}

Verdict criterion_11() {
    Verdict v;
    Rng rng(1100);
    auto params = stack::TsParams::defaults(128);
    auto kp = stack::ts_keygen(params, rng);
    const Bytes doc = to_bytes("chain binding");
    std::vector<stack::TsToken> tokens;
    std::vector<stack::TsSignature> sigs;
    while (sigs.size() < 10) {
        auto token = stack::ts_token_gen(kp.sk, rng);
        tokens.push_back(token);
        if (auto s = stack::ts_sign(doc, token, rng)) {
            sigs.push_back(*s);
        }
    }
    for (const auto &s : sigs) {
        v.check(stack::ts_verify(kp.pk, doc, s), "unmutated signature verifies");
    }
    auto flip = [&](Bytes &b) { b[rng.uniform_below(b.size())] ^= static_cast<std::uint8_t>(1u << rng.uniform_below(8)); };
    std::size_t accepted = 0;
    const int mutations = 1000;
    for (int i = 0; i < mutations; i++) {
        if (i % 2 == 0) {
            auto s = sigs[rng.uniform_below(sigs.size())];
            switch (rng.uniform_below(4)) {
                case 0:
                    flip(s.ot_pk);
                    break;
                case 1:
                    flip(s.chain_sig);
                    break;
                case 2: {
                    auto &vec = s.ot_sig.sigs[rng.uniform_below(s.ot_sig.sigs.size())];
                    const auto j = rng.uniform_below(vec.size());
                    vec.set(j, !vec.get(j));
                    break;
                }
                default: {
                    const auto j = rng.uniform_below(s.ot_sig.alpha.size());
                    s.ot_sig.alpha[j] = !s.ot_sig.alpha[j];
                    break;
                }
            }
            accepted += stack::ts_verify(kp.pk, doc, s) ? 1 : 0;
        } else {
            auto t = tokens[rng.uniform_below(tokens.size())];
            flip(rng.next_bit() ? t.ot_pk : t.chain_sig);
            accepted += stack::ts_verify_token(kp.pk, t, rng) ? 1 : 0;
        }
    }
    v.check(accepted == 0, std::to_string(accepted) + " of " + std::to_string(mutations) + " mutations accepted");
    v.note("n=" + std::to_string(params.n) + " r=" + std::to_string(params.hash_bits) + ", " +
           std::to_string(mutations) + " mutations, " + std::to_string(accepted) + " accepted");
    return v;
}

Verdict criterion_12() {
    Verdict v;
    auto params = stack::TsParams::defaults(16);
    params.n = 24;
    params.hash_bits = 8;
    auto scheme = games::make_ts_scheme(params);
    auto strategy = games::collision_forger();
    const std::uint64_t trials = 500;
    auto rep = games::game_unforgeability(*scheme, *strategy, 1, trials, 1200);
    const double found = rep.extras.at("collision_found");
    const double evals = rep.extras.at("hash_evaluations");
    v.check(found == static_cast<double>(trials), "collision found in " + fmt(found) + " of " + fmt(trials));
    v.check(evals <= 512.0 * trials, "hash evaluations exceed 2^9 per trial");
    const double honest = std::pow(ok_rate(params.n), 8.0);
    v.check(within_3sigma(rep.rate, honest, rep.trials) && rep.rate > 0.5,
            "forgery rate " + fmt(rep.rate) + " vs honest-sign rate " + fmt(honest));
    v.note("forgery rate " + fmt(rep.rate) + ", mean hash evaluations " + fmt(evals / trials));
    return v;
}

std::map<std::uint32_t, std::vector<std::string>> per_branch(const money::BankReport &r) {
    std::map<std::uint32_t, std::vector<std::string>> out;
    for (const auto &e : r.ledger) {
        out[e.branch_id].push_back(money::to_json_line(e));
    }
    return out;
}

Verdict criterion_13() {
    Verdict v;
    auto params = stack::TsParams::defaults(16);
    params.n = 24;
    params.hash_bits = 32;
    using K = money::EventKind;
    auto kinds = [](const money::BankReport &r) {
        std::vector<K> out;
        for (const auto &e : r.ledger) {
            out.push_back(e.kind);
        }
        return out;
    };
    const std::string happy = "BRANCH 1 ledger mint\nMINT alice c0\nWRITE c0 k0 bob 1\nCASH k0 1\n";
    v.check(kinds(money::simulate_bank(happy, params, 1)) == std::vector<K>{K::Cash}, "happy path");
    v.check(kinds(money::simulate_bank(happy + "TICK 10\nCASH k0 1\n", params, 1)) ==
                std::vector<K>{K::Cash, K::RejectDuplicate},
            "re-cash");
    const std::string cross =
        "BRANCH 1 ledger mint\nBRANCH 2 ledger mint\nMINT alice c0\nWRITE c0 k0 bob 1\nCASH k0 2\nCASH k0 1\n";
    v.check(kinds(money::simulate_bank(cross, params, 1)) == std::vector<K>{K::RejectWrongBranch, K::Cash},
            "cross-branch");

    Rng rng(1300);
    std::size_t violations = 0, permutation_mismatch = 0;
    const int scenarios = 1000;
    for (int i = 0; i < scenarios; i++) {
        const auto script = money::random_scenario(rng, 40);
        auto r = money::simulate_bank(script, params, 2000 + i);
        if (r.coins_issued > r.coins_burned) {
            violations++;
        }
        auto p = money::simulate_bank(script, params, 2000 + i, 3000 + i);
        if (per_branch(r) != per_branch(p)) {
            permutation_mismatch++;
        }
    }
    v.check(violations == 0, std::to_string(violations) + " conservation violations");
    v.check(permutation_mismatch == 0, std::to_string(permutation_mismatch) + " permutation mismatches");
    v.note(std::to_string(scenarios) + " fuzzed scenarios");
    return v;
}

Verdict criterion_14() {
    Verdict v;
    std::uint64_t seed = 1400;
    for (std::size_t n : {4u, 8u}) {
        check_honest(v, "priv-ot1", n, 1, 100000, seed++);
        for (const char *layer : {"priv-ot", "tm"}) {
            for (std::size_t r : {1u, 4u, 8u}) {
                check_honest(v, layer, n, r, 10000, seed++);
            }
        }
    }
    check_naive_rates(v, "priv-ot1", nullptr);
    check_testability(v, "priv-ot", 5000, seed++);
    check_testability(v, "tm", 5000, seed++);

    Rng rng(1499);
    privts::TmParams p = privts::TmParams::defaults(16);
    p.n = 24;
    p.hash_bits = 16;
    auto key = privts::tm_keygen(p, rng);
    std::size_t ordered = 0, total = 0;
    const privts::TmTrace full{privts::TmStep::CheckTag, privts::TmStep::Decrypt, privts::TmStep::VerifyInner};
    for (int i = 0; i < 100; i++) {
        auto token = privts::tm_token_gen(key, rng);
        auto sig = privts::tm_sign(to_bytes("x"), token, rng);
        if (!sig) {
            continue;
        }
        const bool tamper = i % 2 == 1;
        if (tamper) {
            sig->tag[rng.uniform_below(sig->tag.size())] ^= 1;
        }
        privts::TmTrace trace;
        const bool ok = privts::tm_verify(key, to_bytes("x"), *sig, &trace);
        total++;
        const bool good = tamper ? (!ok && trace == privts::TmTrace{privts::TmStep::CheckTag}) : (ok && trace == full);
        ordered += good ? 1 : 0;
    }
    v.check(total > 0 && ordered == total,
            "tag-before-decrypt in " + std::to_string(ordered) + " of " + std::to_string(total));
    v.note("tag-before-decrypt ordering in " + std::to_string(ordered) + "/" + std::to_string(total));
    return v;
}

struct CliRun {
    int code;
    std::string out;
};

std::map<std::string, std::string> run_cli_session(const fs::path &dir) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto p = [&](const char *name) { return (dir / name).string(); };
    {
        std::ofstream(p("script")) << "BRANCH 1 ledger mint\nBRANCH 2 daily escrow\nMINT a c0\nMINT b c1\n"
                                      "WRITE c0 k0 bob 1\nWRITE c1 k1 eve 2\nCASH k0 1 c2\nCASH k1 2\n"
                                      "TICK 86400\nCASH k1 2\nCASH k0 1\n";
    }
    const std::vector<std::vector<std::string>> commands = {
        {"keygen", "--pk", p("pk"), "--sk", p("sk"), "--n", "24", "--hash-bits", "32", "--seed", "5"},
        {"token", "mint", "--sk", p("sk"), "--out", p("token"), "--seed", "5"},
        {"token", "mint", "--sk", p("sk"), "--out", p("coin"), "--coin", "--seed", "6"},
        {"verify-token", "--pk", p("pk"), "--token", p("token"), "--seed", "5"},
        {"sign", "--token", p("token"), "--doc", "hello", "--out", p("sig"), "--seed", "5"},
        {"verify", "--pk", p("pk"), "--sig", p("sig"), "--doc", "hello"},
        {"check", "write", "--token", p("coin"), "--payee", "bob", "--branch", "1", "--time", "100", "--out",
         p("check"), "--seed", "5"},
        {"check", "cash", "--pk", p("pk"), "--check", p("check"), "--branch", "1", "--now", "110", "--sk",
         p("sk"), "--coin-out", p("newcoin"), "--state", p("state"), "--seed", "5"},
        {"game", "run", "unforgeability", "--n", "4", "--trials", "2000", "--seed", "7", "--out", p("r1")},
        {"game", "run", "everlasting", "--strategy", "consistent-subspace-guess", "--n", "4", "--trials", "2000",
         "--seed", "7", "--out", p("r2")},
        {"game", "run", "testability", "--scheme", "ts", "--n", "8", "--hash-bits", "8", "--k", "10", "--trials",
         "200", "--seed", "7", "--out", p("r3")},
        {"bank", "sim", "--script", p("script"), "--seed", "5"},
    };
    std::map<std::string, std::string> out;
    for (std::size_t i = 0; i < commands.size(); i++) {
        std::ostringstream o, e;
        const int code = cli::cli_main(commands[i], o, e);
        out["cmd" + std::to_string(i)] = std::to_string(code) + "\n" + o.str();
    }
    for (const auto &entry : fs::directory_iterator(dir)) {
        std::ifstream in(entry.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        out["file:" + entry.path().filename().string()] = ss.str();
    }
    fs::remove_all(dir);
    return out;
}

Verdict criterion_15() {
    Verdict v;
    // Both sessions use the same directory because some commands echo paths.
    const auto dir = fs::temp_directory_path() / "qtsl_acceptance_15";
    auto a = run_cli_session(dir);
    auto b = run_cli_session(dir);
    v.check(a.size() == b.size(), "artifact counts differ");
    std::size_t same = 0;
    for (const auto &[k, text] : a) {
        auto it = b.find(k);
        if (it == b.end() || it->second != text) {
            v.check(false, k + " differs between runs");
        } else {
            same++;
        }
    }
    // Every command must have succeeded for the comparison to mean anything.
    for (const auto &[k, text] : a) {
        if (k.rfind("cmd", 0) == 0) {
            v.check(text.rfind("0\n", 0) == 0, k + " exited non-zero");
        }
    }
    v.note(std::to_string(same) + " outputs and containers byte-identical");
    return v;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qtsl acceptance criteria"};
    std::vector<std::string> selected;
    std::uint64_t criterion5_trials = 100000;
    app.add_option("--criterion", selected, "Criterion id (1..15, 7-slope); repeatable")->required();
    app.add_option("--criterion5-trials", criterion5_trials, "Trials per script class for criterion 5");
    CLI11_PARSE(app, argc, argv);

    const std::map<std::string, std::function<Verdict()>> criteria = {
        {"1", criterion_1},   {"2", criterion_2},   {"3", criterion_3},
        {"4", criterion_4},   {"5", [&] { return criterion_5(criterion5_trials); }},
        {"6", criterion_6},   {"7", criterion_7},   {"7-slope", criterion_7_slope},
        {"8", criterion_8},   {"9", criterion_9},   {"10", criterion_10},
        {"11", criterion_11}, {"12", criterion_12}, {"13", criterion_13},
        {"14", criterion_14}, {"15", criterion_15},
    };
    if (selected.size() == 1 && selected[0] == "all") {
        selected.clear();
        for (const auto &[id, fn] : criteria) {
            selected.push_back(id);
        }
    }
    bool all = true;
    for (const auto &id : selected) {
        auto it = criteria.find(id);
        if (it == criteria.end()) {
            std::cerr << "unknown criterion " << id << "\n";
            return 2;
        }
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = it->second();
        } catch (const std::exception &e) {
            v.check(false, std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (const auto &n : v.notes) {
            std::cout << "  " << n << "\n";
        }
        std::cout << "criterion " << id << ": " << (v.pass ? "PASS" : "FAIL") << " (" << fmt(secs) << " s)\n";
        all = all && v.pass;
    }
    return all ? 0 : 1;
}
