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

#include "qtsl/cli.hpp"

#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "qtsl/codec.hpp"
#include "qtsl/games.hpp"
#include "qtsl/money.hpp"
#include "qtsl/stack.hpp"

namespace qtsl::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::uint64_t seed = 0;
    bool seeded = false;
    std::size_t n = 0;
    bool has_n = false;
    unsigned kappa = 16;
    std::uint64_t trials = 1000;
    std::string format = "text";
    std::size_t hash_bits = 0;
    bool has_hash_bits = false;

    std::uint64_t master_seed() {
        if (!seeded) {
            std::random_device rd;
            seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
            seeded = true;
        }
        return seed;
    }
    Rng rng(std::string_view command) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : command) {
            h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
        }
        return Rng(master_seed()).split(h);
    }
    std::size_t n_or(std::size_t fallback) const {
        return has_n ? n : fallback;
    }
    std::size_t hash_bits_or(std::size_t fallback) const {
        return has_hash_bits ? hash_bits : fallback;
    }
    bool json() const {
        return format == "json";
    }
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size()))) {
        throw DataError("cannot write " + path);
    }
}

void append_file(const std::string &path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size()))) {
        throw DataError("cannot write " + path);
    }
}

/// Token or coin file; both hold a TS token.
struct TokenFile {
    std::string path;
    codec::Kind kind;
    stack::TsToken token;

    static TokenFile load(const std::string &path) {
        const std::string text = read_file(path);
        const auto kind = codec::peek_kind(text);
        if (kind == codec::Kind::Token) {
            return {path, kind, codec::decode_token(text)};
        }
        if (kind == codec::Kind::Coin) {
            return {path, kind, codec::decode_coin(text).token};
        }
        throw DataError(path + ": expected a token or coin container");
    }
    void save() const {
        write_file(path, kind == codec::Kind::Coin ? codec::encode(money::Coin{token}) : codec::encode(token));
    }
};

Bytes document(const std::string &doc, const std::string &doc_file) {
    if (!doc_file.empty()) {
        return to_bytes(read_file(doc_file));
    }
    return to_bytes(doc);
}

struct Ctx {
    Globals &g;
    std::ostream &out;
    std::ostream &err;

    void emit(const json &j, const std::string &text) {
        if (g.json()) {
            out << j.dump() << "\n";
        } else {
            out << text << "\n";
        }
    }
};

// ---------------------------------------------------------------------------

struct KeygenArgs {
    std::string pk = "ts_pk.qtsl";
    std::string sk = "ts_sk.qtsl";
    std::string ds = "ed25519";
    unsigned merkle_height = 5;
};

int run_keygen(Ctx &c, const KeygenArgs &a) {
    auto p = stack::TsParams::defaults(c.g.kappa);
    p.n = c.g.n_or(p.n);
    p.hash_bits = c.g.hash_bits_or(p.hash_bits);
    p.ds = a.ds == "ed25519" ? prim::DsAlgorithm::ed25519 : prim::DsAlgorithm::merkle_lamport;
    p.merkle_height = a.merkle_height;
    if (p.n < 2 || p.n % 2 != 0 || p.n > 4096) {
        throw UsageError("--n must be even and in [2, 4096]");
    }
    if (p.hash_bits == 0 || p.hash_bits > 256) {
        throw UsageError("--hash-bits must be in [1, 256]");
    }
    auto rng = c.g.rng("keygen");
    auto keys = stack::ts_keygen(p, rng);
    write_file(a.pk, codec::encode(keys.pk));
    write_file(a.sk, codec::encode(keys.sk));
    c.emit(json{{"command", "keygen"}, {"pk", a.pk}, {"sk", a.sk}, {"n", p.n}, {"hash_bits", p.hash_bits}},
           "wrote " + a.pk + " and " + a.sk + " (n=" + std::to_string(p.n) +
               ", hash bits=" + std::to_string(p.hash_bits) + ")");
    return kExitOk;
}

struct MintArgs {
    std::string sk = "ts_sk.qtsl";
    std::string out = "token.qtsl";
    bool coin = false;
};

int run_mint(Ctx &c, const MintArgs &a) {
    auto sk = codec::decode_ts_sk(read_file(a.sk));
    auto rng = c.g.rng("token mint");
    TokenFile f{a.out, a.coin ? codec::Kind::Coin : codec::Kind::Token, stack::ts_token_gen(sk, rng)};
    f.save();
    // Merkle-Lamport keys advance a leaf counter.
    write_file(a.sk, codec::encode(sk));
    const std::string serial = to_hex(money::Coin{f.token}.serial());
    c.emit(json{{"command", "token mint"}, {"out", a.out}, {"serial", serial}},
           "wrote " + a.out + " (serial " + serial.substr(0, 16) + ")");
    return kExitOk;
}

struct DocArgs {
    std::string doc;
    std::string doc_file;
};

struct SignArgs {
    std::string token = "token.qtsl";
    DocArgs doc;
    std::string out = "signature.qtsl";
};

int run_sign(Ctx &c, const SignArgs &a) {
    auto f = TokenFile::load(a.token);
    if (f.token.spent()) {
        throw DataError(a.token + ": token already spent");
    }
    auto rng = c.g.rng("sign");
    auto sig = stack::ts_sign(document(a.doc.doc, a.doc.doc_file), f.token, rng);
    f.save();
    if (!sig) {
        c.err << "sign: a register measured zero; the token is consumed and no signature exists\n";
        c.emit(json{{"command", "sign"}, {"signed", false}}, "signing failed");
        return kExitFalse;
    }
    write_file(a.out, codec::encode(*sig));
    c.emit(json{{"command", "sign"}, {"signed", true}, {"out", a.out}}, "wrote " + a.out);
    return kExitOk;
}

struct VerifyArgs {
    std::string pk = "ts_pk.qtsl";
    DocArgs doc;
    std::string sig = "signature.qtsl";
};

int verdict(Ctx &c, const std::string &command, bool ok) {
    c.emit(json{{"command", command}, {"valid", ok}}, ok ? "valid" : "invalid");
    return ok ? kExitOk : kExitFalse;
}

int run_verify(Ctx &c, const VerifyArgs &a) {
    const auto pk = codec::decode_ts_pk(read_file(a.pk));
    const auto sig = codec::decode_signature(read_file(a.sig));
    return verdict(c, "verify", stack::ts_verify(pk, document(a.doc.doc, a.doc.doc_file), sig));
}

struct TokenCheckArgs {
    std::string pk = "ts_pk.qtsl";
    std::string token = "token.qtsl";
};

int run_verify_token(Ctx &c, const TokenCheckArgs &a) {
    const auto pk = codec::decode_ts_pk(read_file(a.pk));
    auto f = TokenFile::load(a.token);
    auto rng = c.g.rng("verify-token");
    const bool ok = stack::ts_verify_token(pk, f.token, rng);
    f.save();
    return verdict(c, "verify-token", ok);
}

int run_revoke(Ctx &c, const TokenCheckArgs &a) {
    const auto pk = codec::decode_ts_pk(read_file(a.pk));
    auto f = TokenFile::load(a.token);
    if (f.token.spent()) {
        throw DataError(a.token + ": token already spent");
    }
    auto rng = c.g.rng("revoke");
    const bool ok = stack::ts_revoke(pk, f.token, rng);
    f.save();
    return verdict(c, "revoke", ok);
}

struct CheckWriteArgs {
    std::string token = "token.qtsl";
    std::string payee;
    std::uint32_t branch = 1;
    std::uint64_t time = money::kScenarioStartTime;
    std::string out = "check.qtsl";
};

int run_check_write(Ctx &c, const CheckWriteArgs &a) {
    auto f = TokenFile::load(a.token);
    if (f.token.spent()) {
        throw DataError(a.token + ": coin already spent");
    }
    auto rng = c.g.rng("check write");
    money::Coin coin{std::move(f.token)};
    std::optional<money::Check> check;
    try {
        check = money::check_write(coin, a.payee, a.branch, a.time, rng);
    } catch (const money::CheckWriteError &e) {
        f.token = std::move(coin.token);
        f.save();
        c.err << "check write: " << e.what() << "\n";
        c.emit(json{{"command", "check write"}, {"written", false}}, "check not written; coin consumed");
        return kExitFalse;
    }
    f.token = std::move(coin.token);
    f.save();
    write_file(a.out, codec::encode(*check));
    c.emit(json{{"command", "check write"}, {"written", true}, {"out", a.out}}, "wrote " + a.out);
    return kExitOk;
}

struct CheckCashArgs {
    std::string pk = "ts_pk.qtsl";
    std::string check = "check.qtsl";
    std::uint32_t branch = 1;
    std::uint64_t now = money::kScenarioStartTime;
    std::string policy = "ledger";
    std::string state;
    std::string sk;
    std::string coin_out;
};

int run_check_cash(Ctx &c, const CheckCashArgs &a) {
    const auto pk = codec::decode_ts_pk(read_file(a.pk));
    const std::string check_text = read_file(a.check);
    const auto check = codec::decode_check(check_text);
    std::optional<stack::TsSecretKey> sk;
    if (!a.sk.empty()) {
        sk = codec::decode_ts_sk(read_file(a.sk));
    }
    const auto policy = a.policy == "daily" ? money::Policy::DailyWindow : money::Policy::Ledger;
    money::Branch branch(a.branch, policy, pk, sk, c.g.rng("check cash"));

    // The state file replays earlier submissions to rebuild the branch.
    if (!a.state.empty()) {
        std::ifstream in(a.state);
        std::string line;
        std::size_t no = 0;
        while (in && std::getline(in, line)) {
            no++;
            if (line.empty()) {
                continue;
            }
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object() || !j.contains("check") || !j.contains("now") ||
                !j["now"].is_number_unsigned()) {
                throw DataError(a.state + ": line " + std::to_string(no) + " is malformed");
            }
            branch.cash(codec::decode_check(j["check"].dump() + "\n"), j["now"].get<std::uint64_t>());
        }
    }
    auto result = branch.cash(check, a.now);
    if (!a.state.empty()) {
        append_file(a.state, json{{"check", json::parse(check_text)}, {"now", a.now}}.dump() + "\n");
    }
    if (result.coin && !a.coin_out.empty()) {
        write_file(a.coin_out, codec::encode(*result.coin));
    }
    const auto kind = result.event.kind;
    if (c.g.json()) {
        c.out << money::to_json_line(result.event) << "\n";
    } else {
        c.out << money::to_string(kind) << " at branch " << a.branch << "\n";
    }
    return kind == money::EventKind::Cash ? kExitOk : kExitFalse;
}

struct BankArgs {
    std::string script;
    std::uint64_t permute_seed = 0;
    bool permute = false;
};

int run_bank(Ctx &c, const BankArgs &a) {
    auto p = stack::TsParams::defaults(c.g.kappa);
    p.n = c.g.n_or(24);
    p.hash_bits = c.g.hash_bits_or(32);
    const std::string script = read_file(a.script);
    auto report = money::simulate_bank(script, p, c.g.master_seed(),
                                       a.permute ? std::optional<std::uint64_t>(a.permute_seed) : std::nullopt);
    for (const auto &e : report.ledger) {
        c.out << money::to_json_line(e) << "\n";
    }
    json summary{{"summary",
                  {{"coins_minted", report.coins_minted},
                   {"coins_burned", report.coins_burned},
                   {"checks_written", report.checks_written},
                   {"coins_issued", report.coins_issued},
                   {"spent_coin_writes", report.spent_coin_writes},
                   {"events", report.ledger.size()}}}};
    if (c.g.json()) {
        c.out << summary.dump() << "\n";
    } else {
        c.out << "minted " << report.coins_minted << ", burned " << report.coins_burned << ", written "
              << report.checks_written << ", issued " << report.coins_issued << "\n";
    }
    return kExitOk;
}

struct GameArgs {
    std::string game;
    std::string scheme = "ot1";
    std::string strategy;
    std::size_t l = 1;
    std::size_t t = 0;
    std::size_t k = 100;
    std::string destruction = "verify-token";
    std::string mode = "equivocate";
    bool memoized = false;
    std::string query_strategy = "measure-and-guess";
    std::uint64_t budget = 0;
    std::string out;
};

std::string default_strategy(const std::string &game) {
    if (game == "unforgeability") {
        return "naive-double-sign";
    }
    if (game == "super-security") {
        return "same-signature-twice";
    }
    if (game == "revocability") {
        return "revoke-twice";
    }
    if (game == "everlasting") {
        return "measure-and-guess";
    }
    if (game == "money") {
        return "measure-and-rebuild";
    }
    return "honest";
}

games::GameReport play(Ctx &c, const GameArgs &a) {
    const std::size_t n = c.g.n_or(ot1::default_dimension(c.g.kappa));
    const std::size_t r = c.g.hash_bits_or(8);
    const std::uint64_t seed = c.g.master_seed();
    const std::uint64_t trials = c.g.trials;
    auto ts_params = [&] {
        auto p = stack::TsParams::defaults(c.g.kappa);
        p.n = n;
        p.hash_bits = r;
        return p;
    };
    const std::string &g = a.game;
    if (g == "query-count") {
        games::QueryStrategy qs;
        if (a.query_strategy == "measure-and-guess") {
            qs = games::QueryStrategy::MeasureAndGuess;
        } else if (a.query_strategy == "random-query") {
            qs = games::QueryStrategy::RandomQuery;
        } else {
            qs = games::QueryStrategy::Exhaustive;
        }
        return games::query_count_experiment(n, qs, a.budget, trials, seed);
    }
    if (g == "relation-statistics") {
        return games::relation_statistics(n, trials, seed);
    }
    if (g == "two-faced") {
        const auto mode = a.mode == "honest"       ? games::AliceMode::Honest
                          : a.mode == "equivocate" ? games::AliceMode::Equivocate
                                                   : games::AliceMode::TwoTokens;
        return games::two_faced_experiment(ts_params(), mode, trials, seed);
    }
    if (g == "mds-unpredictability") {
        return games::game_mds_unpredictability(ts_params(), a.memoized, trials, seed);
    }
    auto scheme = games::make_scheme(a.scheme, n, r, c.g.kappa);
    if (g == "testability") {
        return games::game_testability(*scheme, a.k, trials, seed);
    }
    if (g == "unpredictability") {
        return games::game_unpredictability(*scheme, trials, seed);
    }
    auto strategy = games::make_strategy(a.strategy.empty() ? default_strategy(g) : a.strategy);
    if (g == "unforgeability") {
        return games::game_unforgeability(*scheme, *strategy, a.l, trials, seed);
    }
    if (g == "super-security") {
        return games::game_super_security(*scheme, *strategy, a.l, trials, seed);
    }
    if (g == "revocability") {
        return games::game_revocability(*scheme, *strategy, a.l, a.t, trials, seed);
    }
    if (g == "everlasting") {
        const auto d =
            a.destruction == "revoke" ? games::Destruction::Revoke : games::Destruction::VerifyToken;
        return games::game_everlasting(*scheme, *strategy, a.l, trials, seed, d);
    }
    if (g == "money") {
        return games::game_money(*scheme, *strategy, a.l, trials, seed);
    }
    throw UsageError("unknown game '" + g + "'");
}

std::string fixed(double x, int digits) {
    std::ostringstream ss;
    ss.setf(std::ios::fixed);
    ss.precision(digits);
    ss << x;
    return ss.str();
}

int run_game(Ctx &c, const GameArgs &a) {
    games::GameReport rep;
    try {
        rep = play(c, a);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    if (!a.out.empty()) {
        write_file(a.out, codec::encode(rep));
    }
    if (c.g.json()) {
        c.out << rep.to_json_line() << "\n";
    } else {
        c.out << rep.game << " " << rep.scheme << " " << rep.strategy << ": " << rep.successes << "/" << rep.trials
              << " = " << fixed(rep.rate, 6) << " [" << fixed(rep.wilson95.lo, 6) << ", "
              << fixed(rep.wilson95.hi, 6) << "]";
        if (rep.analytic) {
            c.out << " analytic " << fixed(*rep.analytic, 6) << " (" << rep.analytic_formula << ")";
        }
        c.out << "\n";
    }
    return kExitOk;
}

struct SelftestArgs {
    std::vector<std::string> files;
    std::size_t mutations = 1000;
};

int run_selftest(Ctx &c, const SelftestArgs &a) {
    if (!a.files.empty()) {
        bool all = true;
        for (const auto &path : a.files) {
            const std::string text = read_file(path);
            try {
                const bool same = codec::reencode(text) == text;
                all = all && same;
                c.out << (same ? "ok " : "non-canonical ") << path << " "
                      << codec::to_string(codec::peek_kind(text)) << "\n";
            } catch (const DecodeError &e) {
                all = false;
                c.out << "unreadable " << path << ": " << e.what() << "\n";
            }
        }
        return all ? kExitOk : kExitData;
    }

    auto rng = c.g.rng("selftest");
    auto p = stack::TsParams::defaults(c.g.kappa);
    p.n = c.g.n_or(8);
    p.hash_bits = c.g.hash_bits_or(8);
    auto keys = stack::ts_keygen(p, rng);
    std::vector<std::string> containers{codec::encode(keys.pk), codec::encode(keys.sk)};
    auto token = stack::ts_token_gen(keys.sk, rng);
    containers.push_back(codec::encode(token));
    containers.push_back(codec::encode(money::Coin{token}));
    const Bytes doc = to_bytes("selftest");
    std::size_t signed_ok = 0;
    for (int attempt = 0; attempt < 32 && signed_ok == 0; attempt++) {
        auto t = stack::ts_token_gen(keys.sk, rng);
        if (auto sig = stack::ts_sign(doc, t, rng)) {
            if (!stack::ts_verify(keys.pk, doc, *sig)) {
                c.out << "selftest: honest signature rejected\n";
                return kExitData;
            }
            containers.push_back(codec::encode(*sig));
            signed_ok++;
        }
    }
    auto coin = money::coin_mint(keys.sk, rng);
    try {
        containers.push_back(codec::encode(money::check_write(coin, "selftest", 1, money::kScenarioStartTime, rng)));
    } catch (const money::CheckWriteError &) {
    }
    containers.push_back(codec::encode(privts::tm_keygen(privts::TmParams{p.kappa, p.n, p.hash_bits}, rng)));
    containers.push_back(codec::encode(games::relation_statistics(4, 16, 1)));

    std::size_t failures = 0;
    for (const auto &text : containers) {
        if (codec::reencode(text) != text) {
            c.out << "selftest: " << codec::to_string(codec::peek_kind(text)) << " does not round-trip\n";
            failures++;
        }
    }
    std::size_t rejected = 0;
    for (std::size_t i = 0; i < a.mutations; i++) {
        std::string text = containers[rng.uniform_below(containers.size())];
        text[rng.uniform_below(text.size())] = static_cast<char>(rng.uniform_below(256));
        try {
            codec::reencode(text);
        } catch (const DecodeError &) {
            rejected++;
        }
    }
    c.emit(json{{"command", "selftest"},
                {"containers", containers.size()},
                {"round_trip_failures", failures},
                {"mutations", a.mutations},
                {"mutations_rejected", rejected}},
           "selftest: " + std::to_string(containers.size()) + " containers, " + std::to_string(failures) +
               " round-trip failures, " + std::to_string(rejected) + "/" + std::to_string(a.mutations) +
               " mutations rejected");
    return failures == 0 ? kExitOk : kExitData;
}

void add_doc(CLI::App *cmd, DocArgs &d) {
    auto *doc = cmd->add_option("--doc", d.doc, "Document text");
    auto *file = cmd->add_option("--doc-file", d.doc_file, "Read the document from a file");
    doc->excludes(file);
    cmd->callback([doc, file] {
        if (doc->count() == 0 && file->count() == 0) {
            throw CLI::ValidationError("--doc", "one of --doc or --doc-file is required");
        }
    });
}

}  // namespace

int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Globals g;
    CLI::App app{"Simulated tokenized signatures over hidden F2 subspaces", "qtsl"};
    app.require_subcommand(1);
    app.add_option("--seed", g.seed, "Seed for all randomness")->each([&](const std::string &) { g.seeded = true; });
    app.add_option("--n", g.n, "Ambient dimension (even)")->each([&](const std::string &) { g.has_n = true; });
    app.add_option("--kappa", g.kappa, "Security parameter")->check(CLI::Range(1u, 65535u));
    app.add_option("--trials", g.trials, "Trials for game run");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--hash-bits", g.hash_bits, "Digest bits r (1..256)")
        ->each([&](const std::string &) { g.has_hash_bits = true; });

    std::function<int()> action;
    auto sub = [&](CLI::App *parent, const std::string &name, const std::string &help) {
        auto *cmd = parent->add_subcommand(name, help);
        cmd->fallthrough();
        return cmd;
    };
    Ctx ctx{g, out, err};

    KeygenArgs keygen;
    auto *c_keygen = sub(&app, "keygen", "Write a TS public/secret key pair");
    c_keygen->add_option("--pk", keygen.pk, "Public key output");
    c_keygen->add_option("--sk", keygen.sk, "Secret key output");
    c_keygen->add_option("--ds", keygen.ds, "Chain signature scheme")
        ->check(CLI::IsMember({"ed25519", "merkle-lamport"}));
    c_keygen->add_option("--merkle-height", keygen.merkle_height, "Merkle tree height")->check(CLI::Range(1u, 12u));
    c_keygen->final_callback([&] { action = [&] { return run_keygen(ctx, keygen); }; });

    MintArgs mint;
    auto *c_token = sub(&app, "token", "Token commands");
    c_token->require_subcommand(1);
    auto *c_mint = sub(c_token, "mint", "Mint a signing token");
    c_mint->add_option("--sk", mint.sk, "Secret key (rewritten)");
    c_mint->add_option("--out", mint.out, "Token output");
    c_mint->add_flag("--coin", mint.coin, "Write the token as a coin container");
    c_mint->final_callback([&] { action = [&] { return run_mint(ctx, mint); }; });

    SignArgs sign;
    auto *c_sign = sub(&app, "sign", "Sign a document, consuming the token");
    c_sign->add_option("--token", sign.token, "Token file (rewritten as spent)");
    c_sign->add_option("--out", sign.out, "Signature output");
    add_doc(c_sign, sign.doc);
    c_sign->final_callback([&] { action = [&] { return run_sign(ctx, sign); }; });

    VerifyArgs verify;
    auto *c_verify = sub(&app, "verify", "Verify a signature");
    c_verify->add_option("--pk", verify.pk, "Public key");
    c_verify->add_option("--sig", verify.sig, "Signature");
    add_doc(c_verify, verify.doc);
    c_verify->final_callback([&] { action = [&] { return run_verify(ctx, verify); }; });

    TokenCheckArgs vtoken;
    auto *c_vtoken = sub(&app, "verify-token", "Test a token without consuming it");
    c_vtoken->add_option("--pk", vtoken.pk, "Public key");
    c_vtoken->add_option("--token", vtoken.token, "Token file (rewritten)");
    c_vtoken->final_callback([&] { action = [&] { return run_verify_token(ctx, vtoken); }; });

    TokenCheckArgs revoke;
    auto *c_revoke = sub(&app, "revoke", "Revoke a token");
    c_revoke->add_option("--pk", revoke.pk, "Public key");
    c_revoke->add_option("--token", revoke.token, "Token file (rewritten as spent)");
    c_revoke->final_callback([&] { action = [&] { return run_revoke(ctx, revoke); }; });

    CheckWriteArgs cwrite;
    CheckCashArgs ccash;
    auto *c_check = sub(&app, "check", "Check commands");
    c_check->require_subcommand(1);
    auto *c_cwrite = sub(c_check, "write", "Burn a coin into a check");
    c_cwrite->add_option("--token", cwrite.token, "Coin or token file (rewritten as spent)");
    c_cwrite->add_option("--payee", cwrite.payee, "Payee")->required();
    c_cwrite->add_option("--branch", cwrite.branch, "Branch id");
    c_cwrite->add_option("--time", cwrite.time, "Timestamp, seconds since the epoch");
    c_cwrite->add_option("--out", cwrite.out, "Check output");
    c_cwrite->final_callback([&] { action = [&] { return run_check_write(ctx, cwrite); }; });
    auto *c_ccash = sub(c_check, "cash", "Cash a check at a branch");
    c_ccash->add_option("--pk", ccash.pk, "Public key");
    c_ccash->add_option("--check", ccash.check, "Check file");
    c_ccash->add_option("--branch", ccash.branch, "Branch id");
    c_ccash->add_option("--now", ccash.now, "Branch clock, seconds since the epoch");
    c_ccash->add_option("--policy", ccash.policy, "Double-cash policy")->check(CLI::IsMember({"ledger", "daily"}));
    c_ccash->add_option("--state", ccash.state, "Branch state file (replayed, then appended)");
    c_ccash->add_option("--sk", ccash.sk, "Secret key; the branch then issues a replacement coin");
    c_ccash->add_option("--coin-out", ccash.coin_out, "Replacement coin output");
    c_ccash->final_callback([&] { action = [&] { return run_check_cash(ctx, ccash); }; });

    BankArgs bank;
    auto *c_bank = sub(&app, "bank", "Bank simulation");
    c_bank->require_subcommand(1);
    auto *c_sim = sub(c_bank, "sim", "Replay a scenario script (defaults n=24, hash bits 32)");
    c_sim->add_option("--script", bank.script, "Scenario script")->required();
    c_sim->add_option("--permute-seed", bank.permute_seed, "Shuffle branch processing order")
        ->each([&](const std::string &) { bank.permute = true; });
    c_sim->final_callback([&] { action = [&] { return run_bank(ctx, bank); }; });

    GameArgs game;
    auto *c_game = sub(&app, "game", "Security games");
    c_game->require_subcommand(1);
    auto *c_run = sub(c_game, "run", "Run one game (hash bits default to 8)");
    c_run->add_option("game", game.game, "Game name")
        ->required()
        ->check(CLI::IsMember({"unforgeability", "super-security", "revocability", "everlasting", "money",
                               "testability", "unpredictability", "mds-unpredictability", "query-count",
                               "relation-statistics", "two-faced"}));
    c_run->add_option("--scheme", game.scheme, "Scheme layer")
        ->check(CLI::IsMember({"ot1", "otr", "ot", "ts", "priv-ot1", "priv-ot", "tm"}));
    c_run->add_option("--strategy", game.strategy, "Adversary strategy");
    c_run->add_option("--l", game.l, "Tokens given to the adversary");
    c_run->add_option("--t", game.t, "Signatures required in the revocability game");
    c_run->add_option("--k", game.k, "verify-token repetitions in the testability game");
    c_run->add_option("--destruction", game.destruction, "Everlasting destruction check")
        ->check(CLI::IsMember({"verify-token", "revoke"}));
    c_run->add_option("--mode", game.mode, "Alice's behaviour in two-faced")
        ->check(CLI::IsMember({"honest", "equivocate", "two-tokens"}));
    c_run->add_flag("--memoized", game.memoized, "Use the memoizing MDS signer");
    c_run->add_option("--query-strategy", game.query_strategy, "query-count strategy")
        ->check(CLI::IsMember({"measure-and-guess", "random-query", "exhaustive"}));
    c_run->add_option("--budget", game.budget, "Query budget for random-query");
    c_run->add_option("--out", game.out, "Also write the report container");
    c_run->final_callback([&] { action = [&] { return run_game(ctx, game); }; });

    SelftestArgs selftest;
    auto *c_self = sub(&app, "selftest", "Round-trip containers and fuzz the parser");
    c_self->add_option("files", selftest.files, "Containers to re-read");
    c_self->add_option("--mutations", selftest.mutations, "Random byte mutations to try");
    c_self->final_callback([&] { action = [&] { return run_selftest(ctx, selftest); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (!action) {
        err << app.help();
        return kExitUsage;
    }
    try {
        return action();
    } catch (const UsageError &e) {
        err << "qtsl: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ot1::TokenSpent &e) {
        err << "qtsl: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception &e) {
        err << "qtsl: " << e.what() << "\n";
        return kExitData;
    }
}

}  // namespace qtsl::cli
