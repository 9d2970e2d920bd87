#include "qcs/protocol.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

#include "qcs/error.hpp"

namespace qcs::protocol {

namespace {

using bellpair::basis_for_bit;
using bellpair::MeasBasis;

// Uniform k-subset of [0, n), sorted.
std::vector<std::size_t> random_subset(std::size_t n, std::size_t k, RandomStream& rng) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.uniform_below(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

Bits random_bits(std::size_t n, RandomStream& rng) {
    Bits out(n);
    for (auto& b : out) {
        b = rng.bit();
    }
    return out;
}

std::vector<Partner> assign_side(std::size_t rounds, const std::vector<std::size_t>& shared, RandomStream& rng) {
    std::vector<Partner> side(rounds, Partner::TrentForAlice);
    for (const std::size_t i : shared) {
        side[i] = Partner::OtherClient;
    }
    std::vector<std::size_t> trent;
    trent.reserve(rounds - shared.size());
    for (std::size_t i = 0; i < rounds; ++i) {
        if (side[i] != Partner::OtherClient) {
            trent.push_back(i);
        }
    }
    // Half of Trent's halves, chosen uniformly, are reserved for Bob's binding.
    const std::vector<std::size_t> for_bob = random_subset(trent.size(), trent.size() / 2, rng);
    for (const std::size_t pos : for_bob) {
        side[trent[pos]] = Partner::TrentForBob;
    }
    return side;
}

void require_bits(const Bits& bits, std::size_t expected, const char* what) {
    if (bits.size() != expected) {
        throw InputError(std::string(what) + ": expected " + std::to_string(expected) + " entries, got " +
                         std::to_string(bits.size()));
    }
    for (const auto b : bits) {
        if (b > 1) {
            throw InputError(std::string(what) + ": entries must be 0 or 1");
        }
    }
}

struct RunningTest {
    int seen = 0;
    int consistent = 0;
    bool ok = true;

    bool record(bool match, const ProtocolConfig& cfg) {
        ++seen;
        consistent += match ? 1 : 0;
        ok = ok && consistent >= acceptance_threshold(seen, cfg.kappa.kappa(), cfg.acceptance_sigmas);
        return ok;
    }
};

}  // namespace

std::string_view party_name(Party p) {
    return p == Party::Alice ? "A" : "B";
}

void ProtocolConfig::validate() const {
    if (n < 1) {
        throw ConfigError("n must be at least 1");
    }
    if (!(acceptance_sigmas > 0.0)) {
        throw ConfigError("acceptance sigmas must be positive");
    }
    alpha.validate();
}

ClientStrategy ClientStrategy::flipping(double f) {
    if (!(f >= 0.0 && f <= 1.0)) {
        throw ConfigError("flip frequency must lie in [0, 1], got " + std::to_string(f));
    }
    return ClientStrategy{f};
}

std::vector<KeyBit> peer_key_view(const KeyMaterial& keys, Party viewer) {
    const auto& indices = viewer == Party::Alice ? keys.idx_a : keys.idx_b;
    const auto& peer_key = viewer == Party::Alice ? keys.k_b : keys.k_a;
    std::vector<KeyBit> view;
    view.reserve(indices.size());
    for (const std::size_t i : indices) {
        view.push_back({i, peer_key[i]});
    }
    return view;
}

KeyMaterial stage1_initialize(const ProtocolConfig& cfg, RandomStream& rng, const Bits& contract_hash) {
    cfg.validate();
    const auto rounds = static_cast<std::size_t>(cfg.rounds());
    if (contract_hash.size() != rounds) {
        throw ConfigError("contract hash has " + std::to_string(contract_hash.size()) + " bits, protocol needs " +
                          std::to_string(rounds));
    }
    require_bits(contract_hash, rounds, "contract hash");

    KeyMaterial keys;
    keys.h_star = contract_hash;
    keys.k_a = random_bits(rounds, rng);
    keys.k_b = random_bits(rounds, rng);
    keys.h_a.resize(rounds);
    keys.h_b.resize(rounds);
    for (std::size_t i = 0; i < rounds; ++i) {
        keys.h_a[i] = contract_hash[i] ^ keys.k_a[i];
        keys.h_b[i] = contract_hash[i] ^ keys.k_b[i];
    }
    keys.idx_a = random_subset(rounds, rounds / 2, rng);
    keys.idx_b = random_subset(rounds, rounds / 2, rng);
    return keys;
}

PairLedger stage2_distribute(const ProtocolConfig& cfg, const KeyMaterial& keys, RandomStream& rng) {
    const auto rounds = static_cast<std::size_t>(cfg.rounds());
    PairLedger ledger;
    // Alice's half i is shared with Bob exactly when Bob checks her at i.
    ledger.side_a = assign_side(rounds, keys.idx_b, rng);
    ledger.side_b = assign_side(rounds, keys.idx_a, rng);
    return ledger;
}

Configuration configuration_at(const PairLedger& ledger, int m) {
    const int rounds = static_cast<int>(ledger.side_a.size());
    if (m < 0 || m > rounds) {
        throw InputError("configuration_at: step out of range");
    }
    Configuration c;
    for (int i = m; i < rounds; ++i) {
        switch (ledger.side_a[i]) {
            case Partner::OtherClient: ++c.l_b_a; break;
            case Partner::TrentForAlice: ++c.l_t1_a; break;
            case Partner::TrentForBob: ++c.l_t2_a; break;
        }
        switch (ledger.side_b[i]) {
            case Partner::OtherClient: ++c.l_a_b; break;
            case Partner::TrentForAlice: ++c.l_t1_b; break;
            case Partner::TrentForBob: ++c.l_t2_b; break;
        }
    }
    return c;
}

PhysicalRecord measure_clients(const ProtocolConfig& cfg, const PairLedger& ledger, const KeyMaterial& keys,
                               RandomStream& rng) {
    const auto rounds = static_cast<std::size_t>(cfg.rounds());
    PhysicalRecord rec;
    rec.own_a.assign(rounds, 0);
    rec.own_b.assign(rounds, 0);
    rec.check_a.assign(rounds, 0);
    rec.check_b.assign(rounds, 0);
    for (std::size_t i = 0; i < rounds; ++i) {
        // Alice's half i; on a shared pair Bob measures the partner in Alice's
        // honest basis, which he knows from her key bit on his index set.
        const MeasBasis basis_a = basis_for_bit(keys.h_a[i]);
        if (ledger.side_a[i] == Partner::OtherClient) {
            const auto pair = bellpair::sample_pair(basis_a, basis_a, cfg.kappa, rng);
            rec.own_a[i] = pair.a;
            rec.check_b[i] = pair.b;
        } else {
            rec.own_a[i] = rng.bit();
        }
        const MeasBasis basis_b = basis_for_bit(keys.h_b[i]);
        if (ledger.side_b[i] == Partner::OtherClient) {
            const auto pair = bellpair::sample_pair(basis_b, basis_b, cfg.kappa, rng);
            rec.own_b[i] = pair.a;
            rec.check_a[i] = pair.b;
        } else {
            rec.own_b[i] = rng.bit();
        }
    }
    return rec;
}

ExchangeResult run_exchange(const ProtocolConfig& cfg, const PairLedger& ledger, const KeyMaterial& keys,
                            const ClientStrategy& strat_a, const ClientStrategy& strat_b,
                            std::optional<int> interrupt_at, RandomStream& rng) {
    cfg.validate();
    const int rounds = cfg.rounds();
    if (interrupt_at && (*interrupt_at < 0 || *interrupt_at > rounds)) {
        throw InputError("interrupt step " + std::to_string(*interrupt_at) + " outside [0, " +
                         std::to_string(rounds) + "]");
    }

    ExchangeResult result;
    result.physical = measure_clients(cfg, ledger, keys, rng);
    const PhysicalRecord& phys = result.physical;
    Transcript& tr = result.transcript;

    const int limit = interrupt_at.value_or(rounds);
    const int stop_a = limit;
    const int stop_b = interrupt_at && cfg.stagger == Stagger::AliceFirst ? std::max(limit - 1, 0) : limit;

    RunningTest test_by_a;
    RunningTest test_by_b;
    bool halted = false;

    auto report = [&](Party sender, std::size_t i) {
        const ClientStrategy& s = sender == Party::Alice ? strat_a : strat_b;
        std::uint8_t bit = phys.own(sender)[i];
        if (s.flip > 0.0 && rng.bernoulli(s.flip)) {
            bit ^= 1U;
        }
        (sender == Party::Alice ? tr.sent_a : tr.sent_b).push_back({i, bit});
        return bit;
    };
    // Receiver compares against its check half where it holds one.
    auto receive = [&](Party receiver, std::size_t i, std::uint8_t bit) {
        CheckRecord rec{i, receiver, CheckOutcome::NotChecked, true};
        RunningTest& test = receiver == Party::Alice ? test_by_a : test_by_b;
        const auto& sender_side = ledger.side(other(receiver));
        if (sender_side[i] == Partner::OtherClient) {
            const std::uint8_t expected = receiver == Party::Alice ? phys.check_a[i] : phys.check_b[i];
            const bool match = bit == expected;
            rec.outcome = match ? CheckOutcome::Consistent : CheckOutcome::Inconsistent;
            test.record(match, cfg);
        }
        rec.running_ok = test.ok;
        tr.verdicts.push_back(rec);
        if (!test.ok && !tr.suspicious) {
            tr.suspicious = receiver;
            halted = cfg.halt_on_suspicion;
        }
    };

    for (int r = 0; r < rounds && !halted; ++r) {
        const auto i = static_cast<std::size_t>(r);
        const bool a_sends = r < stop_a;
        const bool b_sends = r < stop_b;
        if (!a_sends && !b_sends) {
            break;
        }
        if (cfg.stagger == Stagger::AliceFirst) {
            if (a_sends) {
                receive(Party::Bob, i, report(Party::Alice, i));
            }
            if (b_sends && !halted) {
                receive(Party::Alice, i, report(Party::Bob, i));
            }
        } else {
            const std::uint8_t bit_a = a_sends ? report(Party::Alice, i) : 0;
            const std::uint8_t bit_b = b_sends ? report(Party::Bob, i) : 0;
            if (a_sends) {
                receive(Party::Bob, i, bit_a);
            }
            if (b_sends) {
                receive(Party::Alice, i, bit_b);
            }
        }
    }

    tr.m = static_cast<int>(tr.sent_a.size());
    if (halted) {
        tr.stop = StopReason::Suspicion;
    } else if (tr.sent_a.size() < static_cast<std::size_t>(rounds) ||
               tr.sent_b.size() < static_cast<std::size_t>(rounds)) {
        tr.stop = StopReason::Interrupted;
    } else {
        tr.stop = StopReason::Completed;
    }
    return result;
}

std::vector<std::optional<std::uint8_t>> received_results(const Transcript& transcript, Party receiver,
                                                          int rounds) {
    std::vector<std::optional<std::uint8_t>> out(static_cast<std::size_t>(rounds));
    for (const SentBit& s : transcript.sent_by(other(receiver))) {
        if (s.round >= out.size()) {
            throw InputError("received_results: transcript round beyond protocol length");
        }
        out[s.round] = s.bit;
    }
    return out;
}

Bits fill_guesses(const std::vector<std::optional<std::uint8_t>>& partial, RandomStream& rng) {
    Bits out(partial.size());
    for (std::size_t i = 0; i < partial.size(); ++i) {
        out[i] = partial[i] ? *partial[i] : rng.bit();
    }
    return out;
}

BindVerdict bind(const ProtocolConfig& cfg, const PairLedger& ledger, const KeyMaterial& keys,
                 const PhysicalRecord& physical, Party claimant, const Bits& own_results,
                 const Bits& other_results, const Bits& h_claimed, RandomStream& rng,
                 std::optional<double> alpha) {
    cfg.validate();
    const auto rounds = static_cast<std::size_t>(cfg.rounds());
    require_bits(own_results, rounds, "own results");
    require_bits(other_results, rounds, "other results");
    require_bits(h_claimed, rounds, "claimed hash");
    if (ledger.side_a.size() != rounds || ledger.side_b.size() != rounds || physical.own_a.size() != rounds ||
        physical.own_b.size() != rounds) {
        throw InputError("bind: ledger or physical record does not match the protocol length");
    }

    BindVerdict v;
    v.alpha_drawn = alpha ? *alpha : cfg.alpha.draw(rng);
    v.threshold = threshold_count(v.alpha_drawn, cfg.n);
    const Partner subset = claimant == Party::Alice ? Partner::TrentForAlice : Partner::TrentForBob;

    // Trent measures his halves of `side`'s pairs in the subset, in the honest
    // observable computed from h_claimed, and counts agreements with `claimed`.
    auto count_matches = [&](Party side, const Bits& claimed) {
        const auto& partners = ledger.side(side);
        const Bits& key = side == Party::Alice ? keys.k_a : keys.k_b;
        const Bits& h_true = side == Party::Alice ? keys.h_a : keys.h_b;
        const Bits& actual = physical.own(side);
        int checked = 0;
        int matches = 0;
        for (std::size_t i = 0; i < rounds; ++i) {
            if (partners[i] != subset) {
                continue;
            }
            ++checked;
            const MeasBasis client_basis = basis_for_bit(h_true[i]);
            const MeasBasis trent_basis = basis_for_bit(static_cast<std::uint8_t>(h_claimed[i] ^ key[i]));
            const std::uint8_t trent = bellpair::sample_partner(actual[i], client_basis, trent_basis, cfg.kappa, rng);
            matches += claimed[i] == trent ? 1 : 0;
        }
        if (checked != cfg.n) {
            throw InputError("bind: ledger subset does not hold exactly N pairs");
        }
        return matches;
    };

    v.matches_own = count_matches(claimant, own_results);
    v.matches_other = count_matches(other(claimant), other_results);
    v.test_own_passed = v.matches_own >= v.threshold;
    v.test_other_passed = v.matches_other >= v.threshold;
    v.bound = v.test_own_passed && v.test_other_passed;
    return v;
}

void write_transcript(std::ostream& out, const Transcript& transcript) {
    for (const CheckRecord& rec : transcript.verdicts) {
        const Party sender = other(rec.receiver);
        const SentBit& sent = transcript.sent_by(sender).at(rec.round);
        const char* check = "-";
        if (rec.outcome == CheckOutcome::Consistent) {
            check = "ok";
        } else if (rec.outcome == CheckOutcome::Inconsistent) {
            check = "fail";
        }
        out << rec.round << ' ' << party_name(sender) << ' ' << static_cast<int>(sent.bit) << ' ' << check << '\n';
    }
}

}  // namespace qcs::protocol
