#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "qcs/bellpair.hpp"
#include "qcs/configuration.hpp"
#include "qcs/random.hpp"
#include "qcs/rules.hpp"

// Rounds are 0-based internally: round i of the exchange uses pair i of each
// side, i in [0, 4N). Interruption step m means m rounds were (at least
// partly) exchanged.
namespace qcs::protocol {

using Bits = std::vector<std::uint8_t>;

enum class Party : std::uint8_t { Alice, Bob };

constexpr Party other(Party p) {
    return p == Party::Alice ? Party::Bob : Party::Alice;
}

std::string_view party_name(Party p);

using qcs::Stagger;

struct ProtocolConfig {
    int n = 100;
    bellpair::NoiseParam kappa{0.05};
    AlphaDistribution alpha;
    double acceptance_sigmas = 3.0;
    Stagger stagger = Stagger::AliceFirst;
    // A client that sees its running acceptance test fail stops sending.
    // Disabling this keeps the exchange going and only records the failure.
    bool halt_on_suspicion = true;

    int rounds() const { return 4 * n; }
    void validate() const;
};

// f-flip strategy: measure the honest observable on every half, then flip each
// reported bit independently with probability flip. flip = 0 is honest.
struct ClientStrategy {
    double flip = 0.0;

    static ClientStrategy honest() { return {}; }
    static ClientStrategy flipping(double f);
    bool is_honest() const { return flip == 0.0; }
};

struct KeyMaterial {
    Bits k_a;
    Bits k_b;
    Bits h_star;
    Bits h_a;
    Bits h_b;
    // Sorted, 2N distinct round indices each. idx_a lists Bob's halves whose
    // partner Alice holds (she checks Bob there); idx_b the reverse.
    std::vector<std::size_t> idx_a;
    std::vector<std::size_t> idx_b;
};

// What `viewer` learns about the other client's key: its bits on viewer's own
// index set, enough to compute the other's honest observable on check pairs.
struct KeyBit {
    std::size_t index = 0;
    std::uint8_t bit = 0;
};
std::vector<KeyBit> peer_key_view(const KeyMaterial& keys, Party viewer);

KeyMaterial stage1_initialize(const ProtocolConfig& cfg, RandomStream& rng, const Bits& contract_hash);

enum class Partner : std::uint8_t {
    // Held by Trent, measured when binding for Alice (the T1 subset).
    TrentForAlice,
    // Held by Trent, measured when binding for Bob (the T2 subset).
    TrentForBob,
    OtherClient,
};

struct PairLedger {
    // side_a[i]: partner of Alice's half of pair i; side_b[i] likewise for Bob.
    std::vector<Partner> side_a;
    std::vector<Partner> side_b;

    const std::vector<Partner>& side(Party p) const { return p == Party::Alice ? side_a : side_b; }
};

PairLedger stage2_distribute(const ProtocolConfig& cfg, const KeyMaterial& keys, RandomStream& rng);

// Unmeasured-pair counts after interruption at step m: indices >= m on each
// side, split by partner class.
Configuration configuration_at(const PairLedger& ledger, int m);

// Outcomes of every measurement the clients make on their own halves and on
// their check halves. Trent's halves stay unmeasured until a bind request
// fixes his bases; his outcomes are then drawn conditioned on these.
struct PhysicalRecord {
    Bits own_a;
    Bits own_b;
    // check_a[i]: Alice's outcome on the partner of Bob's half i, defined
    // where side_b[i] == OtherClient. check_b mirrors it.
    Bits check_a;
    Bits check_b;

    const Bits& own(Party p) const { return p == Party::Alice ? own_a : own_b; }
};

PhysicalRecord measure_clients(const ProtocolConfig& cfg, const PairLedger& ledger, const KeyMaterial& keys,
                               RandomStream& rng);

struct SentBit {
    std::size_t round = 0;
    std::uint8_t bit = 0;
};

enum class CheckOutcome : std::uint8_t { NotChecked, Consistent, Inconsistent };

struct CheckRecord {
    std::size_t round = 0;
    Party receiver = Party::Alice;
    CheckOutcome outcome = CheckOutcome::NotChecked;
    // Running acceptance test after this receipt.
    bool running_ok = true;
};

enum class StopReason : std::uint8_t { Completed, Interrupted, Suspicion };

struct Transcript {
    int m = 0;
    std::vector<SentBit> sent_a;
    std::vector<SentBit> sent_b;
    std::vector<CheckRecord> verdicts;
    StopReason stop = StopReason::Completed;
    // First client whose acceptance test failed, if any.
    std::optional<Party> suspicious;

    bool reached() const { return !suspicious.has_value(); }
    const std::vector<SentBit>& sent_by(Party p) const { return p == Party::Alice ? sent_a : sent_b; }
};

struct ExchangeResult {
    Transcript transcript;
    PhysicalRecord physical;
};

ExchangeResult run_exchange(const ProtocolConfig& cfg, const PairLedger& ledger, const KeyMaterial& keys,
                            const ClientStrategy& strat_a, const ClientStrategy& strat_b,
                            std::optional<int> interrupt_at, RandomStream& rng);

// The other client's results as `receiver` holds them after the exchange:
// 4N entries, empty where nothing was received.
std::vector<std::optional<std::uint8_t>> received_results(const Transcript& transcript, Party receiver,
                                                          int rounds);

// Replaces every missing entry by an independent uniform guess.
Bits fill_guesses(const std::vector<std::optional<std::uint8_t>>& partial, RandomStream& rng);

struct BindVerdict {
    double alpha_drawn = 0.0;
    int threshold = 0;
    int matches_own = 0;
    int matches_other = 0;
    bool test_own_passed = false;
    bool test_other_passed = false;
    bool bound = false;
};

// Trent's step 10 for `claimant`. own_results and other_results are full
// 4N-bit maps. alpha is drawn from cfg.alpha unless given. `physical` stands
// in for the entanglement: Trent's outcomes are sampled conditioned on the
// clients' actual outcomes, in bases derived from h_claimed.
BindVerdict bind(const ProtocolConfig& cfg, const PairLedger& ledger, const KeyMaterial& keys,
                 const PhysicalRecord& physical, Party claimant, const Bits& own_results,
                 const Bits& other_results, const Bits& h_claimed, RandomStream& rng,
                 std::optional<double> alpha = std::nullopt);

// One line per sent bit: "<round> <sender> <bit> <check>", check being one of
// ok, fail or '-' for rounds the receiver does not check.
void write_transcript(std::ostream& out, const Transcript& transcript);

}  // namespace qcs::protocol
