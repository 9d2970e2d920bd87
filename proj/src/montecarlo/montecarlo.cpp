#include "qcs/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcs/contract_hash.hpp"
#include "qcs/error.hpp"
#include "qcs/parallel.hpp"

namespace qcs::montecarlo {

namespace {

using protocol::Bits;
using protocol::Party;

constexpr double kZ95 = 1.959963984540054;
constexpr std::size_t kChunk = 64;

// Any fixed document will do; the keys are random in every trial.
constexpr const char* kContract = "Alice sells Bob one bicycle for 100 coins.";

TrialRecord trial_with_hash(const ExperimentSpec& spec, std::uint64_t trial, const Bits& hash) {
    const protocol::ProtocolConfig& cfg = spec.cfg;
    RandomStream rng = RandomStream::derived(spec.master_seed, trial);
    TrialRecord rec;
    rec.alpha = spec.alpha ? *spec.alpha : cfg.alpha.draw(rng);

    std::optional<int> stop_at;
    switch (spec.interrupt.kind) {
        case Interrupt::Kind::None:
            rec.interrupt_step = cfg.rounds();
            break;
        case Interrupt::Kind::AtStep:
            rec.interrupt_step = spec.interrupt.step;
            stop_at = spec.interrupt.step;
            break;
        case Interrupt::Kind::UniformStep:
            rec.interrupt_step = 1 + static_cast<int>(rng.uniform_below(static_cast<std::size_t>(cfg.rounds())));
            stop_at = rec.interrupt_step;
            break;
    }

    const protocol::KeyMaterial keys = protocol::stage1_initialize(cfg, rng, hash);
    const protocol::PairLedger ledger = protocol::stage2_distribute(cfg, keys, rng);
    const protocol::ExchangeResult ex =
        protocol::run_exchange(cfg, ledger, keys, spec.strategy_a, spec.strategy_b, stop_at, rng);
    rec.m = ex.transcript.m;
    rec.reached = ex.transcript.reached();
    rec.stop = ex.transcript.stop;
    rec.configuration = protocol::configuration_at(ledger, rec.interrupt_step);

    const int rounds = cfg.rounds();
    const Bits from_b = protocol::fill_guesses(protocol::received_results(ex.transcript, Party::Alice, rounds), rng);
    const Bits from_a = protocol::fill_guesses(protocol::received_results(ex.transcript, Party::Bob, rounds), rng);
    // A flipping client still measures honestly and hands Trent its true
    // outcomes.
    rec.alice_bound = protocol::bind(cfg, ledger, keys, ex.physical, Party::Alice, ex.physical.own_a, from_b,
                                     keys.h_star, rng, rec.alpha)
                          .bound;
    rec.bob_bound = protocol::bind(cfg, ledger, keys, ex.physical, Party::Bob, ex.physical.own_b, from_a,
                                   keys.h_star, rng, rec.alpha)
                        .bound;
    return rec;
}

Bits contract_for(const ExperimentSpec& spec) {
    return protocol::contract_hash_bits(kContract, static_cast<std::size_t>(spec.cfg.rounds()));
}

}  // namespace

void ExperimentSpec::validate() const {
    cfg.validate();
    if (trials < 1) {
        throw ConfigError("trials must be at least 1, got " + std::to_string(trials));
    }
    for (const auto* s : {&strategy_a, &strategy_b}) {
        if (!(s->flip >= 0.0 && s->flip <= 1.0)) {
            throw ConfigError("flip frequency must lie in [0, 1]");
        }
    }
    if (interrupt.kind == Interrupt::Kind::AtStep && (interrupt.step < 0 || interrupt.step > cfg.rounds())) {
        throw ConfigError("interrupt step " + std::to_string(interrupt.step) + " outside [0, " +
                          std::to_string(cfg.rounds()) + "]");
    }
    if (alpha && !(*alpha > 0.5 && *alpha < 1.0)) {
        throw ConfigError("pinned alpha must lie in (1/2, 1)");
    }
}

Estimate make_estimate(long successes, long trials) {
    if (trials < 1 || successes < 0 || successes > trials) {
        throw InputError("estimate needs 0 <= successes <= trials and trials >= 1");
    }
    Estimate e;
    e.trials = trials;
    e.successes = successes;
    const double n = static_cast<double>(trials);
    e.p_hat = static_cast<double>(successes) / n;
    e.std_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / n);
    const double z2 = kZ95 * kZ95;
    const double centre = (e.p_hat + z2 / (2.0 * n)) / (1.0 + z2 / n);
    const double half = kZ95 * std::sqrt(e.p_hat * (1.0 - e.p_hat) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
    // The interval touches the boundary exactly when nothing (or everything)
    // was observed; rounding would otherwise leave a residue like 1e-19.
    e.ci95_lo = successes == 0 ? 0.0 : std::clamp(centre - half, 0.0, 1.0);
    e.ci95_hi = successes == trials ? 1.0 : std::clamp(centre + half, 0.0, 1.0);
    return e;
}

TrialRecord run_trial(const ExperimentSpec& spec, std::uint64_t trial) {
    spec.validate();
    return trial_with_hash(spec, trial, contract_for(spec));
}

ExperimentSummary run_experiment(const ExperimentSpec& spec, int threads) {
    spec.validate();
    const Bits hash = contract_for(spec);
    const auto trials = static_cast<std::size_t>(spec.trials);
    const std::size_t chunks = (trials + kChunk - 1) / kChunk;
    std::vector<ExperimentSummary> partial(chunks);
    parallel_for(chunks, resolve_threads(threads), [&](std::size_t c) {
        ExperimentSummary& s = partial[c];
        const std::size_t end = std::min(trials, (c + 1) * kChunk);
        for (std::size_t t = c * kChunk; t < end; ++t) {
            const TrialRecord r = trial_with_hash(spec, t, hash);
            ++s.trials;
            s.reached += r.reached ? 1 : 0;
            s.alice_bound += r.alice_bound ? 1 : 0;
            s.bob_bound += r.bob_bound ? 1 : 0;
            s.bob_cheats += r.bob_cheats() ? 1 : 0;
            s.alice_cheats += r.alice_cheats() ? 1 : 0;
        }
    });
    ExperimentSummary total;
    for (const ExperimentSummary& s : partial) {
        total.trials += s.trials;
        total.reached += s.reached;
        total.alice_bound += s.alice_bound;
        total.bob_bound += s.bob_bound;
        total.bob_cheats += s.bob_cheats;
        total.alice_cheats += s.alice_cheats;
    }
    return total;
}

Estimate estimate_bind(const ExperimentSpec& spec, Party claimant, int threads) {
    return run_experiment(spec, threads).bind(claimant);
}

Estimate estimate_cheat(const ExperimentSpec& spec, int threads) {
    return run_experiment(spec, threads).cheat();
}

std::vector<ExperimentSummary> sweep(const std::vector<ExperimentSpec>& specs, int threads) {
    std::vector<ExperimentSummary> out;
    out.reserve(specs.size());
    for (const ExperimentSpec& spec : specs) {
        out.push_back(run_experiment(spec, threads));
    }
    return out;
}

}  // namespace qcs::montecarlo
