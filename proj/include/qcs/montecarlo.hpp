#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qcs/configuration.hpp"
#include "qcs/protocol.hpp"

// Seeded Monte Carlo runs of the full protocol pipeline. Trial t of an
// experiment always uses RandomStream::derived(master_seed, t), and outcomes
// are aggregated as integer counts, so results do not depend on the thread
// count or schedule.
namespace qcs::montecarlo {

struct Interrupt {
    enum class Kind : std::uint8_t { None, AtStep, UniformStep };
    Kind kind = Kind::None;
    int step = 0;

    static Interrupt none() { return {}; }
    static Interrupt at(int m) { return {Kind::AtStep, m}; }
    // m drawn uniformly from 1..4N in every trial.
    static Interrupt uniform() { return {Kind::UniformStep, 0}; }
};

struct ExperimentSpec {
    protocol::ProtocolConfig cfg;
    protocol::ClientStrategy strategy_a;
    protocol::ClientStrategy strategy_b;
    Interrupt interrupt;
    int trials = 1000;
    std::uint64_t master_seed = 0;
    // Pins alpha for every trial; otherwise one alpha per trial is drawn from
    // cfg.alpha and used for both bind requests.
    std::optional<double> alpha;

    void validate() const;
};

struct Estimate {
    double p_hat = 0.0;
    double std_error = 0.0;
    long trials = 0;
    long successes = 0;
    // Wilson score interval.
    double ci95_lo = 0.0;
    double ci95_hi = 0.0;
};

Estimate make_estimate(long successes, long trials);

struct TrialRecord {
    // Number of bits Alice sent before the exchange stopped.
    int m = 0;
    // Interruption step requested for this trial (4N when uninterrupted).
    int interrupt_step = 0;
    bool reached = false;
    protocol::StopReason stop = protocol::StopReason::Completed;
    double alpha = 0.0;
    bool alice_bound = false;
    bool bob_bound = false;
    // Unmeasured pairs at the requested interruption step.
    Configuration configuration;

    bool bob_cheats() const { return reached && bob_bound && !alice_bound; }
    bool alice_cheats() const { return reached && alice_bound && !bob_bound; }
};

// stage1 -> stage2 -> exchange -> guess fill -> both bind requests.
TrialRecord run_trial(const ExperimentSpec& spec, std::uint64_t trial);

struct ExperimentSummary {
    long trials = 0;
    long reached = 0;
    long alice_bound = 0;
    long bob_bound = 0;
    long bob_cheats = 0;
    long alice_cheats = 0;

    Estimate reach() const { return make_estimate(reached, trials); }
    Estimate bind(protocol::Party claimant) const {
        return make_estimate(claimant == protocol::Party::Alice ? alice_bound : bob_bound, trials);
    }
    Estimate cheat() const { return make_estimate(bob_cheats, trials); }
};

ExperimentSummary run_experiment(const ExperimentSpec& spec, int threads = 1);

Estimate estimate_bind(const ExperimentSpec& spec, protocol::Party claimant, int threads = 1);
// Bob binds while Alice cannot, with no suspicion raised before the stop.
Estimate estimate_cheat(const ExperimentSpec& spec, int threads = 1);

// One summary per spec, in input order.
std::vector<ExperimentSummary> sweep(const std::vector<ExperimentSpec>& specs, int threads = 1);

}  // namespace qcs::montecarlo
