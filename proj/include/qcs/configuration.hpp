#pragma once

namespace qcs {

// Counts of unmeasured pairs after an interruption, split by who holds the
// partner half. Fields ending in _a describe Alice's 4N halves, fields ending
// in _b describe Bob's. t1 pairs are the ones Trent uses to bind for Alice, t2
// the ones he uses to bind for Bob.
struct Configuration {
    int l_b_a = 0;
    int l_t1_a = 0;
    int l_t2_a = 0;
    int l_a_b = 0;
    int l_t1_b = 0;
    int l_t2_b = 0;

    int total_a() const { return l_b_a + l_t1_a + l_t2_a; }
    int total_b() const { return l_a_b + l_t1_b + l_t2_b; }

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

}  // namespace qcs
