#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace paritylock {

struct CheckResult {
    std::string name;
    double value = 0.0;      // worst deviation found
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

struct ValidationOptions {
    bool quick = false;
    std::uint64_t seed = 1;
    int n_max = 40;
    // negative control: shift E2 with the wrong sign
    bool flip_e2 = false;
};

// Operator identities, POVM equivalence, closed-form oracles, parity lock, cutoff sufficiency.
std::vector<CheckResult> run_validation(const ValidationOptions& opt);

// closed forms for the minimal sequences (w-scaled coherence, Lamb-Dicke)
// B|B: prep BSB(t1, phi_p), readout BSB(tB, phi)
double oracle_pg_b_b(double t1, double tB, double phi_p, double phi, double w);
// BR|R: prep BSB(t1, *), RSB(t2, phi_p2), readout RSB(tR, phi)
double oracle_pg_br_r(double t1, double t2, double tR, double phi_p2, double phi, double w);

}  // namespace paritylock
