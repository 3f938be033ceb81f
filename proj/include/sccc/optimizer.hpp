#ifndef SCCC_OPTIMIZER_HPP
#define SCCC_OPTIMIZER_HPP

#include <vector>

#include "sccc/common.hpp"
#include "sccc/puncturing.hpp"
#include "sccc/trellis.hpp"

namespace sccc {

// (d_w, N_w) for w = 2..w_max; better = higher d_w, then lower N_w, scanning
// w ascending.
struct ParityMetric {
    std::vector<std::pair<int, BigInt>> dn;
};

// OWEF head: d_free plus multiplicities A_{d_free}..A_{d_free+depth}; better =
// higher d_free, then lexicographically smaller multiplicities.
struct OwefMetric {
    int d_free = 0;
    std::vector<BigInt> a;
};

// Three-way order: +1 first argument better, 0 tie (position index decides
// downstream), -1 second better.
int compare_metrics(const ParityMetric& a, const ParityMetric& b);
int compare_metrics(const OwefMetric& a, const OwefMetric& b);

// Metric of the inner parity-only code under a parity puncturing, counting
// codewords whose events all close within the N free sections.
ParityMetric parity_metric(const TrellisCode& inner, int n_interleaver,
                           const PuncturePattern& p_i_p, int w_max, int m_cap);

// Metric of the outer code punctured by P_o and P'; patterns over the mother
// block of `sections` steps.  a[0] aligns with d_free.
OwefMetric owef_metric(const TrellisCode& outer, const PuncturePattern& p_o,
                       const PuncturePattern& p_prime, int sections, int depth, int j_cap);

// Exact GF(2) invertibility: the map from free information bits to surviving
// output bits is injective.
bool outer_invertible(const TrellisCode& outer, const PuncturePattern& p_o,
                      const PuncturePattern& p_prime, int sections);

struct ParityStep {
    int step = 0;
    int position = 0;
    ParityMetric metric;  // after deleting this position
};

struct ParityLadderResult {
    PunctureLadder ladder;
    std::vector<ParityStep> trajectory;
    bool aborted = false;
    std::string diagnostic;
};

ParityLadderResult optimize_parity_ladder(const TrellisCode& inner, int n_interleaver,
                                          int w_max, int steps, int m_cap = 24);

struct OwefStep {
    int step = 0;
    int position = 0;
    OwefMetric metric;
};

struct SystematicLadderResult {
    PunctureLadder ladder;  // positions over the mother block
    std::vector<OwefStep> trajectory;
    bool stopped_early = false;
    std::string diagnostic;
};

// Greedy P' search; candidates are P_o survivors, optionally restricted to
// parity-stream positions.  Every chosen prefix keeps the outer code
// invertible; steps is capped by the outer rate reaching 1.
SystematicLadderResult optimize_systematic_ladder(const TrellisCode& outer,
                                                  const PuncturePattern& p_o, int sections,
                                                  int depth, int steps, bool restrict_to_parity,
                                                  int j_cap = 18);

}  // namespace sccc

#endif
