#ifndef SCCC_ENUMERATOR_HPP
#define SCCC_ENUMERATOR_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "sccc/common.hpp"
#include "sccc/puncturing.hpp"
#include "sccc/trellis.hpp"

namespace sccc {

struct EnumCaps {
    int iw_cap = 8;   // input weight (w for the outer code, l for the inner)
    int wa_cap = 24;  // first tracked output weight (l outer, m inner)
    int wb_cap = 24;  // second tracked output weight (j outer; unused inner)
    int n_cap = 6;    // error events; the top bin saturates instead of dropping
};

struct WeightEntry {
    int iw = 0;
    int wa = 0;
    int wb = 0;
    int n = 0;        // error events closed within the free sections
    bool tail = false;  // path was still off the zero state entering the tail
    BigInt count;
};

// Exact joint weight enumerator of a terminated, position-dependently
// punctured code.  Counts are exact for every tuple within caps; paths
// crossing iw/wa/wb caps are dropped (and flagged), paths crossing n_cap are
// kept in the saturated top bin so weight marginals stay exact.
struct JointWeightTable {
    EnumCaps caps;
    int free_sections = 0;
    int sections = 0;
    bool terminated = true;
    bool trunc_iw = false, trunc_wa = false, trunc_wb = false;
    bool n_saturated = false;
    std::vector<WeightEntry> entries;  // sorted by (iw, wa, wb, n, tail)

    bool any_truncation() const { return trunc_iw || trunc_wa || trunc_wb; }

    // min wa over entries with the given input weight; require_closed keeps
    // only tail-free entries with n >= min_n.  nullopt = no such codeword.
    // Throws CapExceededError when truncation may hide a smaller witness.
    std::optional<std::pair<int, BigInt>> min_wa_at_iw(int iw, bool require_closed,
                                                       int min_n = 1) const;
    // min wb over entries at wa == l (closed, tail-free); input_bounded_by_wa
    // asserts iw <= wa holds structurally (systematic outputs all kept).
    std::optional<std::pair<int, BigInt>> min_wb_at_wa(int l, bool input_bounded_by_wa) const;
};

// outmask: 2 bits per serialized output position; bit0 = counts toward wa,
// bit1 = counts toward wb.
JointWeightTable joint_weight_table(const TrellisCode& t, int free_sections, bool terminate,
                                    const BitVec& outmask, const EnumCaps& caps);

// Outer code C_o'' view: w = info weight, l = weight surviving P_o,
// j = weight surviving both P_o and P'.  Patterns are over the serialized
// mother block of `sections` steps (the last memory() steps terminate).
JointWeightTable outer_joint_enumerator(const TrellisCode& outer, const PuncturePattern& p_o,
                                        const PuncturePattern& p_prime, int sections,
                                        const EnumCaps& caps);

// Inner code C_i' view: l = input weight over the N interleaved positions,
// m = parity weight surviving P_i^p (systematic outputs excluded; appended
// termination sections transmit unpunctured).
JointWeightTable inner_joint_enumerator(const TrellisCode& inner, const PuncturePattern& p_i_p,
                                        int n_interleaver, const EnumCaps& caps);

struct DistanceSummary {
    int d_f_o_prime = 0;                      // free distance of C_o'
    int d_f_o_dprime = 0;                     // free distance of C_o''
    std::map<int, int> d_odprime_at;          // l -> min j among C_o' weight-l codewords
    int d_odprime_at_dfoprime = 0;
    std::optional<int> d_f_eff_inner;         // min m over single weight-2 input events
    std::optional<int> h_m3;                  // min m over weight-3 input codewords
    std::map<int, std::pair<int, BigInt>> d_w;  // inner w -> (d_w, N_w)
    std::map<int, BigInt> a_d;                // OWEF of C_o'' (nonzero codewords)
    bool invertible_inner = true;             // no d_w = 0 with N_w != 0
    bool complete = true;                     // all scalars witnessed within caps
};

// outer_sys_kept: P_o deletes no systematic position of a free section, which
// bounds iw <= wa and makes cap reasoning for the outer minima exact.
DistanceSummary distance_summary(const JointWeightTable& outer, const JointWeightTable& inner,
                                 bool outer_sys_kept);

// Exact uniform-interleaver average spectrum of the toy-sized concatenation:
// every outer information word, composed with every weight-l inner input
// placement weighted 1/C(N,l).  Keys are (w, h = j + m).
std::map<std::pair<int, int>, BigRat> brute_force_spectrum(
    const TrellisCode& outer, const PuncturePattern& p_o, const PuncturePattern& p_prime,
    const TrellisCode& inner, const PuncturePattern& p_i_p, int outer_sections);

}  // namespace sccc

#endif
