#ifndef SCCC_DESIGN_HPP
#define SCCC_DESIGN_HPP

#include <string>
#include <vector>

#include "sccc/common.hpp"
#include "sccc/enumerator.hpp"
#include "sccc/puncturing.hpp"
#include "sccc/trellis.hpp"

namespace sccc {

// Fully assembled serial concatenation: outer code punctured by P_o (and P'
// for the systematic-bit deletion), interleaver, inner code with parity
// puncturing P_i^p and systematic puncturing P_i^s = Pi[P'].  The outer frame
// embeds its termination in the last memory() sections, so the mother block
// is exactly n_out * sections positions and N = K R_c^{o'}^-1 holds as stated.
struct SCCCDesign {
    GeneratorSpec outer_spec, inner_spec;
    TrellisCode outer, inner;
    int sections = 0;  // outer sections, termination included

    PuncturePattern p_o;      // mother block, length n_out * sections
    PuncturePattern p_prime;  // same coordinates as p_o
    PuncturePattern p_i_p;    // inner parity indices, length (n_i - 1) * N
    std::vector<int> interleaver;  // length N; c[i] feeds inner position interleaver[i]

    // derived by finalize()
    int n = 0;                    // interleaver length = P_o survivors
    int k_info = 0;               // free information bits
    BigRat r_o_prime, r_o_dprime, r_inner, r_sccc;
    PermeabilityPair rho;
    PuncturePattern p_i_s;        // P' carried through the interleaver
    std::vector<int> mother_to_n;  // mother position -> index in [0,N), -1 if deleted

    void finalize();  // computes the derived fields and checks invariants
};

SCCCDesign make_design(const std::string& outer_gens, const PuncturePattern& p_o, int sections,
                       const std::string& inner_gens, const PuncturePattern& p_prime,
                       const PuncturePattern& p_i_p, std::vector<int> interleaver);

// Deterministic interleaver from a seed (Fisher-Yates over the pinned RNG).
std::vector<int> random_interleaver(int n, uint64_t seed);

struct EncodedFrame {
    BitVec info;        // free information bits (k_info)
    BitVec outer_code;  // C_o' codeword, length N
    BitVec inner_out;   // serialized inner outputs, n_out_i * (N + memory_i)
};

EncodedFrame encode_frame(const SCCCDesign& d, const BitVec& info);

// Enumerator/bounds glue on the assembled design.
JointWeightTable design_outer_enumerator(const SCCCDesign& d, const EnumCaps& caps);
JointWeightTable design_inner_enumerator(const SCCCDesign& d, const EnumCaps& caps);
std::map<std::pair<int, int>, BigRat> design_oracle_spectrum(const SCCCDesign& d);

}  // namespace sccc

#endif
