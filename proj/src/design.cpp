#include "sccc/design.hpp"

#include "sccc/simulator.hpp"

namespace sccc {

void SCCCDesign::finalize() {
    const int n_out = outer.out_per_step();
    const int block = sections * n_out;
    if (p_o.length() != block)
        throw ConfigError("P_o length " + std::to_string(p_o.length()) +
                          " != mother block " + std::to_string(block));
    if (p_prime.length() != block) throw ConfigError("P' must live on the mother block");
    for (int q : p_prime.deleted())
        if (p_o.deletes(q))
            throw ConfigError("P' deletes position " + std::to_string(q) +
                              " already removed by P_o");
    n = p_o.num_kept();
    k_info = sections - outer.termination_sections();
    if (k_info < 1) throw ConfigError("frame shorter than the termination tail");
    if (static_cast<int>(interleaver.size()) != n)
        throw ConfigError("interleaver length " + std::to_string(interleaver.size()) +
                          " != N = " + std::to_string(n));
    const int n_par = inner.out_per_step() - 1;
    if (p_i_p.length() != n * n_par)
        throw ConfigError("P_i^p must cover the " + std::to_string(n * n_par) +
                          " inner parity bits");

    // nominal frame-length rates: every section carries one input position,
    // so K = sections and N = K / R_c^{o'} holds exactly; error rates are
    // still measured over the k_info free bits
    r_o_prime = BigRat(sections * outer.bits_per_step(), n);
    const int dprime_kept = n - p_prime.num_deleted();
    r_o_dprime = BigRat(sections * outer.bits_per_step(), dprime_kept);
    rho.rho_s = BigRat(dprime_kept, n);
    rho.rho_p = BigRat(p_i_p.num_kept(), n * n_par);
    r_inner = BigRat(1) / (rho.rho_s + BigRat(n_par) * rho.rho_p);
    r_sccc = sccc_rate(r_o_prime, inner.out_per_step(), rho);

    mother_to_n.assign(static_cast<size_t>(block), -1);
    int idx = 0;
    for (int q = 0; q < block; ++q)
        if (!p_o.deletes(q)) mother_to_n[static_cast<size_t>(q)] = idx++;

    // P_i^s = Pi[P']: deleted inner systematic positions are the interleaved
    // images of the P'-deleted survivors
    std::vector<int> del;
    for (int q : p_prime.deleted())
        del.push_back(interleaver[static_cast<size_t>(mother_to_n[static_cast<size_t>(q)])]);
    p_i_s = PuncturePattern::from_list(n, std::move(del));
}

SCCCDesign make_design(const std::string& outer_gens, const PuncturePattern& p_o, int sections,
                       const std::string& inner_gens, const PuncturePattern& p_prime,
                       const PuncturePattern& p_i_p, std::vector<int> interleaver) {
    SCCCDesign d;
    d.outer_spec = GeneratorSpec::parse(outer_gens);
    d.inner_spec = GeneratorSpec::parse(inner_gens);
    d.outer = build_trellis(d.outer_spec);
    d.inner = build_trellis(d.inner_spec);
    d.sections = sections;
    d.p_o = p_o;
    d.p_prime = p_prime;
    d.p_i_p = p_i_p;
    d.interleaver = std::move(interleaver);
    d.finalize();
    return d;
}

std::vector<int> random_interleaver(int n, uint64_t seed) {
    std::vector<int> perm(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    Xoshiro256pp rng = Xoshiro256pp::from_seed(seed);
    for (int i = n - 1; i > 0; --i) {
        uint64_t j = rng.below(static_cast<uint64_t>(i) + 1);
        std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
    }
    return perm;
}

EncodedFrame encode_frame(const SCCCDesign& d, const BitVec& info) {
    if (static_cast<int>(info.size()) != d.k_info)
        throw ConfigError("frame expects " + std::to_string(d.k_info) + " information bits");
    EncodedFrame f;
    f.info = info;
    Codeword mother = encode(d.outer, info, true);
    f.outer_code = d.p_o.apply(mother.bits);
    BitVec v(static_cast<size_t>(d.n));
    for (int i = 0; i < d.n; ++i)
        v[static_cast<size_t>(d.interleaver[static_cast<size_t>(i)])] =
            f.outer_code[static_cast<size_t>(i)];
    Codeword inner_cw = encode(d.inner, v, true);
    f.inner_out = std::move(inner_cw.bits);
    return f;
}

JointWeightTable design_outer_enumerator(const SCCCDesign& d, const EnumCaps& caps) {
    return outer_joint_enumerator(d.outer, d.p_o, d.p_prime, d.sections, caps);
}

JointWeightTable design_inner_enumerator(const SCCCDesign& d, const EnumCaps& caps) {
    return inner_joint_enumerator(d.inner, d.p_i_p, d.n, caps);
}

std::map<std::pair<int, int>, BigRat> design_oracle_spectrum(const SCCCDesign& d) {
    return brute_force_spectrum(d.outer, d.p_o, d.p_prime, d.inner, d.p_i_p, d.sections);
}

}  // namespace sccc
