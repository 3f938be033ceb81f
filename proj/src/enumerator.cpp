#include "sccc/enumerator.hpp"

#include <algorithm>
#include <tuple>

namespace sccc {

namespace {

struct Uint64Overflow {};

inline void checked_add(uint64_t& acc, uint64_t v) {
    if (__builtin_add_overflow(acc, v, &acc)) throw Uint64Overflow{};
}
inline void checked_add(BigInt& acc, const BigInt& v) { acc += v; }

template <typename Count>
struct DpResult {
    std::map<std::tuple<int, int, int, int, bool>, Count> cells;
    bool trunc_iw = false, trunc_wa = false, trunc_wb = false, n_saturated = false;
};

template <typename Count>
DpResult<Count> run_dp(const TrellisCode& t, int free_sections, bool terminate,
                       const BitVec& outmask, const EnumCaps& caps) {
    const int n_states = t.num_states();
    const int n_in = t.num_inputs();
    const int n_out = t.out_per_step();
    const int tail_sections = terminate ? t.termination_sections() : 0;
    const int sections = free_sections + tail_sections;
    const int IW = caps.iw_cap + 1, WA = caps.wa_cap + 1, WB = caps.wb_cap + 1,
              NN = caps.n_cap + 1;
    const size_t cells_per_state = static_cast<size_t>(IW) * WA * WB * NN;
    auto idx = [&](int s, int iw, int wa, int wb, int n) {
        return ((static_cast<size_t>(s) * IW + iw) * WA + wa) * static_cast<size_t>(WB) * NN +
               static_cast<size_t>(wb) * NN + n;
    };

    auto deltas = [&](uint32_t out, int section, int& dwa, int& dwb) {
        dwa = dwb = 0;
        for (int k = 0; k < n_out; ++k) {
            if (!((out >> k) & 1u)) continue;
            uint8_t m = outmask[static_cast<size_t>(section) * n_out + k];
            dwa += m & 1;
            dwb += (m >> 1) & 1;
        }
    };

    DpResult<Count> res;
    std::vector<Count> cur(static_cast<size_t>(n_states) * cells_per_state, Count(0));
    std::vector<Count> nxt(cur.size(), Count(0));
    cur[idx(0, 0, 0, 0, 0)] = 1;

    for (int sec = 0; sec < free_sections; ++sec) {
        std::fill(nxt.begin(), nxt.end(), Count(0));
        for (int s = 0; s < n_states; ++s) {
            for (int u = 0; u < n_in; ++u) {
                const Transition& tr = t.transition(s, u);
                const int diw = __builtin_popcount(tr.in);
                int dwa, dwb;
                deltas(tr.out, sec, dwa, dwb);
                const bool closes = (tr.next == 0) && (s != 0 || diw > 0);
                for (int iw = 0; iw <= caps.iw_cap; ++iw) {
                    const int iw2 = iw + diw;
                    for (int wa = 0; wa <= caps.wa_cap; ++wa) {
                        const int wa2 = wa + dwa;
                        for (int wb = 0; wb <= caps.wb_cap; ++wb) {
                            const int wb2 = wb + dwb;
                            for (int n = 0; n <= caps.n_cap; ++n) {
                                const Count& c = cur[idx(s, iw, wa, wb, n)];
                                if (c == 0) continue;
                                if (iw2 > caps.iw_cap) {
                                    res.trunc_iw = true;
                                    continue;
                                }
                                if (wa2 > caps.wa_cap) {
                                    res.trunc_wa = true;
                                    continue;
                                }
                                if (wb2 > caps.wb_cap) {
                                    res.trunc_wb = true;
                                    continue;
                                }
                                int n2 = n + (closes ? 1 : 0);
                                if (n2 > caps.n_cap) {
                                    n2 = caps.n_cap;
                                    res.n_saturated = true;
                                }
                                checked_add(nxt[idx(tr.next, iw2, wa2, wb2, n2)], c);
                            }
                        }
                    }
                }
            }
        }
        cur.swap(nxt);
    }

    // Forced termination walk per state; events still open here are recorded
    // with the tail flag instead of incrementing n.
    for (int s = 0; s < n_states; ++s) {
        int dwa_tail = 0, dwb_tail = 0;
        if (terminate) {
            int state = s;
            for (int k = 0; k < tail_sections; ++k) {
                const Transition& tr = t.transition(state, t.tail_input(state));
                int dwa, dwb;
                deltas(tr.out, free_sections + k, dwa, dwb);
                dwa_tail += dwa;
                dwb_tail += dwb;
                state = tr.next;
            }
        }
        const bool tail_active = (s != 0);
        for (int iw = 0; iw <= caps.iw_cap; ++iw)
            for (int wa = 0; wa <= caps.wa_cap; ++wa)
                for (int wb = 0; wb <= caps.wb_cap; ++wb)
                    for (int n = 0; n <= caps.n_cap; ++n) {
                        const Count& c = cur[idx(s, iw, wa, wb, n)];
                        if (c == 0) continue;
                        int wa2 = wa + dwa_tail, wb2 = wb + dwb_tail;
                        if (wa2 > caps.wa_cap) {
                            res.trunc_wa = true;
                            continue;
                        }
                        if (wb2 > caps.wb_cap) {
                            res.trunc_wb = true;
                            continue;
                        }
                        auto key = std::make_tuple(iw, wa2, wb2, n, tail_active);
                        auto [it, fresh] = res.cells.emplace(key, Count(0));
                        checked_add(it->second, c);
                    }
    }
    (void)sections;
    return res;
}

}  // namespace

JointWeightTable joint_weight_table(const TrellisCode& t, int free_sections, bool terminate,
                                    const BitVec& outmask, const EnumCaps& caps) {
    if (free_sections < 1) throw ConfigError("need at least one free section");
    const int tail_sections = terminate ? t.termination_sections() : 0;
    if (outmask.size() !=
        static_cast<size_t>(free_sections + tail_sections) * t.out_per_step())
        throw ConfigError("output mask length does not match the serialized block");
    if (caps.iw_cap < 0 || caps.wa_cap < 0 || caps.wb_cap < 0 || caps.n_cap < 1)
        throw ConfigError("enumerator caps must be nonnegative (n_cap >= 1)");

    JointWeightTable table;
    table.caps = caps;
    table.free_sections = free_sections;
    table.sections = free_sections + tail_sections;
    table.terminated = terminate;

    auto fill = [&](auto&& res) {
        table.trunc_iw = res.trunc_iw;
        table.trunc_wa = res.trunc_wa;
        table.trunc_wb = res.trunc_wb;
        table.n_saturated = res.n_saturated;
        table.entries.clear();
        table.entries.reserve(res.cells.size());
        for (auto& [key, count] : res.cells) {
            auto [iw, wa, wb, n, tail] = key;
            table.entries.push_back(WeightEntry{iw, wa, wb, n, tail, BigInt(count)});
        }
    };

    try {
        fill(run_dp<uint64_t>(t, free_sections, terminate, outmask, caps));
    } catch (const Uint64Overflow&) {
        fill(run_dp<BigInt>(t, free_sections, terminate, outmask, caps));
    }
    return table;
}

std::optional<std::pair<int, BigInt>> JointWeightTable::min_wa_at_iw(int iw, bool require_closed,
                                                                     int min_n) const {
    if (iw > caps.iw_cap) throw CapExceededError("input weight " + std::to_string(iw) +
                                                 " beyond iw cap " + std::to_string(caps.iw_cap));
    int best = -1;
    BigInt mult = 0;
    for (const auto& e : entries) {
        if (e.iw != iw) continue;
        if (require_closed && (e.tail || e.n < min_n)) continue;
        if (best < 0 || e.wa < best) {
            best = e.wa;
            mult = e.count;
        } else if (e.wa == best) {
            mult += e.count;
        }
    }
    if (best < 0) {
        if (trunc_wa)
            throw CapExceededError("minimum wa at input weight " + std::to_string(iw) +
                                   " not witnessed within wa cap " + std::to_string(caps.wa_cap));
        return std::nullopt;
    }
    return std::make_pair(best, mult);
}

std::optional<std::pair<int, BigInt>> JointWeightTable::min_wb_at_wa(
    int l, bool input_bounded_by_wa) const {
    if (l > caps.wa_cap) throw CapExceededError("wa value beyond cap");
    if (trunc_iw && (!input_bounded_by_wa || l > caps.iw_cap))
        throw CapExceededError("input-weight truncation may hide codewords at wa=" +
                               std::to_string(l));
    int best = -1;
    BigInt mult = 0;
    for (const auto& e : entries) {
        if (e.wa != l || e.tail || e.n < 1) continue;
        if (best < 0 || e.wb < best) {
            best = e.wb;
            mult = e.count;
        } else if (e.wb == best) {
            mult += e.count;
        }
    }
    if (best < 0) return std::nullopt;
    return std::make_pair(best, mult);
}

JointWeightTable outer_joint_enumerator(const TrellisCode& outer, const PuncturePattern& p_o,
                                        const PuncturePattern& p_prime, int sections,
                                        const EnumCaps& caps) {
    const int n_out = outer.out_per_step();
    const int block = sections * n_out;
    if (p_o.length() != block)
        throw ConfigError("P_o length " + std::to_string(p_o.length()) +
                          " does not match mother block " + std::to_string(block));
    if (p_prime.length() != block)
        throw ConfigError("P' length " + std::to_string(p_prime.length()) +
                          " does not match mother block " + std::to_string(block));
    const int free_sections = sections - outer.termination_sections();
    if (free_sections < 1) throw ConfigError("frame too short for termination");
    BitVec mask(static_cast<size_t>(block));
    for (int q = 0; q < block; ++q) {
        bool in_a = !p_o.deletes(q);
        bool in_b = in_a && !p_prime.deletes(q);
        mask[static_cast<size_t>(q)] = static_cast<uint8_t>((in_a ? 1 : 0) | (in_b ? 2 : 0));
    }
    return joint_weight_table(outer, free_sections, true, mask, caps);
}

JointWeightTable inner_joint_enumerator(const TrellisCode& inner, const PuncturePattern& p_i_p,
                                        int n_interleaver, const EnumCaps& caps) {
    const int n_out = inner.out_per_step();
    const int n_par = n_out - 1;
    if (n_par < 1) throw ConfigError("inner code must emit parity bits");
    if (p_i_p.length() != n_interleaver * n_par)
        throw ConfigError("P_i^p length " + std::to_string(p_i_p.length()) +
                          " does not cover the " + std::to_string(n_interleaver * n_par) +
                          " inner parity bits");
    const int sections = n_interleaver + inner.termination_sections();
    BitVec mask(static_cast<size_t>(sections) * n_out, 0);
    for (int t = 0; t < sections; ++t) {
        for (int k = 1; k < n_out; ++k) {  // systematic output (k = 0) never counts
            int par_index = t * n_par + (k - 1);
            bool kept = t >= n_interleaver || !p_i_p.deletes(par_index);
            mask[static_cast<size_t>(t) * n_out + k] = kept ? 1 : 0;
        }
    }
    EnumCaps c = caps;
    c.wb_cap = 0;
    return joint_weight_table(inner, n_interleaver, true, mask, c);
}

DistanceSummary distance_summary(const JointWeightTable& outer, const JointWeightTable& inner,
                                 bool outer_sys_kept) {
    DistanceSummary s;

    // free distance of C_o': min l > 0 over closed, tail-free codewords
    {
        int best = -1;
        for (const auto& e : outer.entries) {
            if (e.tail || e.n < 1 || e.wa == 0) continue;
            if (best < 0 || e.wa < best) best = e.wa;
        }
        if (best < 0) throw CapExceededError("free distance of C_o' not witnessed within caps");
        s.d_f_o_prime = best;
    }
    // free distance of C_o'': min j over the same support (may be 0)
    {
        int best = -1;
        for (const auto& e : outer.entries) {
            if (e.tail || e.n < 1 || e.iw == 0) continue;
            if (best < 0 || e.wb < best) best = e.wb;
        }
        if (best < 0) throw CapExceededError("free distance of C_o'' not witnessed within caps");
        s.d_f_o_dprime = best;
    }
    for (int l : {s.d_f_o_prime, s.d_f_o_prime + 1}) {
        // nullopt means no C_o' codeword of weight l exists at all; min_wb_at_wa
        // itself rejects queries that truncation could falsify
        auto r = outer.min_wb_at_wa(l, outer_sys_kept);
        if (r) s.d_odprime_at[l] = r->first;
    }
    if (!s.d_odprime_at.count(s.d_f_o_prime))
        throw CapExceededError("no codeword at the C_o' free distance");
    s.d_odprime_at_dfoprime = s.d_odprime_at.at(s.d_f_o_prime);

    if (inner.caps.iw_cap >= 2) {
        auto r = inner.min_wa_at_iw(2, true, 1);
        if (r) s.d_f_eff_inner = r->first;
    }
    if (inner.caps.iw_cap >= 3) {
        auto r = inner.min_wa_at_iw(3, true, 1);
        if (r) s.h_m3 = r->first;
    }

    for (int w = 2; w <= inner.caps.iw_cap; ++w) {
        std::optional<std::pair<int, BigInt>> r;
        try {
            r = inner.min_wa_at_iw(w, true, 1);
        } catch (const CapExceededError&) {
            s.complete = false;
            continue;
        }
        if (r) s.d_w[w] = *r;
    }
    // invertibility is a frame-level statement: any nonzero input with zero
    // surviving weight defeats recovery, tail paths included
    for (int w = 1; w <= inner.caps.iw_cap; ++w) {
        for (const auto& e : inner.entries)
            if (e.iw == w && e.wa == 0) s.invertible_inner = false;
    }

    for (const auto& e : outer.entries) {
        if (e.tail || e.n < 1 || e.iw == 0) continue;
        s.a_d[e.wb] += e.count;
    }
    return s;
}

std::map<std::pair<int, int>, BigRat> brute_force_spectrum(
    const TrellisCode& outer, const PuncturePattern& p_o, const PuncturePattern& p_prime,
    const TrellisCode& inner, const PuncturePattern& p_i_p, int outer_sections) {
    const int free_info = outer_sections - outer.termination_sections();
    const int n = p_o.num_kept();
    if (free_info < 1 || free_info > 14) throw ConfigError("oracle guard: outer frame too large");
    if (n < 1 || n > 12) throw ConfigError("oracle guard: interleaver too large");
    if (p_o.length() != outer_sections * outer.out_per_step())
        throw ConfigError("oracle: P_o length mismatch");
    if (p_prime.length() != p_o.length()) throw ConfigError("oracle: P' length mismatch");
    const int n_par = inner.out_per_step() - 1;
    if (p_i_p.length() != n * n_par) throw ConfigError("oracle: P_i^p length mismatch");

    // surviving inner parity weight per weight-l input placement, memoized per word
    const int inner_sections = n + inner.termination_sections();
    auto inner_parity_weight = [&](const BitVec& v) {
        Codeword cw = encode(inner, v, true);
        int m = 0;
        for (int t = 0; t < inner_sections; ++t)
            for (int k = 1; k < inner.out_per_step(); ++k) {
                if (!cw.bits[static_cast<size_t>(t) * inner.out_per_step() + k]) continue;
                int par_index = t * n_par + (k - 1);
                if (t >= n || !p_i_p.deletes(par_index)) ++m;
            }
        return m;
    };
    // m-distribution of all weight-l inner inputs, computed once per l
    std::map<int, std::map<int, BigInt>> inner_dist;
    for (uint32_t word = 0; word < (1u << n); ++word) {
        BitVec v(static_cast<size_t>(n));
        int l = 0;
        for (int i = 0; i < n; ++i) {
            v[static_cast<size_t>(i)] = (word >> i) & 1u;
            l += v[static_cast<size_t>(i)];
        }
        inner_dist[l][inner_parity_weight(v)] += 1;
    }

    std::map<std::pair<int, int>, BigRat> spectrum;
    for (uint64_t word = 0; word < (1ull << free_info); ++word) {
        BitVec u(static_cast<size_t>(free_info));
        int w = 0;
        for (int i = 0; i < free_info; ++i) {
            u[static_cast<size_t>(i)] = (word >> i) & 1ull;
            w += u[static_cast<size_t>(i)];
        }
        Codeword cw = encode(outer, u, true);
        int l = 0, j = 0;
        for (int q = 0; q < p_o.length(); ++q) {
            if (!cw.bits[static_cast<size_t>(q)] || p_o.deletes(q)) continue;
            ++l;
            if (!p_prime.deletes(q)) ++j;
        }
        const BigInt denom = binomial(n, l);
        for (const auto& [m, count] : inner_dist[l])
            spectrum[{w, j + m}] += BigRat(count, denom);
    }
    return spectrum;
}

}  // namespace sccc
