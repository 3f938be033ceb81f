#include "sccc/optimizer.hpp"

#include <algorithm>
#include <cstring>

namespace sccc {

int compare_metrics(const ParityMetric& a, const ParityMetric& b) {
    if (a.dn.size() != b.dn.size()) throw ConfigError("parity metric shape mismatch");
    for (size_t i = 0; i < a.dn.size(); ++i) {
        if (a.dn[i].first != b.dn[i].first) return a.dn[i].first > b.dn[i].first ? 1 : -1;
        if (a.dn[i].second != b.dn[i].second) return a.dn[i].second < b.dn[i].second ? 1 : -1;
    }
    return 0;
}

int compare_metrics(const OwefMetric& a, const OwefMetric& b) {
    if (a.a.size() != b.a.size()) throw ConfigError("OWEF metric shape mismatch");
    if (a.d_free != b.d_free) return a.d_free > b.d_free ? 1 : -1;
    for (size_t i = 0; i < a.a.size(); ++i)
        if (a.a[i] != b.a[i]) return a.a[i] < b.a[i] ? 1 : -1;
    return 0;
}

namespace {

// Forward/backward tables over the free sections with cells [state][w][m];
// paths are pinned to state 0 at the free-phase boundary, so only codewords
// whose events close inside the frame feed the metrics.
struct MetricDp {
    int n_states, n_sections, w_cap, m_cap;
    bool track_iw = true;  // OWEF tables fold the input weight away
    size_t cell;           // cells per section boundary
    std::vector<uint64_t> fwd, bwd;

    size_t idx(int s, int w, int m) const {
        return (static_cast<size_t>(s) * (w_cap + 1) + w) * (m_cap + 1) + m;
    }
};

// delta_m(section, transition) -> weight contribution of that transition's
// masked outputs at that section
template <typename DeltaFn>
void fill_tables(MetricDp& dp, const TrellisCode& t, DeltaFn&& delta_m) {
    const size_t c = dp.cell;
    std::fill(dp.fwd.begin(), dp.fwd.end(), 0);
    std::fill(dp.bwd.begin(), dp.bwd.end(), 0);
    dp.fwd[dp.idx(0, 0, 0)] = 1;
    for (int sec = 0; sec < dp.n_sections; ++sec) {
        uint64_t* cur = dp.fwd.data() + static_cast<size_t>(sec) * c;
        uint64_t* nxt = dp.fwd.data() + static_cast<size_t>(sec + 1) * c;
        for (int s = 0; s < dp.n_states; ++s)
            for (int u = 0; u < t.num_inputs(); ++u) {
                const Transition& tr = t.transition(s, u);
                const int dw = dp.track_iw ? __builtin_popcount(tr.in) : 0;
                const int dm = delta_m(sec, s, u);
                for (int w = 0; w + dw <= dp.w_cap; ++w)
                    for (int m = 0; m + dm <= dp.m_cap; ++m) {
                        uint64_t v = cur[dp.idx(s, w, m)];
                        if (v) nxt[dp.idx(tr.next, w + dw, m + dm)] += v;
                    }
            }
    }
    uint64_t* last = dp.bwd.data() + static_cast<size_t>(dp.n_sections) * c;
    last[dp.idx(0, 0, 0)] = 1;
    for (int sec = dp.n_sections - 1; sec >= 0; --sec) {
        uint64_t* cur = dp.bwd.data() + static_cast<size_t>(sec) * c;
        uint64_t* nxt = dp.bwd.data() + static_cast<size_t>(sec + 1) * c;
        for (int s = 0; s < dp.n_states; ++s)
            for (int u = 0; u < t.num_inputs(); ++u) {
                const Transition& tr = t.transition(s, u);
                const int dw = dp.track_iw ? __builtin_popcount(tr.in) : 0;
                const int dm = delta_m(sec, s, u);
                for (int w = 0; w + dw <= dp.w_cap; ++w)
                    for (int m = 0; m + dm <= dp.m_cap; ++m) {
                        uint64_t v = nxt[dp.idx(tr.next, w, m)];
                        if (v) cur[dp.idx(s, w + dw, m + dm)] += v;
                    }
            }
    }
}

// weight table of full codewords when section `sec` uses delta_override
template <typename DeltaFn>
void join_at(const MetricDp& dp, const TrellisCode& t, int sec, DeltaFn&& delta_override,
             std::vector<uint64_t>& out) {
    std::fill(out.begin(), out.end(), 0);
    const uint64_t* f = dp.fwd.data() + static_cast<size_t>(sec) * dp.cell;
    const uint64_t* b = dp.bwd.data() + static_cast<size_t>(sec + 1) * dp.cell;
    const int W = dp.w_cap, M = dp.m_cap;
    for (int s = 0; s < dp.n_states; ++s)
        for (int u = 0; u < t.num_inputs(); ++u) {
            const Transition& tr = t.transition(s, u);
            const int dw = dp.track_iw ? __builtin_popcount(tr.in) : 0;
            const int dm = delta_override(s, u);
            for (int w1 = 0; w1 <= W; ++w1)
                for (int m1 = 0; m1 <= M; ++m1) {
                    uint64_t fv = f[dp.idx(s, w1, m1)];
                    if (!fv) continue;
                    for (int w2 = 0; w1 + dw + w2 <= W; ++w2)
                        for (int m2 = 0; m1 + dm + m2 <= M; ++m2) {
                            uint64_t bv = b[dp.idx(tr.next, w2, m2)];
                            if (bv)
                                out[static_cast<size_t>(w1 + dw + w2) * (M + 1) + m1 + dm + m2] +=
                                    fv * bv;
                        }
                }
        }
}

ParityMetric metric_from_table(const std::vector<uint64_t>& tab, int w_max, int m_cap) {
    ParityMetric metric;
    for (int w = 2; w <= w_max; ++w) {
        int d = -1;
        for (int m = 0; m <= m_cap; ++m)
            if (tab[static_cast<size_t>(w) * (m_cap + 1) + m]) {
                d = m;
                break;
            }
        if (d < 0)
            throw CapExceededError("parity metric: no weight-" + std::to_string(w) +
                                   " codeword within m_cap " + std::to_string(m_cap));
        metric.dn.emplace_back(d, BigInt(tab[static_cast<size_t>(w) * (m_cap + 1) + d]));
    }
    return metric;
}

OwefMetric owef_from_table(const std::vector<uint64_t>& tab, int depth, int j_cap) {
    // tab indexed by j only (w folded); the all-zero path sits at j = 0
    OwefMetric metric;
    if (tab[0] > 1) {
        metric.d_free = 0;  // some nonzero codeword vanished entirely
        metric.a.assign(static_cast<size_t>(depth) + 1, 0);
        metric.a[0] = BigInt(tab[0] - 1);
        return metric;
    }
    int d = -1;
    for (int j = 1; j <= j_cap; ++j)
        if (tab[static_cast<size_t>(j)]) {
            d = j;
            break;
        }
    if (d < 0) throw CapExceededError("OWEF metric: free distance beyond j_cap");
    metric.d_free = d;
    for (int k = 0; k <= depth; ++k) {
        int j = d + k;
        metric.a.push_back(j <= j_cap ? BigInt(tab[static_cast<size_t>(j)]) : BigInt(0));
    }
    return metric;
}

}  // namespace

ParityMetric parity_metric(const TrellisCode& inner, int n_interleaver,
                           const PuncturePattern& p_i_p, int w_max, int m_cap) {
    const int n_par = inner.out_per_step() - 1;
    if (p_i_p.length() != n_interleaver * n_par) throw ConfigError("P_i^p length mismatch");
    MetricDp dp{inner.num_states(), n_interleaver, w_max, m_cap, true, 0, {}, {}};
    dp.cell = static_cast<size_t>(dp.n_states) * (w_max + 1) * (m_cap + 1);
    dp.fwd.assign(static_cast<size_t>(dp.n_sections + 1) * dp.cell, 0);
    dp.bwd.assign(dp.fwd.size(), 0);
    auto delta = [&](int sec, int s, int u) {
        const Transition& tr = inner.transition(s, u);
        int dm = 0;
        for (int k = 1; k < inner.out_per_step(); ++k)
            if ((tr.out >> k) & 1u && !p_i_p.deletes(sec * n_par + (k - 1))) ++dm;
        return dm;
    };
    fill_tables(dp, inner, delta);
    std::vector<uint64_t> tab(static_cast<size_t>(w_max + 1) * (m_cap + 1), 0);
    const uint64_t* f = dp.fwd.data() + static_cast<size_t>(dp.n_sections) * dp.cell;
    for (int w = 0; w <= w_max; ++w)
        for (int m = 0; m <= m_cap; ++m)
            tab[static_cast<size_t>(w) * (m_cap + 1) + m] = f[dp.idx(0, w, m)];
    return metric_from_table(tab, w_max, m_cap);
}

ParityLadderResult optimize_parity_ladder(const TrellisCode& inner, int n_interleaver,
                                          int w_max, int steps, int m_cap) {
    const int n_par = inner.out_per_step() - 1;
    const int n_pos = n_interleaver * n_par;
    if (steps < 0 || steps > n_pos)
        throw ConfigError("parity ladder steps must lie in [0," + std::to_string(n_pos) + "]");

    ParityLadderResult res;
    res.ladder.base_length = n_pos;
    BitVec deleted(static_cast<size_t>(n_pos), 0);

    MetricDp dp{inner.num_states(), n_interleaver, w_max, m_cap, true, 0, {}, {}};
    dp.cell = static_cast<size_t>(dp.n_states) * (w_max + 1) * (m_cap + 1);
    dp.fwd.assign(static_cast<size_t>(dp.n_sections + 1) * dp.cell, 0);
    dp.bwd.assign(dp.fwd.size(), 0);

    auto base_delta = [&](int sec, int s, int u) {
        const Transition& tr = inner.transition(s, u);
        int dm = 0;
        for (int k = 1; k < inner.out_per_step(); ++k)
            if ((tr.out >> k) & 1u && !deleted[static_cast<size_t>(sec * n_par + k - 1)]) ++dm;
        return dm;
    };

    std::vector<uint64_t> tab(static_cast<size_t>(w_max + 1) * (m_cap + 1), 0);
    for (int step = 0; step < steps; ++step) {
        fill_tables(dp, inner, base_delta);
        int best_pos = -1;
        ParityMetric best;
        for (int pos = 0; pos < n_pos; ++pos) {
            if (deleted[static_cast<size_t>(pos)]) continue;
            const int sec = pos / n_par;
            auto delta_cand = [&](int s, int u) {
                const Transition& tr = inner.transition(s, u);
                int dm = 0;
                for (int k = 1; k < inner.out_per_step(); ++k) {
                    int p = sec * n_par + k - 1;
                    if ((tr.out >> k) & 1u && p != pos && !deleted[static_cast<size_t>(p)]) ++dm;
                }
                return dm;
            };
            join_at(dp, inner, sec, delta_cand, tab);
            ParityMetric metric;
            try {
                metric = metric_from_table(tab, w_max, m_cap);
            } catch (const CapExceededError& e) {
                res.aborted = true;
                res.diagnostic = std::string(e.what()) + " at step " + std::to_string(step);
                return res;
            }
            if (best_pos < 0 || compare_metrics(metric, best) > 0) {
                best_pos = pos;
                best = std::move(metric);
            }
        }
        deleted[static_cast<size_t>(best_pos)] = 1;
        res.ladder.ordered_positions.push_back(best_pos);
        res.trajectory.push_back(ParityStep{step + 1, best_pos, best});
    }
    return res;
}

OwefMetric owef_metric(const TrellisCode& outer, const PuncturePattern& p_o,
                       const PuncturePattern& p_prime, int sections, int depth, int j_cap) {
    const int n_out = outer.out_per_step();
    if (p_o.length() != sections * n_out || p_prime.length() != sections * n_out)
        throw ConfigError("pattern length mismatch");
    const int free_sections = sections - outer.termination_sections();
    MetricDp dp{outer.num_states(), free_sections, 0, j_cap, false, 0, {}, {}};
    dp.cell = static_cast<size_t>(dp.n_states) * (j_cap + 1);
    dp.fwd.assign(static_cast<size_t>(free_sections + 1) * dp.cell, 0);
    dp.bwd.assign(dp.fwd.size(), 0);
    auto delta = [&](int sec, int s, int u) {
        const Transition& tr = outer.transition(s, u);
        int dj = 0;
        for (int k = 0; k < n_out; ++k) {
            int q = sec * n_out + k;
            if ((tr.out >> k) & 1u && !p_o.deletes(q) && !p_prime.deletes(q)) ++dj;
        }
        return dj;
    };
    fill_tables(dp, outer, delta);
    std::vector<uint64_t> tab(static_cast<size_t>(j_cap) + 1, 0);
    const uint64_t* f = dp.fwd.data() + static_cast<size_t>(free_sections) * dp.cell;
    for (int j = 0; j <= j_cap; ++j) tab[static_cast<size_t>(j)] = f[dp.idx(0, 0, j)];
    return owef_from_table(tab, depth, j_cap);
}

bool outer_invertible(const TrellisCode& outer, const PuncturePattern& p_o,
                      const PuncturePattern& p_prime, int sections) {
    const int n_out = outer.out_per_step();
    const int block = sections * n_out;
    const int free_bits = sections - outer.termination_sections();
    const int words = (block + 63) / 64;
    // rows: codewords of the unit information words, masked to survivors
    std::vector<uint64_t> rows(static_cast<size_t>(free_bits) * words, 0);
    BitVec u(static_cast<size_t>(free_bits), 0);
    for (int i = 0; i < free_bits; ++i) {
        u[static_cast<size_t>(i)] = 1;
        Codeword cw = encode(outer, u, true);
        u[static_cast<size_t>(i)] = 0;
        for (int q = 0; q < block; ++q)
            if (cw.bits[static_cast<size_t>(q)] && !p_o.deletes(q) && !p_prime.deletes(q))
                rows[static_cast<size_t>(i) * words + q / 64] |= 1ull << (q % 64);
    }
    // GF(2) elimination
    int rank = 0;
    std::vector<int> pivot_row;
    for (int col = 0; col < block && rank < free_bits; ++col) {
        int w = col / 64;
        uint64_t bit = 1ull << (col % 64);
        int found = -1;
        for (int r = rank; r < free_bits; ++r)
            if (rows[static_cast<size_t>(r) * words + w] & bit) {
                found = r;
                break;
            }
        if (found < 0) continue;
        for (int k = 0; k < words; ++k)
            std::swap(rows[static_cast<size_t>(rank) * words + k],
                      rows[static_cast<size_t>(found) * words + k]);
        for (int r = 0; r < free_bits; ++r) {
            if (r == rank) continue;
            if (rows[static_cast<size_t>(r) * words + w] & bit)
                for (int k = 0; k < words; ++k)
                    rows[static_cast<size_t>(r) * words + k] ^=
                        rows[static_cast<size_t>(rank) * words + k];
        }
        ++rank;
    }
    return rank == free_bits;
}

SystematicLadderResult optimize_systematic_ladder(const TrellisCode& outer,
                                                  const PuncturePattern& p_o, int sections,
                                                  int depth, int steps, bool restrict_to_parity,
                                                  int j_cap) {
    const int n_out = outer.out_per_step();
    const int block = sections * n_out;
    if (p_o.length() != block) throw ConfigError("P_o length mismatch");
    const int free_sections = sections - outer.termination_sections();
    const int k_info = free_sections;
    const int max_steps = p_o.num_kept() - k_info;  // outer rate capped at 1
    if (steps > max_steps)
        throw ConfigError("systematic ladder steps " + std::to_string(steps) +
                          " would push the outer rate beyond 1 (max " +
                          std::to_string(max_steps) + ")");

    SystematicLadderResult res;
    res.ladder.base_length = block;
    BitVec deleted(static_cast<size_t>(block), 0);

    MetricDp dp{outer.num_states(), free_sections, 0, j_cap, false, 0, {}, {}};
    dp.cell = static_cast<size_t>(dp.n_states) * (j_cap + 1);
    dp.fwd.assign(static_cast<size_t>(free_sections + 1) * dp.cell, 0);
    dp.bwd.assign(dp.fwd.size(), 0);
    auto base_delta = [&](int sec, int s, int u) {
        const Transition& tr = outer.transition(s, u);
        int dj = 0;
        for (int k = 0; k < n_out; ++k) {
            int q = sec * n_out + k;
            if ((tr.out >> k) & 1u && !p_o.deletes(q) && !deleted[static_cast<size_t>(q)]) ++dj;
        }
        return dj;
    };

    auto current_pattern = [&]() {
        std::vector<int> d;
        for (int q = 0; q < block; ++q)
            if (deleted[static_cast<size_t>(q)]) d.push_back(q);
        return PuncturePattern::from_list(block, std::move(d));
    };

    std::vector<uint64_t> tab(static_cast<size_t>(j_cap) + 1, 0);
    std::vector<uint64_t> joined(static_cast<size_t>(dp.n_states) /*unused shape*/);
    for (int step = 0; step < steps; ++step) {
        fill_tables(dp, outer, base_delta);
        // base metric doubles as the value of candidates in forced sections,
        // whose outputs are off every boundary-closed path
        const uint64_t* f = dp.fwd.data() + static_cast<size_t>(free_sections) * dp.cell;
        for (int j = 0; j <= j_cap; ++j) tab[static_cast<size_t>(j)] = f[dp.idx(0, 0, j)];
        OwefMetric base_metric;
        try {
            base_metric = owef_from_table(tab, depth, j_cap);
        } catch (const CapExceededError& e) {
            res.stopped_early = true;
            res.diagnostic = e.what();
            return res;
        }

        std::vector<std::pair<OwefMetric, int>> candidates;
        for (int pos = 0; pos < block; ++pos) {
            if (p_o.deletes(pos) || deleted[static_cast<size_t>(pos)]) continue;
            if (restrict_to_parity && pos % n_out == 0) continue;
            const int sec = pos / n_out;
            OwefMetric metric;
            if (sec >= free_sections) {
                metric = base_metric;
            } else {
                std::vector<uint64_t> jt(static_cast<size_t>(j_cap + 1) * 1, 0);
                // join with the candidate position removed from this section
                std::fill(tab.begin(), tab.end(), 0);
                auto delta_cand = [&](int s, int u) {
                    const Transition& tr = outer.transition(s, u);
                    int dj = 0;
                    for (int k = 0; k < n_out; ++k) {
                        int q = sec * n_out + k;
                        if ((tr.out >> k) & 1u && q != pos && !p_o.deletes(q) &&
                            !deleted[static_cast<size_t>(q)])
                            ++dj;
                    }
                    return dj;
                };
                const uint64_t* fs = dp.fwd.data() + static_cast<size_t>(sec) * dp.cell;
                const uint64_t* bs = dp.bwd.data() + static_cast<size_t>(sec + 1) * dp.cell;
                for (int s = 0; s < dp.n_states; ++s)
                    for (int u = 0; u < outer.num_inputs(); ++u) {
                        const Transition& tr = outer.transition(s, u);
                        int dj = delta_cand(s, u);
                        for (int j1 = 0; j1 <= j_cap; ++j1) {
                            uint64_t fv = fs[dp.idx(s, 0, j1)];
                            if (!fv) continue;
                            for (int j2 = 0; j1 + dj + j2 <= j_cap; ++j2) {
                                uint64_t bv = bs[dp.idx(tr.next, 0, j2)];
                                if (bv) tab[static_cast<size_t>(j1 + dj + j2)] += fv * bv;
                            }
                        }
                    }
                try {
                    metric = owef_from_table(tab, depth, j_cap);
                } catch (const CapExceededError& e) {
                    res.stopped_early = true;
                    res.diagnostic = e.what();
                    return res;
                }
            }
            if (metric.d_free == 0) continue;  // quick invertibility reject
            candidates.emplace_back(std::move(metric), pos);
        }
        std::stable_sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
            int c = compare_metrics(a.first, b.first);
            if (c != 0) return c > 0;
            return a.second < b.second;
        });
        int chosen = -1;
        OwefMetric chosen_metric;
        for (auto& [metric, pos] : candidates) {
            deleted[static_cast<size_t>(pos)] = 1;
            bool ok = outer_invertible(outer, p_o, current_pattern(), sections);
            deleted[static_cast<size_t>(pos)] = 0;
            if (ok) {
                chosen = pos;
                chosen_metric = metric;
                break;
            }
        }
        if (chosen < 0) {
            res.stopped_early = true;
            res.diagnostic = "no invertible candidate remains at step " + std::to_string(step);
            return res;
        }
        deleted[static_cast<size_t>(chosen)] = 1;
        res.ladder.ordered_positions.push_back(chosen);
        res.trajectory.push_back(OwefStep{step + 1, chosen, chosen_metric});
    }
    return res;
}

}  // namespace sccc
