#include "sccc/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace sccc {

std::optional<int> SCCCSpectrum::h_min() const {
    std::optional<int> best;
    for (const auto& [key, c] : coeff)
        if (key.first > 0 && c > 0 && (!best || key.second < *best)) best = key.second;
    return best;
}

BigRat SCCCSpectrum::multiplicity_at(int h) const {
    BigRat total = 0;
    for (const auto& [key, c] : coeff)
        if (key.first > 0 && key.second == h) total += c;
    return total;
}

SCCCSpectrum compose_uniform(const JointWeightTable& outer, const JointWeightTable& inner,
                             int n_interleaver, ComposeMode mode) {
    if (outer.entries.empty() || inner.entries.empty())
        throw ConfigError("cannot compose empty enumerators");
    if (inner.free_sections != n_interleaver)
        throw ConfigError("inner enumerator frame does not match the interleaver length");

    SCCCSpectrum spec;
    spec.n_interleaver = n_interleaver;
    spec.mode = mode;
    spec.w_cap = outer.caps.iw_cap;
    spec.h_cap = outer.caps.wb_cap + inner.caps.wa_cap;
    spec.truncated = outer.any_truncation() || inner.any_truncation() ||
                     inner.caps.iw_cap < outer.caps.wa_cap;

    // inner entries grouped by input weight l
    const int l_max = std::min(outer.caps.wa_cap, inner.caps.iw_cap);

    if (mode == ComposeMode::ExactBinomial) {
        // A[w][j+m] = sum_l A^{o''}_{w,l,j} A^{i'}_{l,m} / C(N,l)
        std::vector<std::map<int, BigInt>> inner_by_l(static_cast<size_t>(l_max) + 1);
        for (const auto& e : inner.entries)
            if (e.iw <= l_max) inner_by_l[static_cast<size_t>(e.iw)][e.wa] += e.count;
        std::vector<BigInt> choose(static_cast<size_t>(l_max) + 1);
        for (int l = 0; l <= l_max; ++l) choose[static_cast<size_t>(l)] = binomial(n_interleaver, l);

        std::map<std::tuple<int, int, int>, BigInt> outer_wlj;
        for (const auto& e : outer.entries)
            if (e.wa <= l_max) outer_wlj[{e.iw, e.wa, e.wb}] += e.count;

        for (const auto& [key, oc] : outer_wlj) {
            auto [w, l, j] = key;
            if (choose[static_cast<size_t>(l)] == 0) continue;
            for (const auto& [m, ic] : inner_by_l[static_cast<size_t>(l)]) {
                BigRat term(oc * ic, choose[static_cast<size_t>(l)]);
                spec.coeff[{w, j + m}] += term;
            }
        }
    } else {
        // N-power form: each tail-active path is charged one extra event, so
        // every nonzero path carries n >= 1 as in the event-combination view.
        const int p = 1;
        std::vector<std::vector<std::tuple<int, int, BigInt>>> inner_by_l(
            static_cast<size_t>(l_max) + 1);  // (m, n_eff, count)
        for (const auto& e : inner.entries) {
            if (e.iw > l_max || e.iw == 0) continue;
            int n_eff = std::max(e.n + (e.tail ? 1 : 0), 1);
            inner_by_l[static_cast<size_t>(e.iw)].emplace_back(e.wa, n_eff, e.count);
        }
        BigInt n_big(n_interleaver);
        for (const auto& eo : outer.entries) {
            if (eo.wa > l_max || eo.iw == 0) continue;
            const int l = eo.wa;
            int no_eff = std::max(eo.n + (eo.tail ? 1 : 0), 1);
            BigInt l_pow_l = 1, l_fact = 1;
            for (int i = 0; i < l; ++i) l_pow_l *= l;
            for (int i = 2; i <= l; ++i) l_fact *= i;
            for (const auto& [m, ni_eff, ic] : inner_by_l[static_cast<size_t>(l)]) {
                const int expo = no_eff + ni_eff - l;
                BigInt fact = 1;
                for (int i = 2; i <= no_eff; ++i) fact *= i;
                for (int i = 2; i <= ni_eff; ++i) fact *= i;
                BigInt p_pow = 1;
                for (int i = 0; i < no_eff + ni_eff; ++i) p_pow *= p;
                BigRat term;
                if (expo >= 0) {
                    BigInt num = l_pow_l * l_fact * eo.count * ic;
                    for (int i = 0; i < expo; ++i) num *= n_big;
                    term = BigRat(num, fact * p_pow);
                } else {
                    BigInt den = fact * p_pow;
                    for (int i = 0; i < -expo; ++i) den *= n_big;
                    term = BigRat(l_pow_l * l_fact * eo.count * ic, den);
                }
                spec.coeff[{eo.iw, eo.wb + m}] += term;
            }
        }
    }
    return spec;
}

namespace {

double kernel_value(BoundKernel kernel, double x) {
    switch (kernel) {
        case BoundKernel::Exponential:
            return std::exp(-x);
        case BoundKernel::Erfc:
            return 0.5 * std::erfc(std::sqrt(x));
    }
    return 0.0;
}

BoundCurve evaluate_bound(const SCCCSpectrum& spec, const BigRat& r_sccc,
                          const std::vector<double>& ebno_db, BoundKernel kernel,
                          CurveKind kind, int k_info) {
    BoundCurve curve;
    curve.kind = kind;
    curve.kernel = kernel;
    curve.points.reserve(ebno_db.size());
    const double rate = to_double(r_sccc);
    // fixed iteration order (map is ordered) + compensated summation keeps the
    // result identical regardless of evaluation parallelism
    for (double db : ebno_db) {
        const double ebno = std::pow(10.0, db / 10.0);
        long double sum = 0.0L, comp = 0.0L;
        for (const auto& [key, c] : spec.coeff) {
            const auto [w, h] = key;
            if (w == 0 || c == 0) continue;
            long double term = static_cast<long double>(to_double(c)) *
                               kernel_value(kernel, h * rate * ebno);
            if (kind == CurveKind::Bit)
                term *= static_cast<long double>(w) / static_cast<long double>(k_info);
            long double y = term - comp;
            long double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        curve.points.emplace_back(db, static_cast<double>(sum));
    }
    return curve;
}

}  // namespace

BoundCurve union_bound_bit(const SCCCSpectrum& spec, const BigRat& r_sccc, int k_info,
                           const std::vector<double>& ebno_db, BoundKernel kernel) {
    if (spec.coeff.empty()) throw ConfigError("empty spectrum");
    return evaluate_bound(spec, r_sccc, ebno_db, kernel, CurveKind::Bit, k_info);
}

BoundCurve union_bound_frame(const SCCCSpectrum& spec, const BigRat& r_sccc,
                             const std::vector<double>& ebno_db, BoundKernel kernel) {
    if (spec.coeff.empty()) throw ConfigError("empty spectrum");
    return evaluate_bound(spec, r_sccc, ebno_db, kernel, CurveKind::Frame, 1);
}

std::vector<std::pair<int, BigRat>> cumulative_spectrum(const SCCCSpectrum& spec) {
    if (spec.coeff.empty()) throw ConfigError("empty spectrum");
    std::map<int, BigRat> by_h;
    for (const auto& [key, c] : spec.coeff)
        if (key.first > 0) by_h[key.second] += c;
    std::vector<std::pair<int, BigRat>> cum;
    BigRat run = 0;
    int last = 0;
    for (const auto& [h, c] : by_h) {
        for (int d = last; d < h; ++d) cum.emplace_back(d, run);
        run += c;
        cum.emplace_back(h, run);
        last = h + 1;
    }
    return cum;
}

ExponentSupport exponent_support(const JointWeightTable& outer, const JointWeightTable& inner) {
    ExponentSupport sup;
    const int l_max = std::min(outer.caps.wa_cap, inner.caps.iw_cap);
    // complete-event entries only: tail-free with at least one closed event
    std::vector<std::vector<std::pair<int, int>>> inner_by_l(static_cast<size_t>(l_max) + 1);
    for (const auto& e : inner.entries)
        if (!e.tail && e.n >= 1 && e.iw <= l_max)
            inner_by_l[static_cast<size_t>(e.iw)].emplace_back(e.wa, e.n);
    for (const auto& eo : outer.entries) {
        if (eo.tail || eo.n < 1 || eo.wa > l_max) continue;
        for (const auto& [m, ni] : inner_by_l[static_cast<size_t>(eo.wa)]) {
            const int h = eo.wb + m;
            const int alpha = eo.n + ni - eo.wa - 1;
            auto [it, fresh] = sup.alpha_of_h.emplace(h, alpha);
            if (!fresh && alpha > it->second) it->second = alpha;
            if (!sup.alpha_max || alpha > *sup.alpha_max) sup.alpha_max = alpha;
        }
    }
    return sup;
}

AsymptoticReport asymptotic_report(const DistanceSummary& summary,
                                   const ExponentSupport* support) {
    AsymptoticReport rep;
    rep.d_f_o_prime = summary.d_f_o_prime;
    rep.d_f_o_prime_even = summary.d_f_o_prime % 2 == 0;
    rep.alpha_m = -((summary.d_f_o_prime + 1) / 2);
    if (support) {
        rep.alpha_m_observed = support->alpha_max;
        rep.alpha_of_h = support->alpha_of_h;
    }

    const int d_oo = summary.d_odprime_at_dfoprime;
    auto need_deff = [&]() -> int {
        if (!summary.d_f_eff_inner)
            throw CapExceededError("d_f,eff of the inner code not witnessed; raise caps");
        return *summary.d_f_eff_inner;
    };

    if (rep.d_f_o_prime_even) {
        rep.h_alpha_m = summary.d_f_o_prime * need_deff() / 2 + d_oo;
        rep.h_alpha_m_lower = summary.d_f_o_prime * need_deff() / 2 + summary.d_f_o_dprime;
        rep.branch = "even:l=d_f^{o'}";
    } else if (summary.d_f_o_prime == 3) {
        if (!summary.h_m3) throw CapExceededError("h_m^(3) not witnessed; raise caps");
        const int deff = need_deff();
        int best = *summary.h_m3 + d_oo;
        rep.branch = "odd:l=3";
        auto it4 = summary.d_odprime_at.find(4);
        if (it4 != summary.d_odprime_at.end()) {
            int cand = 2 * deff + it4->second;
            if (cand < best) {
                best = cand;
                rep.branch = "odd:l=4";
            }
        }
        int cand6 = 3 * deff + 2 * d_oo;
        if (cand6 < best) {
            best = cand6;
            rep.branch = "odd:l=6";
        }
        rep.h_alpha_m = best;
        rep.h_alpha_m_lower = *summary.h_m3 + summary.d_f_o_dprime;
    } else {
        if (!summary.h_m3) throw CapExceededError("h_m^(3) not witnessed; raise caps");
        const int deff = need_deff();
        rep.h_alpha_m = (summary.d_f_o_prime - 3) * deff / 2 + *summary.h_m3 + d_oo;
        rep.h_alpha_m_lower =
            (summary.d_f_o_prime - 3) * deff / 2 + *summary.h_m3 + summary.d_f_o_dprime;
        rep.branch = "odd:l=d_f^{o'}";
    }
    return rep;
}

}  // namespace sccc
