#include "sccc/io.hpp"

#include <cstdio>
#include <map>
#include <ostream>

namespace sccc {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_rat(const BigRat& v) { return format_double(to_double(v)); }

void write_enumerator_csv(std::ostream& os, const JointWeightTable& table, bool outer_layout) {
    // the tail flag is folded into the listed event count's key space
    if (outer_layout) {
        os << "w,l,j,n,count\n";
        std::map<std::tuple<int, int, int, int>, BigInt> rows;
        for (const auto& e : table.entries) rows[{e.iw, e.wa, e.wb, e.n}] += e.count;
        for (const auto& [k, c] : rows) {
            auto [w, l, j, n] = k;
            os << w << ',' << l << ',' << j << ',' << n << ',' << c.str() << '\n';
        }
    } else {
        os << "l,m,n,count\n";
        std::map<std::tuple<int, int, int>, BigInt> rows;
        for (const auto& e : table.entries) rows[{e.iw, e.wa, e.n}] += e.count;
        for (const auto& [k, c] : rows) {
            auto [l, m, n] = k;
            os << l << ',' << m << ',' << n << ',' << c.str() << '\n';
        }
    }
}

void write_spectrum_csv(std::ostream& os, const SCCCSpectrum& spec) {
    os << "w,h,coefficient\n";
    for (const auto& [key, c] : spec.coeff) {
        if (c == 0) continue;
        os << key.first << ',' << key.second << ',' << format_rat(c) << '\n';
    }
}

void write_curve_csv(std::ostream& os, const BoundCurve& curve) {
    os << "ebno_db,value\n";
    for (const auto& [db, v] : curve.points)
        os << format_double(db) << ',' << format_double(v) << '\n';
}

void write_cumulative_csv(std::ostream& os, const std::vector<std::pair<int, BigRat>>& cum) {
    os << "d,cumulative\n";
    for (const auto& [d, v] : cum) os << d << ',' << format_rat(v) << '\n';
}

void write_sim_report_csv(std::ostream& os, const SimReport& report) {
    os << "ebno_db,frames,bit_errors,frame_errors,ber,fer,ci_low,ci_high,avg_iterations\n";
    for (const auto& p : report.points) {
        os << format_double(p.ebno_db) << ',' << p.frames << ',' << p.bit_errors << ','
           << p.frame_errors << ',' << format_double(p.ber) << ',' << format_double(p.fer) << ','
           << format_double(p.ci_low) << ',' << format_double(p.ci_high) << ','
           << format_double(p.avg_iterations) << '\n';
    }
}

nlohmann::ordered_json summary_to_json(const DistanceSummary& s) {
    nlohmann::ordered_json j;
    j["d_f_o_prime"] = s.d_f_o_prime;
    j["d_f_o_dprime"] = s.d_f_o_dprime;
    j["d_odprime_at_dfoprime"] = s.d_odprime_at_dfoprime;
    nlohmann::ordered_json at;
    for (const auto& [l, v] : s.d_odprime_at) at[std::to_string(l)] = v;
    j["d_odprime_at"] = at;
    if (s.d_f_eff_inner) j["d_f_eff_inner"] = *s.d_f_eff_inner;
    if (s.h_m3) j["h_m3"] = *s.h_m3;
    nlohmann::ordered_json dw;
    for (const auto& [w, dn] : s.d_w) {
        dw[std::to_string(w)] = {{"d", dn.first}, {"multiplicity", dn.second.str()}};
    }
    j["d_w"] = dw;
    nlohmann::ordered_json ad;
    for (const auto& [d, c] : s.a_d) ad[std::to_string(d)] = c.str();
    j["a_d"] = ad;
    j["invertible_inner"] = s.invertible_inner;
    j["complete"] = s.complete;
    return j;
}

nlohmann::ordered_json asymptotic_to_json(const AsymptoticReport& rep, const SCCCSpectrum& spec) {
    nlohmann::ordered_json j;
    j["d_f_o_prime"] = rep.d_f_o_prime;
    j["d_f_o_prime_parity"] = rep.d_f_o_prime_even ? "even" : "odd";
    j["alpha_m"] = rep.alpha_m;
    if (rep.alpha_m_observed) j["alpha_m_observed"] = *rep.alpha_m_observed;
    j["h_alpha_m"] = rep.h_alpha_m;
    j["h_alpha_m_lower_bound"] = rep.h_alpha_m_lower;
    j["branch"] = rep.branch;
    nlohmann::ordered_json ah;
    for (const auto& [h, a] : rep.alpha_of_h) ah[std::to_string(h)] = a;
    j["alpha_of_h"] = ah;
    auto hm = spec.h_min();
    if (hm) {
        j["h_m"] = *hm;
        j["n_h_m"] = format_rat(spec.multiplicity_at(*hm));
    }
    return j;
}

nlohmann::ordered_json parity_trajectory_json(const ParityLadderResult& res) {
    nlohmann::ordered_json j;
    j["kind"] = "parity";
    j["aborted"] = res.aborted;
    if (!res.diagnostic.empty()) j["diagnostic"] = res.diagnostic;
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const auto& st : res.trajectory) {
        nlohmann::ordered_json metric = nlohmann::ordered_json::array();
        int w = 2;
        for (const auto& [d, nw] : st.metric.dn) {
            metric.push_back({{"w", w}, {"d", d}, {"multiplicity", nw.str()}});
            ++w;
        }
        steps.push_back({{"step", st.step}, {"position", st.position}, {"metric", metric}});
    }
    j["steps"] = steps;
    return j;
}

nlohmann::ordered_json systematic_trajectory_json(const SystematicLadderResult& res) {
    nlohmann::ordered_json j;
    j["kind"] = "systematic";
    j["stopped_early"] = res.stopped_early;
    if (!res.diagnostic.empty()) j["diagnostic"] = res.diagnostic;
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const auto& st : res.trajectory) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (const auto& c : st.metric.a) a.push_back(c.str());
        steps.push_back({{"step", st.step},
                         {"position", st.position},
                         {"d_free", st.metric.d_free},
                         {"a", a}});
    }
    j["steps"] = steps;
    return j;
}

}  // namespace sccc
