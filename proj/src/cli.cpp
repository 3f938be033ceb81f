#include "sccc/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "sccc/bounds.hpp"
#include "sccc/design.hpp"
#include "sccc/io.hpp"
#include "sccc/optimizer.hpp"

namespace sccc {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

BigRat parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return BigRat(BigInt(text));
        return BigRat(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw ConfigError("cannot parse rational '" + text + "'");
    }
}

std::string rat_str(const BigRat& r) {
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

struct CliOverrides {
    std::optional<std::string> out_dir;
    std::optional<uint64_t> seed;
    std::optional<std::string> kernel;
    std::optional<std::string> caps;
    std::optional<std::string> grid;
    std::optional<int> iterations;
    bool oracle = false;
    bool restrict_to_parity = false;
};

struct JobConfig {
    fs::path config_dir;
    ordered_json resolved;

    std::string outer_gens, inner_gens;
    int sections = 0;
    uint64_t interleaver_seed = 1;
    json p_o_spec, p_prime_spec, p_i_p_spec;
    std::optional<BigRat> target_rate;
    EnumCaps caps;
    int m_cap = 40;
    BoundKernel kernel = BoundKernel::Exponential;
    ComposeMode compose_mode = ComposeMode::ExactBinomial;
    std::vector<double> grid;
    // optimizer
    int opt_w_max = 4, opt_depth = 6, opt_m_cap = 24, opt_j_cap = 18;
    int parity_steps = 0, systematic_steps = 0;
    bool restrict_to_parity = false;
    // simulation
    uint64_t sim_seed = 7;
    DecoderConfig dec;
    SimStop stop;
    int threads = 0, batch = 256;
    bool oracle = false;
    // family
    std::vector<std::pair<BigRat, BigRat>> family;  // (rate, rho_p)
    fs::path out_dir = "out";
};

PuncturePattern pattern_from_spec(const json& spec, int length, const fs::path& base,
                                  const std::string& what) {
    if (spec.is_null()) return PuncturePattern::none(length);
    if (!spec.is_object()) throw ConfigError(what + ": pattern spec must be an object");
    if (spec.contains("file")) {
        fs::path p = fs::path(spec["file"].get<std::string>());
        if (p.is_relative()) p = base / p;
        if (!fs::exists(p)) throw ConfigError(what + ": pattern file not found: " + p.string());
        PunctureLadder ladder = load_ladder(p.string());
        int steps = spec.value("steps", ladder.max_steps());
        PuncturePattern pat = ladder.step(steps);
        int tile = spec.value("tile", 1);
        if (tile > 1) {
            std::vector<int> deleted;
            for (int k = 0; k < tile; ++k)
                for (int pos : pat.deleted()) deleted.push_back(pos + k * pat.length());
            pat = PuncturePattern::from_list(pat.length() * tile, std::move(deleted));
        }
        if (pat.length() != length)
            throw ConfigError(what + ": pattern covers " + std::to_string(pat.length()) +
                              " positions, expected " + std::to_string(length));
        return pat;
    }
    std::string kind = spec.value("kind", "none");
    if (kind == "none") return PuncturePattern::none(length);
    if (kind == "periodic") return PuncturePattern::periodic(length, spec.at("mask"));
    if (kind == "list") {
        std::vector<int> pos = spec.at("positions").get<std::vector<int>>();
        return PuncturePattern::from_list(length, std::move(pos));
    }
    throw ConfigError(what + ": unknown pattern kind '" + kind + "'");
}

std::vector<double> parse_grid(const json& g) {
    std::vector<double> out;
    if (g.is_array()) {
        for (const auto& v : g) out.push_back(v.get<double>());
        return out;
    }
    double start = g.at("start_db"), stop = g.at("stop_db"), step = g.value("step_db", 0.5);
    if (step <= 0) throw ConfigError("grid step must be positive");
    for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
    return out;
}

JobConfig load_config(const std::string& path, const CliOverrides& ov) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    json cfg;
    try {
        cfg = json::parse(is, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    JobConfig job;
    job.config_dir = fs::absolute(fs::path(path)).parent_path();
    try {
        job.outer_gens = cfg.at("outer").at("generators");
        job.inner_gens = cfg.at("inner").at("generators");
        job.sections = cfg.at("frame_sections");
        job.interleaver_seed = cfg.value("interleaver_seed", 1ull);
        job.p_o_spec = cfg.at("outer").value("pattern", json());
        job.p_prime_spec = cfg.value("p_prime", json());
        job.p_i_p_spec = cfg.value("p_i_p", json());
        if (cfg.contains("target_rate"))
            job.target_rate = parse_rational(cfg["target_rate"].get<std::string>());
        if (cfg.contains("caps")) {
            const auto& c = cfg["caps"];
            job.caps.iw_cap = c.value("w", 8);
            job.caps.wa_cap = c.value("l", 24);
            job.caps.wb_cap = c.value("j", 24);
            job.caps.n_cap = c.value("n", 6);
            job.m_cap = c.value("m", 40);
        }
        std::string kernel = cfg.value("kernel", "exponential");
        if (ov.kernel) kernel = *ov.kernel;
        if (kernel == "exponential" || kernel == "exp")
            job.kernel = BoundKernel::Exponential;
        else if (kernel == "erfc")
            job.kernel = BoundKernel::Erfc;
        else
            throw ConfigError("unknown kernel '" + kernel + "'");
        std::string mode = cfg.value("compose_mode", "exact");
        if (mode == "exact")
            job.compose_mode = ComposeMode::ExactBinomial;
        else if (mode == "paper-approx")
            job.compose_mode = ComposeMode::PaperApprox;
        else
            throw ConfigError("unknown compose_mode '" + mode + "'");
        if (cfg.contains("grid")) job.grid = parse_grid(cfg["grid"]);
        if (cfg.contains("optimize")) {
            const auto& o = cfg["optimize"];
            job.opt_w_max = o.value("w_max", 4);
            job.opt_depth = o.value("owef_depth", 6);
            job.opt_m_cap = o.value("m_cap", 24);
            job.opt_j_cap = o.value("j_cap", 18);
            job.parity_steps = o.value("parity_steps", 0);
            job.systematic_steps = o.value("systematic_steps", 0);
            job.restrict_to_parity = o.value("restrict_to_parity", false);
        }
        if (cfg.contains("sim")) {
            const auto& s = cfg["sim"];
            job.sim_seed = s.value("seed", 7ull);
            job.dec.iterations = s.value("iterations", 10);
            std::string siso = s.value("siso", "log-map");
            if (siso == "log-map")
                job.dec.siso = SisoKind::LogMap;
            else if (siso == "max-log-map")
                job.dec.siso = SisoKind::MaxLogMap;
            else
                throw ConfigError("unknown siso kind '" + siso + "'");
            job.dec.llr_clip = s.value("llr_clip", 30.0);
            job.dec.early_exit = s.value("early_exit", false);
            job.stop.min_frame_errors = s.value("min_frame_errors", 100l);
            job.stop.max_frames = s.value("max_frames", 100000l);
            job.threads = s.value("threads", 0);
            job.batch = s.value("batch", 256);
        }
        if (cfg.contains("family")) {
            for (const auto& row : cfg["family"]) {
                job.family.emplace_back(parse_rational(row.at("rate").get<std::string>()),
                                        parse_rational(row.at("rho_p").get<std::string>()));
            }
        }
        job.out_dir = cfg.value("out_dir", std::string("out"));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    if (job.out_dir.is_relative()) job.out_dir = job.config_dir / job.out_dir;

    if (ov.out_dir) job.out_dir = *ov.out_dir;
    if (ov.seed) job.sim_seed = *ov.seed;
    if (ov.iterations) job.dec.iterations = *ov.iterations;
    if (ov.oracle) job.oracle = true;
    if (ov.restrict_to_parity) job.restrict_to_parity = true;
    if (ov.caps) {
        int w, l, j, m, n;
        if (std::sscanf(ov.caps->c_str(), "%d,%d,%d,%d,%d", &w, &l, &j, &m, &n) != 5)
            throw ConfigError("--caps expects w,l,j,m,n");
        job.caps = EnumCaps{w, l, j, n};
        job.m_cap = m;
    }
    if (ov.grid) {
        double a, b, s;
        if (std::sscanf(ov.grid->c_str(), "%lf:%lf:%lf", &a, &b, &s) != 3)
            throw ConfigError("--grid expects start:stop:step in dB");
        job.grid.clear();
        for (double v = a; v <= b + 1e-9; v += s) job.grid.push_back(v);
    }
    if (job.grid.empty())
        for (double v = 0.0; v <= 10.0 + 1e-9; v += 0.5) job.grid.push_back(v);
    return job;
}

SCCCDesign build_design(const JobConfig& job) {
    GeneratorSpec outer_spec = GeneratorSpec::parse(job.outer_gens);
    const int block = job.sections * outer_spec.n_out();
    PuncturePattern p_o = pattern_from_spec(job.p_o_spec, block, job.config_dir, "outer.pattern");
    PuncturePattern p_prime =
        pattern_from_spec(job.p_prime_spec, block, job.config_dir, "p_prime");
    const int n = p_o.num_kept();
    GeneratorSpec inner_spec = GeneratorSpec::parse(job.inner_gens);
    const int n_par = inner_spec.n_out() - 1;
    PuncturePattern p_i_p =
        pattern_from_spec(job.p_i_p_spec, n * n_par, job.config_dir, "p_i_p");
    SCCCDesign d = make_design(job.outer_gens, p_o, job.sections, job.inner_gens, p_prime,
                               p_i_p, random_interleaver(n, job.interleaver_seed));
    if (job.target_rate && d.r_sccc != *job.target_rate)
        throw ConfigError("configured patterns give R_SCCC = " + rat_str(d.r_sccc) +
                          ", target_rate is " + rat_str(*job.target_rate) +
                          " (rho_s + (n-1) rho_p mismatch)");
    return d;
}

ordered_json resolved_config(const JobConfig& job, const SCCCDesign* d) {
    ordered_json r;
    r["outer"] = {{"generators", job.outer_gens}};
    r["inner"] = {{"generators", job.inner_gens}};
    r["frame_sections"] = job.sections;
    r["interleaver_seed"] = job.interleaver_seed;
    r["interleaver"] = "fisher-yates over xoshiro256++ (splitmix64 seeding)";
    r["caps"] = {{"w", job.caps.iw_cap},
                 {"l", job.caps.wa_cap},
                 {"j", job.caps.wb_cap},
                 {"m", job.m_cap},
                 {"n", job.caps.n_cap}};
    r["kernel"] = job.kernel == BoundKernel::Exponential ? "exponential" : "erfc";
    r["compose_mode"] = job.compose_mode == ComposeMode::ExactBinomial ? "exact" : "paper-approx";
    r["grid_db"] = job.grid;
    r["optimize"] = {{"w_max", job.opt_w_max},         {"owef_depth", job.opt_depth},
                     {"m_cap", job.opt_m_cap},         {"j_cap", job.opt_j_cap},
                     {"parity_steps", job.parity_steps}, {"systematic_steps", job.systematic_steps},
                     {"restrict_to_parity", job.restrict_to_parity}};
    r["sim"] = {{"seed", job.sim_seed},
                {"iterations", job.dec.iterations},
                {"siso", job.dec.siso == SisoKind::LogMap ? "log-map" : "max-log-map"},
                {"llr_clip", job.dec.llr_clip},
                {"early_exit", job.dec.early_exit},
                {"min_frame_errors", job.stop.min_frame_errors},
                {"max_frames", job.stop.max_frames},
                {"threads", job.threads},
                {"batch", job.batch},
                {"rng", "xoshiro256++/splitmix64, polar gaussians, substream = (point<<32)|frame"}};
    if (d) {
        r["derived"] = {{"n", d->n},
                        {"k_info", d->k_info},
                        {"r_o_prime", rat_str(d->r_o_prime)},
                        {"r_o_dprime", rat_str(d->r_o_dprime)},
                        {"r_inner", rat_str(d->r_inner)},
                        {"r_sccc", rat_str(d->r_sccc)},
                        {"rho_s", rat_str(d->rho.rho_s)},
                        {"rho_p", rat_str(d->rho.rho_p)}};
    }
    return r;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << content;
}

template <typename Fn>
void write_stream(const fs::path& p, Fn&& fn) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    fn(os);
}

int check_oracle(const SCCCDesign& d, const JointWeightTable& outer,
                 const JointWeightTable& inner) {
    auto oracle = design_oracle_spectrum(d);
    auto spec = compose_uniform(outer, inner, d.n, ComposeMode::ExactBinomial);
    for (const auto& [key, v] : oracle) {
        auto it = spec.coeff.find(key);
        BigRat got = it == spec.coeff.end() ? BigRat(0) : it->second;
        if (got != v) {
            std::cerr << "oracle mismatch at (w=" << key.first << ", h=" << key.second
                      << "): composed " << got << " vs exact " << v << "\n";
            return 4;
        }
    }
    for (const auto& [key, v] : spec.coeff) {
        if (v != 0 && !oracle.count(key)) {
            std::cerr << "oracle mismatch: composed has spurious (w=" << key.first
                      << ", h=" << key.second << ") = " << v << "\n";
            return 4;
        }
    }
    std::cout << "oracle cross-check passed (" << oracle.size() << " coefficients)\n";
    return 0;
}

int cmd_enumerate(const JobConfig& job) {
    SCCCDesign d = build_design(job);
    EnumCaps inner_caps = job.caps;
    inner_caps.wa_cap = job.m_cap;
    auto outer = design_outer_enumerator(d, job.caps);
    auto inner = design_inner_enumerator(d, inner_caps);
    bool sys_kept = true;
    for (int t = 0; t < d.k_info && sys_kept; ++t)
        sys_kept = !d.p_o.deletes(t * d.outer.out_per_step());
    auto summary = distance_summary(outer, inner, sys_kept);

    fs::create_directories(job.out_dir);
    write_stream(job.out_dir / "outer_enumerator.csv",
                 [&](std::ostream& os) { write_enumerator_csv(os, outer, true); });
    write_stream(job.out_dir / "inner_enumerator.csv",
                 [&](std::ostream& os) { write_enumerator_csv(os, inner, false); });
    write_file(job.out_dir / "distance_summary.json", summary_to_json(summary).dump(2) + "\n");
    write_file(job.out_dir / "resolved_config.json", resolved_config(job, &d).dump(2) + "\n");
    if (job.oracle) return check_oracle(d, outer, inner);
    return 0;
}

int cmd_bound(const JobConfig& job) {
    SCCCDesign d = build_design(job);
    EnumCaps inner_caps = job.caps;
    inner_caps.wa_cap = job.m_cap;
    auto outer = design_outer_enumerator(d, job.caps);
    auto inner = design_inner_enumerator(d, inner_caps);
    bool sys_kept = true;
    for (int t = 0; t < d.k_info && sys_kept; ++t)
        sys_kept = !d.p_o.deletes(t * d.outer.out_per_step());
    auto summary = distance_summary(outer, inner, sys_kept);
    auto spec = compose_uniform(outer, inner, d.n, job.compose_mode);
    auto support = exponent_support(outer, inner);
    auto rep = asymptotic_report(summary, &support);
    auto bit = union_bound_bit(spec, d.r_sccc, d.sections, job.grid, job.kernel);
    auto frame = union_bound_frame(spec, d.r_sccc, job.grid, job.kernel);
    auto cum = cumulative_spectrum(spec);

    fs::create_directories(job.out_dir);
    write_stream(job.out_dir / "spectrum.csv",
                 [&](std::ostream& os) { write_spectrum_csv(os, spec); });
    write_stream(job.out_dir / "bit_bound.csv",
                 [&](std::ostream& os) { write_curve_csv(os, bit); });
    write_stream(job.out_dir / "frame_bound.csv",
                 [&](std::ostream& os) { write_curve_csv(os, frame); });
    write_stream(job.out_dir / "cumulative.csv",
                 [&](std::ostream& os) { write_cumulative_csv(os, cum); });
    ordered_json aj = asymptotic_to_json(rep, spec);
    aj["rho_p"] = rat_str(d.rho.rho_p);
    aj["rho_s"] = rat_str(d.rho.rho_s);
    if (summary.h_m3) aj["h_m3"] = *summary.h_m3;
    if (summary.d_f_eff_inner) aj["d_f_eff_inner"] = *summary.d_f_eff_inner;
    aj["d_odprime_at_dfoprime"] = summary.d_odprime_at_dfoprime;
    write_file(job.out_dir / "asymptotic.json", aj.dump(2) + "\n");
    write_file(job.out_dir / "resolved_config.json", resolved_config(job, &d).dump(2) + "\n");
    if (job.oracle) return check_oracle(d, outer, inner);
    return 0;
}

int cmd_optimize(const JobConfig& job) {
    GeneratorSpec outer_spec = GeneratorSpec::parse(job.outer_gens);
    const int block = job.sections * outer_spec.n_out();
    PuncturePattern p_o = pattern_from_spec(job.p_o_spec, block, job.config_dir, "outer.pattern");
    fs::create_directories(job.out_dir);
    bool did_any = false;
    if (job.parity_steps > 0) {
        TrellisCode inner = build_trellis(GeneratorSpec::parse(job.inner_gens));
        ParityLadderResult res = optimize_parity_ladder(inner, p_o.num_kept(), job.opt_w_max,
                                                        job.parity_steps, job.opt_m_cap);
        write_stream(job.out_dir / "parity_ladder.txt",
                     [&](std::ostream& os) { write_pattern_file(os, res.ladder); });
        write_file(job.out_dir / "parity_trajectory.json",
                   parity_trajectory_json(res).dump(2) + "\n");
        if (res.aborted) {
            std::cerr << "parity ladder aborted: " << res.diagnostic << "\n";
            return 3;
        }
        did_any = true;
    }
    if (job.systematic_steps > 0) {
        TrellisCode outer = build_trellis(outer_spec);
        SystematicLadderResult res =
            optimize_systematic_ladder(outer, p_o, job.sections, job.opt_depth,
                                       job.systematic_steps, job.restrict_to_parity,
                                       job.opt_j_cap);
        write_stream(job.out_dir / "systematic_ladder.txt",
                     [&](std::ostream& os) { write_pattern_file(os, res.ladder); });
        write_file(job.out_dir / "systematic_trajectory.json",
                   systematic_trajectory_json(res).dump(2) + "\n");
        if (res.stopped_early) {
            std::cerr << "systematic ladder stopped early: " << res.diagnostic << "\n";
            return 3;
        }
        did_any = true;
    }
    if (!did_any)
        throw ConfigError("optimize: set optimize.parity_steps or optimize.systematic_steps");
    write_file(job.out_dir / "resolved_config.json",
               resolved_config(job, nullptr).dump(2) + "\n");
    return 0;
}

int cmd_simulate(const JobConfig& job) {
    SCCCDesign d = build_design(job);
    SimReport report =
        run_monte_carlo(d, job.dec, job.grid, job.stop, job.sim_seed, job.threads, job.batch);
    fs::create_directories(job.out_dir);
    write_stream(job.out_dir / "report.csv",
                 [&](std::ostream& os) { write_sim_report_csv(os, report); });
    // bound overlay on the same grid for plot pairing
    EnumCaps inner_caps = job.caps;
    inner_caps.wa_cap = job.m_cap;
    auto outer = design_outer_enumerator(d, job.caps);
    auto inner = design_inner_enumerator(d, inner_caps);
    auto spec = compose_uniform(outer, inner, d.n, job.compose_mode);
    auto frame = union_bound_frame(spec, d.r_sccc, job.grid, job.kernel);
    auto bit = union_bound_bit(spec, d.r_sccc, d.sections, job.grid, job.kernel);
    write_stream(job.out_dir / "frame_bound.csv",
                 [&](std::ostream& os) { write_curve_csv(os, frame); });
    write_stream(job.out_dir / "bit_bound.csv",
                 [&](std::ostream& os) { write_curve_csv(os, bit); });
    write_file(job.out_dir / "resolved_config.json", resolved_config(job, &d).dump(2) + "\n");
    return 0;
}

int cmd_family(const JobConfig& job) {
    if (job.family.empty()) throw ConfigError("family: no rates configured");
    GeneratorSpec outer_spec = GeneratorSpec::parse(job.outer_gens);
    GeneratorSpec inner_spec = GeneratorSpec::parse(job.inner_gens);
    const int block = job.sections * outer_spec.n_out();
    PuncturePattern p_o = pattern_from_spec(job.p_o_spec, block, job.config_dir, "outer.pattern");
    const int n = p_o.num_kept();
    const int n_par = inner_spec.n_out() - 1;
    const BigRat r_o_prime(job.sections, n);

    if (!job.p_prime_spec.contains("file") || !job.p_i_p_spec.contains("file"))
        throw ConfigError("family: p_prime and p_i_p must reference ladder files");
    fs::path sp = fs::path(job.p_prime_spec["file"].get<std::string>());
    fs::path pp = fs::path(job.p_i_p_spec["file"].get<std::string>());
    if (sp.is_relative()) sp = job.config_dir / sp;
    if (pp.is_relative()) pp = job.config_dir / pp;
    PunctureLadder lad_s = load_ladder(sp.string());
    PunctureLadder lad_p = load_ladder(pp.string());

    auto interleaver = random_interleaver(n, job.interleaver_seed);
    ordered_json manifest;
    manifest["ladders"] = {{"systematic", sp.string()}, {"parity", pp.string()}};
    ordered_json rows = ordered_json::array();
    std::vector<PuncturePattern> parity_patterns, systematic_patterns;
    for (const auto& [rate, rho_p] : job.family) {
        BigRat rho_s = rho_s_for_target(rate, r_o_prime, inner_spec.n_out(), rho_p);
        BigRat del_s = (BigRat(1) - rho_s) * n;
        BigRat del_p = (BigRat(1) - rho_p) * (n * n_par);
        if (boost::multiprecision::denominator(del_s) != 1 ||
            boost::multiprecision::denominator(del_p) != 1)
            throw ConfigError("family: rate " + rat_str(rate) +
                              " needs fractional deletion counts; choose rho_p with denominator " +
                              std::to_string(n));
        int steps_s = static_cast<int>(boost::multiprecision::numerator(del_s));
        int steps_p = static_cast<int>(boost::multiprecision::numerator(del_p));
        if (steps_s > lad_s.max_steps() || steps_p > lad_p.max_steps())
            throw CapExceededError("family: ladders too short for rate " + rat_str(rate));
        PuncturePattern p_prime = lad_s.step(steps_s);
        PuncturePattern p_i_p = lad_p.step(steps_p);
        systematic_patterns.push_back(p_prime);
        parity_patterns.push_back(p_i_p);

        SCCCDesign d = make_design(job.outer_gens, p_o, job.sections, job.inner_gens, p_prime,
                                   p_i_p, interleaver);
        if (d.r_sccc != rate)
            throw ConfigError("family: derived rate " + rat_str(d.r_sccc) + " != requested " +
                              rat_str(rate));
        EnumCaps inner_caps = job.caps;
        inner_caps.wa_cap = job.m_cap;
        auto outer_t = design_outer_enumerator(d, job.caps);
        auto inner_t = design_inner_enumerator(d, inner_caps);
        auto summary = distance_summary(outer_t, inner_t, true);
        auto spec = compose_uniform(outer_t, inner_t, d.n, job.compose_mode);
        auto support = exponent_support(outer_t, inner_t);
        auto rep = asymptotic_report(summary, &support);
        ordered_json row;
        row["rate"] = rat_str(rate);
        row["rho_s"] = rat_str(rho_s);
        row["rho_p"] = rat_str(rho_p);
        row["p_prime_steps"] = steps_s;
        row["p_i_p_steps"] = steps_p;
        if (summary.h_m3) row["h_m3"] = *summary.h_m3;
        if (summary.d_f_eff_inner) row["d_f_eff_inner"] = *summary.d_f_eff_inner;
        row["d_odprime_at_dfoprime"] = summary.d_odprime_at_dfoprime;
        row["h_alpha_m"] = rep.h_alpha_m;
        row["alpha_m"] = rep.alpha_m;
        auto hm = spec.h_min();
        if (hm) {
            row["h_m"] = *hm;
            row["n_h_m"] = format_rat(spec.multiplicity_at(*hm));
        }
        rows.push_back(row);
    }
    auto vp = check_rate_compatible(parity_patterns);
    auto vs = check_rate_compatible(systematic_patterns);
    if (!vp.compatible || !vs.compatible)
        throw std::runtime_error("family is not rate compatible: " +
                                 (vp.compatible ? vs.message : vp.message));
    manifest["rate_compatible"] = true;
    manifest["rows"] = rows;
    fs::create_directories(job.out_dir);
    write_file(job.out_dir / "family_manifest.json", manifest.dump(2) + "\n");
    write_file(job.out_dir / "resolved_config.json",
               resolved_config(job, nullptr).dump(2) + "\n");
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"rate-compatible SCCC design and analysis"};
    app.require_subcommand(1);
    std::string config_path;
    CliOverrides ov;
    std::string out_dir, kernel, caps, grid;
    uint64_t seed = 0;
    int iterations = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "job config file (JSON, // comments allowed)")
            ->required();
        sub->add_option("--out", out_dir, "output directory override");
        sub->add_option("--seed", seed, "simulation master seed override");
        sub->add_option("--kernel", kernel, "bound kernel: exponential|erfc");
        sub->add_option("--caps", caps, "enumerator caps w,l,j,m,n");
        sub->add_option("--grid", grid, "Eb/N0 grid start:stop:step in dB");
        sub->add_option("--iterations", iterations, "decoder iterations override");
        sub->add_flag("--oracle", ov.oracle, "brute-force cross-check (toy sizes only)");
        sub->add_flag("--restrict-to-parity", ov.restrict_to_parity,
                      "systematic ladder may only delete outer parity bits");
    };
    CLI::App* c_enum = app.add_subcommand("enumerate", "joint weight enumerators and summary");
    CLI::App* c_bound = app.add_subcommand("bound", "spectrum, union bounds, asymptotics");
    CLI::App* c_opt = app.add_subcommand("optimize", "greedy rate-compatible ladders");
    CLI::App* c_sim = app.add_subcommand("simulate", "iterative-decoding Monte Carlo");
    CLI::App* c_fam = app.add_subcommand("family", "rate-compatible family manifest");
    for (auto* sub : {c_enum, c_bound, c_opt, c_sim, c_fam}) add_common(sub);

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (!out_dir.empty()) ov.out_dir = out_dir;
    if (seed != 0) ov.seed = seed;
    if (!kernel.empty()) ov.kernel = kernel;
    if (!caps.empty()) ov.caps = caps;
    if (!grid.empty()) ov.grid = grid;
    if (iterations != 0) ov.iterations = iterations;

    try {
        JobConfig job = load_config(config_path, ov);
        if (app.got_subcommand("enumerate")) return cmd_enumerate(job);
        if (app.got_subcommand("bound")) return cmd_bound(job);
        if (app.got_subcommand("optimize")) return cmd_optimize(job);
        if (app.got_subcommand("simulate")) return cmd_simulate(job);
        if (app.got_subcommand("family")) return cmd_family(job);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CapExceededError& e) {
        std::cerr << "cap/feasibility error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace sccc
