// skewlab: numerical laboratory for polynomial skew products on C^2.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"

#include "skewlab/acceptance.hpp"
#include "skewlab/context.hpp"
#include "skewlab/raster_io.hpp"
#include "skewlab/rng.hpp"

namespace fs = std::filesystem;
using namespace skewlab;

namespace {

cplx parse_cplx(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) return cplx(std::stod(s), 0.0);
    return cplx(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
}

struct CommonFlags {
    int d = 3;
    std::string c_str, beta_str = "1,0";
    double theta = kGoldenTheta;
    double nradius = 0.05;
    std::string grid = "512x512";
    int nmax = 4096;
    double tol = 1e-9;
    uint64_t seed = 1;
    std::string out = "out";
    int threads = 1;
    bool quick = false;
    bool unchecked = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--d", d, "map degree (>= 3 for the example family)");
        cmd->add_option("--c", c_str, "free critical point, re,im");
        cmd->add_option("--beta", beta_str, "coupling parameter, re,im");
        cmd->add_option("--theta", theta, "rotation number of p at 0");
        cmd->add_option("--nradius", nradius, "N radius in the linearizing coordinate");
        cmd->add_option("--grid", grid, "raster resolution WxH");
        cmd->add_option("--nmax", nmax, "iteration depth cap");
        cmd->add_option("--tol", tol, "tolerance for potentials/residuals");
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--out", out, "output directory");
        cmd->add_option("--threads", threads, "worker threads");
        cmd->add_flag("--quick", quick, "reduced sampling");
        cmd->add_flag("--unchecked", unchecked, "run probes without a certified parameter set");
    }

    RunConfig to_config() const {
        RunConfig cfg;
        cfg.d = d;
        if (!c_str.empty()) cfg.c = parse_cplx(c_str);
        cfg.beta = parse_cplx(beta_str);
        cfg.theta = theta;
        cfg.n_radius = nradius;
        auto x = grid.find('x');
        if (x != std::string::npos) {
            cfg.grid_w = std::stoi(grid.substr(0, x));
            cfg.grid_h = std::stoi(grid.substr(x + 1));
        }
        cfg.n_max = nmax;
        cfg.tol = tol;
        cfg.seed = seed;
        cfg.quick = quick;
        cfg.threads = threads;
        cfg.out_dir = out;
        cfg.unchecked = unchecked;
        return cfg;
    }
};

int cmd_find_params(const RunConfig& cfg) {
    FinderOptions fo;
    fo.threads = cfg.threads;
    FamilyParams params = find_misiurewicz_parameter(cfg.d, 1, fo);
    params.beta = cfg.beta;
    params.theta = cfg.theta;
    AssumptionOptions ao;
    ao.threads = cfg.threads;
    AssumptionReport rep = verify_assumptions(params, ao);
    CertCache cache(cfg.out_dir);
    auto doc = params_to_json(params, rep);
    cache.store(cfg.param_key(), "params", doc);
    std::printf("c = %.16g%+.16gi\nm = %.16g%+.16gi\nmultiplier = %.16g%+.16gi\n",
                params.c.real(), params.c.imag(), params.m.real(), params.m.imag(),
                params.multiplier.real(), params.multiplier.imag());
    std::printf("A1 %s | A2 %s (membership %.2f px) | A3 %s\n",
                verdict_name(rep.a1.verdict).c_str(),
                verdict_name(rep.a2.verdict).c_str(), rep.a2.membership_px,
                verdict_name(rep.a3.verdict).c_str());
    std::printf("certificate: %s\n", cache.path_for(cfg.param_key(), "params").c_str());
    if (rep.a2.verdict == Verdict::VerifiedNumerically) return 0;
    return rep.a2.verdict == Verdict::Refuted ? 2 : 3;
}

FamilyParams resolve_params(const RunConfig& cfg) {
    if (cfg.c) {
        // explicit parameter: rebuild the derived quantities and validate
        FamilyParams p;
        p.d = cfg.d;
        p.c = *cfg.c;
        p.beta = cfg.beta;
        p.theta = cfg.theta;
        Polynomial1D q0 = family_q0(cfg.d, p.c);
        p.m = q0.eval(p.c);
        p.multiplier = q0.derivative().eval(p.m);
        p.residual_fixed = std::abs(q0.eval(p.m) - p.m);
        p.residual_crit = std::abs(q0.eval(p.c) - p.m);
        if (!cfg.unchecked && (p.residual_fixed > 1e-10 || std::abs(p.multiplier) <= 1.0))
            throw std::runtime_error(
                "explicit --c is not a certified Misiurewicz-type parameter "
                "(pass --unchecked to force)");
        return p;
    }
    CertCache cache(cfg.out_dir);
    if (auto doc = cache.load(cfg.param_key(), "params")) {
        FamilyParams p = params_from_json(*doc);
        p.beta = cfg.beta;
        p.theta = cfg.theta;
        return p;
    }
    if (!cfg.unchecked)
        throw std::runtime_error(
            "no certified parameter set in the cache; run find-params first or pass "
            "--unchecked");
    FinderOptions fo;
    fo.check_membership = false;
    fo.threads = cfg.threads;
    FamilyParams p = find_misiurewicz_parameter(cfg.d, 1, fo);
    p.beta = cfg.beta;
    p.theta = cfg.theta;
    return p;
}

int cmd_render_slice(const RunConfig& cfg, const std::string& z0_str) {
    FamilyParams params = resolve_params(cfg);
    SkewProduct f = build_family(params);
    cplx z0 = parse_cplx(z0_str);
    GridSpec grid;
    grid.width = cfg.grid_w;
    grid.height = cfg.grid_h;
    double kb = k_bound_radius(f, std::abs(z0) + 0.1);
    grid.xmin = -kb;
    grid.xmax = kb;
    grid.ymin = -kb;
    grid.ymax = kb;
    SliceOptions so;
    so.n_max = cfg.n_max;
    so.threads = cfg.threads;
    so.green_tol = cfg.tol;
    JuliaSlice slice = julia_slice(f, z0, grid, so);

    fs::create_directories(cfg.out_dir);
    std::string stem = "slice_" + cfg.hash().substr(0, 12);
    std::string pgm = (fs::path(cfg.out_dir) / (stem + ".pgm")).string();
    std::string raw = (fs::path(cfg.out_dir) / (stem + ".f32")).string();
    std::string sidecar = (fs::path(cfg.out_dir) / (stem + ".json")).string();
    write_pgm(pgm, slice.grid, slice.membership,
              grid_comment(slice.grid, z0, cfg.n_max));
    write_raw_f32(raw, slice.potential);
    nlohmann::ordered_json sj;
    sj["schema"] = "skewlab.slice/1";
    sj["z"] = {{"re", z0.real()}, {"im", z0.imag()}};
    sj["grid"] = grid_to_json(slice.grid);
    sj["n_max"] = slice.n_max;
    sj["escape_radius"] = slice.escape_radius;
    sj["diameter_estimate"] = slice.diameter_estimate;
    sj["unresolved"] = slice.unresolved;
    sj["potential_format"] = "float32-le-rowmajor";
    sj["config_hash"] = cfg.hash();
    write_text(sidecar, sj.dump(2) + "\n");
    std::printf("%s\n%s\n%s\n", pgm.c_str(), raw.c_str(), sidecar.c_str());
    double frac = double(slice.unresolved) / double(slice.grid.npix());
    if (frac > 0.01)
        std::fprintf(stderr, "warning: %.2f%% unresolved pixels (raise --nmax)\n",
                     100.0 * frac);
    return 0;
}

int cmd_linearize(const RunConfig& cfg) {
    FamilyParams params = resolve_params(cfg);
    SkewProduct f = build_family(params);
    SiegelData sd = linearize(f.p, {});
    CertCache cache(cfg.out_dir);
    nlohmann::ordered_json j;
    j["schema"] = "skewlab.siegel/1";
    j["theta"] = fmt_double(sd.theta);
    j["radius_estimate"] = fmt_double(sd.radius_estimate);
    j["truncation"] = sd.truncation;
    j["min_divisor"] = fmt_double(sd.min_divisor);
    nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
    for (cplx b : sd.phi_coeffs)
        coeffs.push_back({fmt_double(b.real()), fmt_double(b.imag())});
    j["phi_coeffs"] = coeffs;
    cache.store(cfg.hash(), "siegel", j);
    std::printf("r-hat = %.12g, residual at 0.5 r-hat = %.3g\n", sd.radius_estimate,
                conjugacy_residual(sd, f.p, 0.5 * sd.radius_estimate, 256));
    std::printf("certificate: %s\n", cache.path_for(cfg.hash(), "siegel").c_str());
    return 0;
}

int cmd_motion(const RunConfig& cfg) {
    FamilyParams params = resolve_params(cfg);
    ContextOptions co;
    co.need_delta = false;
    LabContext ctx = build_context(cfg, params, co);
    CertCache cache(cfg.out_dir);
    nlohmann::ordered_json j;
    j["schema"] = "skewlab.motion/1";
    j["n_radius"] = fmt_double(cfg.n_radius);
    j["depth"] = ctx.motion.leaves.empty() ? 0 : ctx.motion.leaves[0].transform_depth;
    j["max_residual"] = ctx.motion.max_residual;
    j["min_leaf_gap"] = ctx.motion.min_leaf_gap;
    j["contraction_ratio"] = ctx.motion.contraction_ratio;
    j["aborted_nodes"] = ctx.motion.aborted_nodes.size();
    nlohmann::ordered_json mesh = nlohmann::ordered_json::array();
    for (cplx z : ctx.mesh.zs)
        mesh.push_back({fmt_double(z.real()), fmt_double(z.imag())});
    j["mesh"] = mesh;
    nlohmann::ordered_json leaves = nlohmann::ordered_json::array();
    for (const auto& leaf : ctx.motion.leaves) {
        nlohmann::ordered_json lj;
        lj["w0"] = {fmt_double(leaf.base_label.real()), fmt_double(leaf.base_label.imag())};
        lj["residual"] = leaf.residual;
        nlohmann::ordered_json ss = nlohmann::ordered_json::array();
        for (cplx s : leaf.samples)
            ss.push_back({fmt_double(s.real()), fmt_double(s.imag())});
        lj["samples"] = ss;
        leaves.push_back(lj);
    }
    j["leaves"] = leaves;
    cache.store(cfg.hash(), "motion", j);
    std::printf("leaves = %zu (aborted %zu), max residual = %.3g, min gap = %.3g\n",
                ctx.motion.leaves.size(), ctx.motion.aborted_nodes.size(),
                ctx.motion.max_residual, ctx.motion.min_leaf_gap);
    std::printf("certificate: %s\n", cache.path_for(cfg.hash(), "motion").c_str());
    return 0;
}

int cmd_probe(const RunConfig& cfg, const std::string& kind, int circles) {
    FamilyParams params = resolve_params(cfg);
    ContextOptions co;
    co.need_motion = kind == "intersections" || kind == "fatou" ||
                     kind == "disjointness" || kind == "julia-coincidence";
    co.need_delta = kind != "ramification";
    if (cfg.quick) {
        co.delta_fibers = 16;
        co.delta_grid = 192;
        co.delta_nmax = 400;
    }
    LabContext ctx = build_context(cfg, params, co);
    ProbeCertificate cert;
    if (kind == "expansivity") {
        int configs = cfg.quick ? 5 : 20;
        Rng rng(cfg.seed, 0xe6);
        int passed = 0;
        nlohmann::ordered_json runs = nlohmann::ordered_json::array();
        for (int k = 0; k < configs; ++k) {
            double rho = (0.2 + 0.7 * rng.next_double()) * cfg.n_radius;
            double ang = 2 * M_PI * rng.next_double();
            cplx z = ctx.sd.phi(rho * cplx(std::cos(ang), std::sin(ang)));
            SliceSampleOptions so;
            so.cap = 256;
            so.seed = cfg.seed ^ (0xab00 + k);
            SliceSample s = sample_slice_measure(ctx.f, z, 10, 2.0 * params.c, so);
            Rng sub(so.seed, 7);
            std::vector<size_t> pick = sub.subsample(s.points.size(), 50);
            std::vector<cplx> A;
            for (size_t i : pick) A.push_back(s.points[i]);
            ProbeCertificate one = expansivity_probe(ctx.f, z, A, 200, ctx.delta_hat);
            if (one.verdict == "pass") ++passed;
            runs.push_back({{"z", {{"re", z.real()}, {"im", z.imag()}}},
                            {"first_n", one.measured["first_n"]},
                            {"verdict", one.verdict}});
        }
        cert.kind = "expansivity";
        cert.config = {{"configs", configs}, {"delta_hat", ctx.delta_hat},
                       {"n_iter", 200}, {"set_size", 50}, {"seed", cfg.seed}};
        cert.measured = {{"passed", passed}, {"runs", runs}};
        cert.verdict = passed >= int(std::ceil(0.95 * configs)) ? "pass" : "fail";
    } else if (kind == "intersections") {
        int ok = 0;
        nlohmann::ordered_json all = nlohmann::ordered_json::array();
        for (int k = 0; k < circles; ++k) {
            double frac = 0.2 + 0.6 * (circles == 1 ? 0.0 : double(k) / (circles - 1));
            ProbeCertificate one = postcritical_intersection(
                ctx.f, ctx.sd, ctx.skeleton, ctx.motion, *ctx.evaluator,
                frac * cfg.n_radius, params.c);
            if (one.verdict == "pass") ++ok;
            all.push_back({{"r_lin", frac * cfg.n_radius},
                           {"verdict", one.verdict},
                           {"crossings", one.measured["crossings"]}});
        }
        cert.kind = "intersections";
        cert.config = {{"circles", circles}, {"n_radius", cfg.n_radius}};
        cert.measured = {{"circles_with_crossing", ok}, {"detail", all}};
        cert.verdict = ok == circles ? "pass" : "fail";
    } else if (kind == "fatou") {
        Rng rng(cfg.seed, 0x9f);
        int leaf_total = 0, leaf_nn = 0, tr_total = 0, tr_nn = 0;
        int npts = cfg.quick ? 6 : 20;
        const double rots[3] = {M_PI / 2, M_PI / 3, 2 * M_PI / 3};
        for (int k = 0; k < npts; ++k) {
            const MotionLeaf& leaf =
                ctx.motion.leaves[rng.next_below(ctx.motion.leaves.size())];
            double rho = 0.4 * cfg.n_radius * rng.next_double();
            double ang = 2 * M_PI * rng.next_double();
            cplx center = ctx.sd.phi(rho * cplx(std::cos(ang), std::sin(ang)));
            try {
                FatouGraphCandidate g =
                    leaf_candidate(*ctx.evaluator, leaf.node, center, ctx.fatou_r);
                fatou_graph_test(ctx.f, g, 200, ctx.delta_hat, ctx.escape_r);
                ++leaf_total;
                if (g.classification == "non-normal") ++leaf_nn;
            } catch (const LeafAbort&) {
            }
            double rho2 = (0.2 + 0.6 * rng.next_double()) * cfg.n_radius;
            double ang2 = 2 * M_PI * rng.next_double();
            cplx z = ctx.sd.phi(rho2 * cplx(std::cos(ang2), std::sin(ang2)));
            SliceSampleOptions so;
            so.cap = 128;
            so.seed = cfg.seed ^ (0x9100 + k);
            SliceSample s = sample_slice_measure(ctx.f, z, 10, 2.0 * params.c, so);
            Rng sub(so.seed, 11);
            cplx w = s.points[sub.next_below(s.points.size())];
            int nearest = 0;
            double bd = 1e300;
            for (size_t i = 0; i < ctx.skeleton.nodes.size(); ++i) {
                double dd = std::abs(ctx.skeleton.nodes[i].w - w);
                if (dd < bd) {
                    bd = dd;
                    nearest = int(i);
                }
            }
            cplx slope;
            try {
                slope = ctx.evaluator->slope(nearest, z);
            } catch (const LeafAbort&) {
                slope = cplx(0.3, 0.0);
            }
            for (double rot : rots) {
                FatouGraphCandidate g =
                    tangent_candidate({z, w}, slope * std::exp(cplx(0, rot)), ctx.fatou_r);
                fatou_graph_test(ctx.f, g, 200, ctx.delta_hat, ctx.escape_r);
                ++tr_total;
                if (g.classification == "non-normal") ++tr_nn;
            }
        }
        cert.kind = "fatou";
        cert.config = {{"points", npts}, {"r", ctx.fatou_r}, {"seed", cfg.seed}};
        cert.measured = {{"leaf_total", leaf_total}, {"leaf_non_normal", leaf_nn},
                         {"transverse_total", tr_total}, {"transverse_non_normal", tr_nn}};
        double rate = tr_total ? double(tr_nn) / tr_total : 0.0;
        cert.verdict = (leaf_total > 0 && leaf_nn == 0 && rate >= 0.8) ? "pass" : "fail";
    } else if (kind == "disjointness") {
        // two live leaves over a shared base disk near z = 0
        if (ctx.motion.leaves.size() < 2)
            throw std::runtime_error("need at least two live leaves");
        int nm = ctx.node_of_m();
        int other = -1;
        double best = 1e300;
        for (const auto& leaf : ctx.motion.leaves) {
            if (leaf.node == nm) continue;
            double dd = std::abs(leaf.base_label - params.m);
            if (dd < best) {
                best = dd;
                other = leaf.node;
            }
        }
        FatouGraphCandidate g1 = leaf_candidate(*ctx.evaluator, nm, cplx(0.0), ctx.fatou_r);
        FatouGraphCandidate g2 = leaf_candidate(*ctx.evaluator, other, cplx(0.0), ctx.fatou_r);
        fatou_graph_test(ctx.f, g1, 200, ctx.delta_hat, ctx.escape_r);
        fatou_graph_test(ctx.f, g2, 200, ctx.delta_hat, ctx.escape_r);
        ProbeCertificate same = fatou_disjointness_check(ctx.f, g1, g1, 200, ctx.delta_hat);
        ProbeCertificate pair = fatou_disjointness_check(ctx.f, g1, g2, 200, ctx.delta_hat);
        cert.kind = "disjointness";
        cert.config = {{"r", ctx.fatou_r}, {"delta_hat", ctx.delta_hat}};
        cert.measured = {{"identical_pair", same.measured}, {"distinct_leaves", pair.measured}};
        cert.verdict =
            (same.verdict == "pass" && pair.verdict == "pass") ? "pass" : pair.verdict;
    } else if (kind == "ramification") {
        Rng rng(cfg.seed, 0x8a);
        RamificationOptions ro;
        ro.base_radius = 0.8 * cfg.n_radius;
        ro.n_max = cfg.quick ? 4 : std::min(cfg.n_max, 6);
        for (int attempt = 0; attempt < 3; ++attempt) {
            cplx alpha = 0.3 * std::exp(cplx(0, 2 * M_PI * rng.next_double()));
            cplx gamma = params.m + 0.02 * std::exp(cplx(0, 2 * M_PI * rng.next_double()));
            cert = ramification_growth(ctx.f, alpha, gamma, ro);
            if (cert.verdict != "inconclusive") break;
        }
    } else if (kind == "julia-coincidence") {
        std::vector<Point> samples;
        Rng rng(cfg.seed, 0x1c);
        for (int k = 0; k < (cfg.quick ? 8 : 24); ++k) {
            const MotionLeaf& leaf =
                ctx.motion.leaves[rng.next_below(ctx.motion.leaves.size())];
            size_t j = rng.next_below(leaf.samples.size());
            samples.push_back({ctx.mesh.zs[j], leaf.samples[j]});
        }
        for (int k = 0; k < 6; ++k) {  // interior points near the attracting graph
            double ang = 2 * M_PI * rng.next_double();
            samples.push_back({ctx.sd.phi(0.5 * cfg.n_radius *
                                          cplx(std::cos(ang), std::sin(ang))),
                               0.05 * cplx(std::cos(ang), std::sin(ang))});
        }
        for (int k = 0; k < 6; ++k)  // escaping points
            samples.push_back({cplx(0.01, 0.0), cplx(5.0 + k, 4.0)});
        cert = julia_coincidence_probe(ctx.f, samples, {});
    } else {
        std::fprintf(stderr, "unknown probe kind: %s\n", kind.c_str());
        return 64;
    }
    fs::create_directories(cfg.out_dir);
    CertCache cache(cfg.out_dir);
    std::string key = cfg.hash();
    cache.store(key, "probe-" + cert.kind, cert.to_json());
    std::printf("verdict: %s\ncertificate: %s\n", cert.verdict.c_str(),
                cache.path_for(key, "probe-" + cert.kind).c_str());
    return cert.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skewlab: polynomial skew products, Green potentials, and "
                 "holomorphic-motion probes on C^2"};
    app.require_subcommand(1);

    CommonFlags fp_flags, rs_flags, lin_flags, mo_flags, pr_flags, ve_flags;
    std::string z0_str = "0,0";
    std::string probe_kind;
    int circles = 20;

    CLI::App* c_fp = app.add_subcommand("find-params",
                                        "search and certify family parameters");
    fp_flags.attach(c_fp);
    CLI::App* c_rs = app.add_subcommand("render-slice",
                                        "rasterize one vertical Julia slice");
    rs_flags.attach(c_rs);
    c_rs->add_option("--z0", z0_str, "base point of the fiber, re,im");
    CLI::App* c_li = app.add_subcommand("linearize", "Siegel linearization of p");
    lin_flags.attach(c_li);
    CLI::App* c_mo = app.add_subcommand("motion", "holomorphic motion of E_0 over N");
    mo_flags.attach(c_mo);
    CLI::App* c_pr = app.add_subcommand("probe", "run one lemma probe");
    pr_flags.attach(c_pr);
    c_pr->add_option("kind", probe_kind,
                     "expansivity|intersections|fatou|disjointness|ramification|"
                     "julia-coincidence")
        ->required();
    c_pr->add_option("--circles", circles, "invariant circles for the intersection probe");
    CLI::App* c_ve = app.add_subcommand("verify", "run the acceptance suite");
    ve_flags.attach(c_ve);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_fp->parsed()) return cmd_find_params(fp_flags.to_config());
        if (c_rs->parsed()) return cmd_render_slice(rs_flags.to_config(), z0_str);
        if (c_li->parsed()) return cmd_linearize(lin_flags.to_config());
        if (c_mo->parsed()) return cmd_motion(mo_flags.to_config());
        if (c_pr->parsed()) return cmd_probe(pr_flags.to_config(), probe_kind, circles);
        if (c_ve->parsed()) {
            AcceptanceOptions ao;
            ao.quick = ve_flags.quick;
            ao.threads = ve_flags.threads;
            ao.out_dir = ve_flags.out;
            ao.seed = ve_flags.seed;
            ao.cli_path = fs::read_symlink("/proc/self/exe").string();
            auto results = run_acceptance(ao);
            return all_passed(results) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
