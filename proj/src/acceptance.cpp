#include "skewlab/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "skewlab/raster_io.hpp"
#include "skewlab/rng.hpp"

namespace skewlab {

namespace fs = std::filesystem;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double secs() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

std::string fmt(double v, int prec = 3) {
    char b[64];
    std::snprintf(b, sizeof b, "%.*g", prec, v);
    return b;
}

void print_line(const CriterionResult& r) {
    const char* tag = r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL");
    std::printf("[%s] %2d. %-28s %s (%.2fs)\n", tag, r.id, r.name.c_str(),
                r.detail.c_str(), r.seconds);
    std::fflush(stdout);
}

}  // namespace

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.skipped && !r.pass) return false;
    return true;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
    std::vector<CriterionResult> out;
    fs::create_directories(opt.out_dir);

    RunConfig cfg;
    cfg.threads = opt.threads;
    cfg.out_dir = opt.out_dir;
    cfg.seed = opt.seed;

    // ---- criterion 3 first: the parameter certificate everything else uses
    FamilyParams params;
    {
        CriterionResult r;
        r.id = 3;
        r.name = "parameter certificate";
        Timer t;
        FinderOptions fo;
        fo.basin_grid = 512;
        params = find_misiurewicz_parameter(3, 1, fo);
        r.seconds = t.secs();
        double ec = std::abs(params.c - cplx(std::sqrt(3.0), 0.0));
        double em = std::abs(params.m - cplx(-std::sqrt(3.0) / 2.0, 0.0));
        double eu = std::abs(params.multiplier - cplx(2.25, 0.0));
        r.pass = ec < 1e-10 && em < 1e-10 && eu < 1e-10 && r.seconds < 1.0;
        r.detail = "|c-sqrt3|=" + fmt(ec) + " |m+sqrt3/2|=" + fmt(em) +
                   " |mult-9/4|=" + fmt(eu);
        print_line(r);
        out.push_back(r);
    }
    SkewProduct f = build_family(params);

    // ---- criterion 1: Green functional equation
    {
        CriterionResult r;
        r.id = 1;
        r.name = "Green functional equation";
        Timer t;
        int npts = opt.quick ? 2000 : 10000;
        Rng rng(opt.seed, 0xfe01);
        int violations = 0;
        double worst_excess = 0.0;
        GreenOptions g;
        g.n_max = 64;
        g.tol = 1e-10;
        for (int i = 0; i < npts; ++i) {
            cplx z(-2.0 + 4.0 * rng.next_double(), -2.0 + 4.0 * rng.next_double());
            double rad = 0.1 * std::pow(100.0, rng.next_double());
            double ang = 2 * M_PI * rng.next_double();
            Point x{z, rad * cplx(std::cos(ang), std::sin(ang))};
            GreenEstimate gx = green_value(f, x, g);
            GreenEstimate gf = green_value(f, f.evaluate(x), g);
            double lhs = std::abs(gf.value - 3.0 * gx.value);
            double bound = gf.error_bound + 3.0 * gx.error_bound + 1e-12;
            if (lhs > bound) {
                ++violations;
                worst_excess = std::max(worst_excess, lhs - bound);
            }
        }
        r.seconds = t.secs();
        r.pass = violations == 0 && r.seconds < 10.0;
        r.detail = std::to_string(npts) + " pts, violations=" +
                   std::to_string(violations);
        print_line(r);
        out.push_back(r);
    }

    // ---- criterion 2: Boettcher asymptotics at |w| = 1e6
    {
        CriterionResult r;
        r.id = 2;
        r.name = "Boettcher asymptotic";
        Timer t;
        GreenOptions g;
        g.n_max = 64;
        g.tol = 1e-12;
        GreenEstimate ge = green_value(f, {cplx(0.0), cplx(1e6, 0.0)}, g);
        double ref = std::log(1e6) - 0.5 * std::log(3.0);
        double err = std::abs(ge.value - ref);
        r.seconds = t.secs();
        r.pass = err < 1e-6;
        r.detail = "|G - (log|w| - log3/2)| = " + fmt(err);
        print_line(r);
        out.push_back(r);
    }

    // ---- shared context (skeleton, motion, delta-hat)
    LabContext ctx = build_context(cfg, params, {});

    // ---- criterion 4: Siegel linearization
    {
        CriterionResult r;
        r.id = 4;
        r.name = "Siegel linearization";
        Timer t;
        double rhat = ctx.sd.radius_estimate;
        double resid = conjugacy_residual(ctx.sd, ctx.f.p, 0.5 * rhat, 512);
        double rot = rotation_number(ctx.sd, ctx.f.p, 0.3 * rhat, 10000);
        double roterr = std::abs(rot - kGoldenTheta);
        r.seconds = t.secs();
        r.pass = resid < 1e-8 && roterr < 1e-6 && rhat > 0;
        r.detail = "residual=" + fmt(resid) + " rot_err=" + fmt(roterr) +
                   " rhat=" + fmt(rhat);
        print_line(r);
        out.push_back(r);
    }

    // ---- criterion 5: motion equivariance and vertical expansion
    {
        CriterionResult r;
        r.id = 5;
        r.name = "motion equivariance";
        Timer t;
        double rate0 = 0.0;
        int nm = ctx.node_of_m();
        double minrate = vertical_expansion(ctx.f, ctx.skeleton, *ctx.evaluator, nm,
                                            50, ctx.mesh.zs, &rate0);
        double rate_err = std::abs(rate0 - std::log(2.25));
        r.seconds = t.secs();
        r.pass = ctx.motion.max_residual < 1e-6 && nm >= 0 && rate_err < 1e-3 &&
                 minrate > 0.0 && !ctx.motion.leaves.empty();
        r.detail = "leaves=" + std::to_string(ctx.motion.leaves.size()) +
                   " max_resid=" + fmt(ctx.motion.max_residual) +
                   " rate_err=" + fmt(rate_err) + " min_rate=" + fmt(minrate);
        print_line(r);
        out.push_back(r);
    }

    // ---- criterion 6: expansivity over random (z, A) configurations
    {
        CriterionResult r;
        r.id = 6;
        r.name = "expansivity probe";
        Timer t;
        int configs = opt.quick ? 15 : 100;
        Rng rng(opt.seed, 0xe6);
        int passed = 0, failed = 0;
        for (int k = 0; k < configs; ++k) {
            double rho = (0.2 + 0.7 * rng.next_double()) * cfg.n_radius;
            double ang = 2 * M_PI * rng.next_double();
            cplx z = ctx.sd.phi(rho * cplx(std::cos(ang), std::sin(ang)));
            try {
                SliceSampleOptions so;
                so.cap = 256;
                so.seed = opt.seed ^ (0xab00 + k);
                SliceSample s = sample_slice_measure(ctx.f, z, 10,
                                                     2.0 * params.c, so);
                Rng sub(so.seed, 7);
                std::vector<size_t> pick = sub.subsample(s.points.size(), 50);
                std::vector<cplx> A;
                for (size_t i : pick) A.push_back(s.points[i]);
                ProbeCertificate cert =
                    expansivity_probe(ctx.f, z, A, 200, ctx.delta_hat);
                if (cert.verdict == "pass")
                    ++passed;
                else
                    ++failed;
            } catch (const std::exception&) {
                ++failed;
            }
        }
        r.seconds = t.secs();
        double rate = double(passed) / configs;
        r.pass = rate >= 0.95 && r.seconds < 300.0;
        r.detail = "pass rate " + std::to_string(passed) + "/" +
                   std::to_string(configs) + " delta_hat=" + fmt(ctx.delta_hat);
        print_line(r);
        out.push_back(r);
    }

    // ---- criterion 7: post-critical intersections on invariant circles
    {
        CriterionResult r;
        r.id = 7;
        r.name = "intersection probe";
        Timer t;
        int circles = opt.quick ? 5 : 20;
        int ok = 0;
        double worst_app = 0.0;
        for (int k = 0; k < circles; ++k) {
            double frac = 0.2 + 0.6 * (circles == 1 ? 0.0 : double(k) / (circles - 1));
            double rl = frac * cfg.n_radius;
            ProbeCertificate cert = postcritical_intersection(
                ctx.f, ctx.sd, ctx.skeleton, ctx.motion, *ctx.evaluator, rl,
                params.c);
            if (cert.verdict == "pass") ++ok;
        }
        (void)worst_app;
        r.seconds = t.secs();
        r.pass = ok == circles;
        r.detail = "circles with a crossing: " + std::to_string(ok) + "/" +
                   std::to_string(circles);
        print_line(r);
        out.push_back(r);
    }

    // ---- criterion 8: ramification growth
    if (!opt.quick) {
        CriterionResult r;
        r.id = 8;
        r.name = "ramification growth";
        Timer t;
        Rng rng(opt.seed, 0x8a);
        ProbeCertificate cert;
        for (int attempt = 0; attempt < 3; ++attempt) {
            cplx alpha = 0.3 * std::exp(cplx(0, 2 * M_PI * rng.next_double()));
            cplx gamma =
                params.m + 0.02 * std::exp(cplx(0, 2 * M_PI * rng.next_double()));
            RamificationOptions ro;
            ro.base_radius = 0.8 * cfg.n_radius;
            cert = ramification_growth(ctx.f, alpha, gamma, ro);
            if (cert.verdict != "inconclusive") break;
        }
        r.seconds = t.secs();
        double slope = cert.measured.value("slope", 1e9);
        r.pass = cert.verdict == "pass";
        r.detail = "slope=" + fmt(slope) + " vs log3+0.15=" +
                   fmt(std::log(3.0) + 0.15) + " counts=" +
                   cert.measured["counts"].dump();
        print_line(r);
        out.push_back(r);
    } else {
        out.push_back({8, "ramification growth", false, true, "quick mode", 0.0});
        print_line(out.back());
    }

    // ---- criterion 9: Fatou probe asymmetry
    if (!opt.quick) {
        CriterionResult r;
        r.id = 9;
        r.name = "Fatou probe asymmetry";
        Timer t;
        Rng rng(opt.seed, 0x9f);
        int leaf_total = 0, leaf_nonnormal = 0;
        int trans_total = 0, trans_nonnormal = 0;
        double rr = ctx.fatou_r;
        // leaf-aligned candidates
        for (int k = 0; k < 30 && leaf_total < 30; ++k) {
            const MotionLeaf& leaf =
                ctx.motion.leaves[rng.next_below(ctx.motion.leaves.size())];
            double rho = 0.4 * cfg.n_radius * rng.next_double();
            double ang = 2 * M_PI * rng.next_double();
            cplx center = ctx.sd.phi(rho * cplx(std::cos(ang), std::sin(ang)));
            try {
                FatouGraphCandidate g =
                    leaf_candidate(*ctx.evaluator, leaf.node, center, rr);
                fatou_graph_test(ctx.f, g, 200, ctx.delta_hat, ctx.escape_r);
                ++leaf_total;
                if (g.classification == "non-normal") ++leaf_nonnormal;
            } catch (const LeafAbort&) {
                continue;
            }
        }
        // rotated tangent-plane candidates through depth-10 slice samples
        const double rots[3] = {M_PI / 2, M_PI / 3, 2 * M_PI / 3};
        for (int k = 0; k < 20; ++k) {
            double rho = (0.2 + 0.6 * rng.next_double()) * cfg.n_radius;
            double ang = 2 * M_PI * rng.next_double();
            cplx z = ctx.sd.phi(rho * cplx(std::cos(ang), std::sin(ang)));
            SliceSampleOptions so;
            so.cap = 128;
            so.seed = opt.seed ^ (0x9100 + k);
            SliceSample s;
            try {
                s = sample_slice_measure(ctx.f, z, 10, 2.0 * params.c, so);
            } catch (const std::exception&) {
                continue;
            }
            Rng sub(so.seed, 11);
            cplx w = s.points[sub.next_below(s.points.size())];
            // leaf direction at the nearest skeleton point
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
                    tangent_candidate({z, w}, slope * std::exp(cplx(0, rot)), rr);
                fatou_graph_test(ctx.f, g, 200, ctx.delta_hat, ctx.escape_r);
                ++trans_total;
                if (g.classification == "non-normal") ++trans_nonnormal;
            }
        }
        r.seconds = t.secs();
        double rate = trans_total ? double(trans_nonnormal) / trans_total : 0.0;
        r.pass = leaf_total > 0 && leaf_nonnormal == 0 && rate >= 0.8;
        r.detail = "leaf non-normal " + std::to_string(leaf_nonnormal) + "/" +
                   std::to_string(leaf_total) + ", transverse non-normal " +
                   std::to_string(trans_nonnormal) + "/" + std::to_string(trans_total);
        print_line(r);
        out.push_back(r);
    } else {
        out.push_back({9, "Fatou probe asymmetry", false, true, "quick mode", 0.0});
        print_line(out.back());
    }

    // ---- criterion 10: determinism across thread counts
    if (!opt.quick && !opt.cli_path.empty()) {
        CriterionResult r;
        r.id = 10;
        r.name = "thread determinism";
        Timer t;
        std::string dirA = (fs::path(opt.out_dir) / "det_t1").string();
        std::string dirB = (fs::path(opt.out_dir) / "det_t8").string();
        fs::remove_all(dirA);
        fs::remove_all(dirB);
        auto run = [&](const std::string& dir, int threads) {
            std::string base = "\"" + opt.cli_path + "\"";
            std::string tail = " --out " + dir + " --threads " +
                               std::to_string(threads) + " >/dev/null 2>&1";
            int rc = 0;
            rc |= std::system((base + " find-params --d 3" + tail).c_str());
            rc |= std::system(
                (base + " render-slice --z0 0,0 --grid 256x256 --nmax 512" + tail)
                    .c_str());
            rc |= std::system((base + " probe expansivity --quick" + tail).c_str());
            return rc;
        };
        int rcA = run(dirA, 1);
        int rcB = run(dirB, 8);
        bool same = rcA == 0 && rcB == 0;
        std::string mism;
        if (same) {
            // compare every produced file byte-for-byte
            std::vector<std::string> rel;
            for (auto& e : fs::recursive_directory_iterator(dirA))
                if (e.is_regular_file())
                    rel.push_back(fs::relative(e.path(), dirA).string());
            std::sort(rel.begin(), rel.end());
            if (rel.empty()) same = false;
            for (const auto& p : rel) {
                fs::path pa = fs::path(dirA) / p, pb = fs::path(dirB) / p;
                if (!fs::exists(pb)) {
                    same = false;
                    mism = p + " missing";
                    break;
                }
                if (read_file(pa.string()) != read_file(pb.string())) {
                    same = false;
                    mism = p + " differs";
                    break;
                }
            }
        }
        r.seconds = t.secs();
        r.pass = same;
        r.detail = same ? "all outputs byte-identical"
                        : (mism.empty() ? "cli run failed" : mism);
        print_line(r);
        out.push_back(r);
    } else {
        out.push_back({10, "thread determinism", false, true,
                       opt.quick ? "quick mode" : "no cli path", 0.0});
        print_line(out.back());
    }

    std::sort(out.begin(), out.end(),
              [](const CriterionResult& a, const CriterionResult& b) {
                  return a.id < b.id;
              });

    // machine-readable summary
    nlohmann::ordered_json summary;
    summary["schema"] = "skewlab.acceptance/1";
    summary["quick"] = opt.quick;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : out)
        arr.push_back({{"id", r.id},
                       {"name", r.name},
                       {"pass", r.pass},
                       {"skipped", r.skipped},
                       {"detail", r.detail}});
    summary["criteria"] = arr;
    summary["all_passed"] = all_passed(out);
    write_text((fs::path(opt.out_dir) / "acceptance.json").string(),
               summary.dump(2) + "\n");
    return out;
}

}  // namespace skewlab
