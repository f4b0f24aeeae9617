#include "skewlab/context.hpp"

#include <cmath>

namespace skewlab {

std::vector<cplx> delta_fiber_samples(const SiegelData& sd, double r_lin, int count) {
    std::vector<cplx> out;
    out.push_back(cplx(0.0));
    const double rings[3] = {1.0, 0.7, 0.4};
    int per_ring = std::max(1, (count - 1) / 3);
    for (double rr : rings) {
        for (int j = 0; j < per_ring && int(out.size()) < count; ++j) {
            double t = double(j) / per_ring;
            out.push_back(sd.phi(r_lin * rr *
                                 cplx(std::cos(2 * M_PI * t), std::sin(2 * M_PI * t))));
        }
    }
    return out;
}

LabContext build_context(const RunConfig& cfg, const FamilyParams& params,
                         const ContextOptions& opt) {
    LabContext ctx;
    ctx.cfg = cfg;
    ctx.params = params;
    ctx.f = build_family(params);
    ctx.sd = linearize(ctx.f.p, {});
    if (cfg.n_radius > 0.8 * ctx.sd.radius_estimate)
        throw std::invalid_argument("N radius exceeds 0.8 of the Siegel radius estimate");
    ctx.escape_r = escape_radius(ctx.f, cfg.n_radius * 2.0);

    if (opt.need_motion) {
        Polynomial1D q0 = family_q0(params.d, params.c);
        GridSpec gs;
        gs.width = gs.height = 768;
        ctx.basin = basin_boundary(q0, gs, {.n_max = 1500, .threads = cfg.threads});
        ctx.skeleton = build_skeleton(q0, ctx.basin, {});
        ctx.mesh = make_polar_mesh(ctx.sd, cfg.n_radius, 4, 16);
        TransformOptions topt;
        topt.depth = 60;
        topt.tol = 1e-10;
        topt.threads = cfg.threads;
        ctx.motion = graph_transform(ctx.f, ctx.skeleton, ctx.mesh, topt);
        ctx.evaluator = std::make_unique<LeafEvaluator>(ctx.f, ctx.skeleton, topt.depth);
    }
    if (opt.need_delta) {
        std::vector<cplx> fibers = delta_fiber_samples(ctx.sd, cfg.n_radius,
                                                       opt.delta_fibers);
        GridSpec grid;
        grid.width = grid.height = opt.delta_grid;
        SliceOptions sopt;
        sopt.n_max = opt.delta_nmax;
        sopt.threads = cfg.threads;
        sopt.with_potential = false;
        ctx.delta_detail = min_slice_diameter(ctx.f, fibers, grid, sopt);
        ctx.delta_hat = ctx.delta_detail.delta_hat;

        // Fatou radii from delta-hat: r small enough that a graph over
        // D(z,2r) with leaf-scale gradient oscillates < delta/4 over D(z,r);
        // r0 accounts for the distortion of p-orbits of disks in N.
        double max_slope = 0.5;
        if (ctx.evaluator && ctx.node_of_m() >= 0) {
            cplx s = ctx.evaluator->slope(ctx.node_of_m(), cplx(0.0));
            max_slope = std::max(max_slope, 2.0 * std::abs(s));
        }
        double kappa = 1.0;
        for (const cplx& z : ctx.mesh.zs) {
            // distortion of phi over N
            double a = std::abs(ctx.sd.dphi(ctx.sd.phi_inverse(z, z)));
            kappa = std::max(kappa, std::max(a, 1.0 / std::max(a, 1e-12)));
        }
        double r_n_eucl = 0.0;
        for (const cplx& z : ctx.mesh.zs) r_n_eucl = std::max(r_n_eucl, std::abs(z));
        double r_from_delta = ctx.delta_hat / 4.0 / (4.0 * max_slope);
        ctx.fatou_r0 = std::min(0.2 * r_n_eucl, r_from_delta);
        ctx.fatou_r = ctx.fatou_r0 / (kappa * kappa);
    }
    return ctx;
}

}  // namespace skewlab
