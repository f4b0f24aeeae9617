#pragma once

#include <memory>

#include "skewlab/config.hpp"
#include "skewlab/motion.hpp"
#include "skewlab/probes.hpp"

namespace skewlab {

// Everything the probes need, built once per run from a RunConfig: the map,
// its certified parameters, the linearizer, the skeleton / motion leaves and
// the slice-diameter floor delta-hat.
struct LabContext {
    RunConfig cfg;
    FamilyParams params;
    SkewProduct f;
    SiegelData sd;
    BasinBoundary basin;
    HyperbolicSkeleton skeleton;
    BaseMesh mesh;
    MotionSet motion;
    std::unique_ptr<LeafEvaluator> evaluator;
    double delta_hat = 0.0;
    DeltaHatResult delta_detail;
    double fatou_r = 0.0;   // inner Fatou-graph radius (from delta-hat)
    double fatou_r0 = 0.0;  // outer radius, r0 = r * distortion^2
    double escape_r = 0.0;

    cplx crit_c() const { return params.c; }
    int node_of_m() const { return skeleton.index_of(params.m, 1e-7); }
};

struct ContextOptions {
    bool need_motion = true;
    bool need_delta = true;
    int delta_fibers = 64;
    int delta_grid = 256;
    int delta_nmax = 512;
};

LabContext build_context(const RunConfig& cfg, const FamilyParams& params,
                         const ContextOptions& opt = {});

// convenience: fibers sampling closure(N) (rings at 1.0/0.7/0.4 x r_N + 0)
std::vector<cplx> delta_fiber_samples(const SiegelData& sd, double r_lin, int count);

}  // namespace skewlab
