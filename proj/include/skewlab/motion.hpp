#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skewlab/siegel.hpp"
#include "skewlab/slice.hpp"
#include "skewlab/skew.hpp"

namespace skewlab {

// One point of the finite skeleton of E_0 with its forward-orbit structure:
// periodic cycles close up through `next`, preperiodic (backward-tree) nodes
// link toward the cycle they fall onto.
struct SkeletonNode {
    cplx w;
    int next = -1;        // index of q_0(w) in the skeleton
    int period = 0;       // cycle length when periodic, 0 for preperiodic
    double cycle_multiplier = 0.0;  // |multiplier| of the eventual cycle
    int depth = 0;        // backward-tree depth (0 for periodic points)
    double dist_crit = 0.0;  // distance to the critical set of q_0
    size_t contour_pos = 0;  // position along the traced basin contour
};

struct HyperbolicSkeleton {
    std::vector<SkeletonNode> nodes;
    std::vector<int> cyclic_order;  // node indices sorted along the contour
    int index_of(cplx w, double tol = 1e-7) const;
    double min_gap = 0.0;
};

struct SkeletonOptions {
    int period_max = 3;
    int tree_depth = 9;
    size_t max_nodes = 420;
    double crit_trim = 0.12;   // drop nodes this close to Crit(q_0)
    double boundary_tol_px = 2.0;
};

HyperbolicSkeleton build_skeleton(const Polynomial1D& q0, const BasinBoundary& bb,
                                  const SkeletonOptions& opt = {});

// Shared polar base mesh of N in the linearizing coordinate; index 0 is z = 0.
struct BaseMesh {
    double r_lin = 0.0;  // N radius in the linearizing coordinate
    std::vector<cplx> zs;
    std::vector<double> rho;  // linearized radius per mesh point
};

BaseMesh make_polar_mesh(const SiegelData& sd, double r_lin, int n_radii,
                         int n_angles);

struct LeafAbort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluates the depth-K graph-transform limit gamma_w(z) for any z in N by
// composing inverse branches along the skeleton forward orbit. Pure; safe to
// call concurrently.
class LeafEvaluator {
public:
    LeafEvaluator(const SkewProduct& f, const HyperbolicSkeleton& sk, int depth);

    cplx value(int node, cplx z) const { return value_at_depth(node, z, depth_); }
    cplx value_at_depth(int node, cplx z, int k) const;
    int depth() const { return depth_; }

    // derivative of the leaf graph in z (central finite difference)
    cplx slope(int node, cplx z, double h = 1e-6) const;

private:
    const SkewProduct& f_;
    const HyperbolicSkeleton& sk_;
    int depth_;
    std::vector<double> tube_;  // per-node branch tube radius
};

struct MotionLeaf {
    int node = -1;
    cplx base_label;  // w_0 = gamma(0)
    std::vector<cplx> samples;
    double residual = 0.0;
    int transform_depth = 0;
};

struct MotionSet {
    BaseMesh mesh;
    std::vector<MotionLeaf> leaves;
    std::vector<int> aborted_nodes;
    std::vector<double> residual_history;  // max Cauchy increment per depth
    double max_residual = 0.0;
    double min_leaf_gap = 0.0;
    double contraction_ratio = 0.0;  // median residual ratio on periodic leaves
};

struct TransformOptions {
    int depth = 60;
    double tol = 1e-10;
    int threads = 1;
};

MotionSet graph_transform(const SkewProduct& f, const HyperbolicSkeleton& sk,
                          const BaseMesh& mesh, const TransformOptions& opt = {});

// min over mesh points of (1/n) log |d_w q_z^n| along the equivariant leaf
// orbit (each orbit point re-evaluated through the chain, so repelling drift
// cannot accumulate).
double vertical_expansion(const SkewProduct& f, const HyperbolicSkeleton& sk,
                          const LeafEvaluator& ev, int node, int n,
                          const std::vector<cplx>& zs,
                          double* rate_at_first = nullptr);

}  // namespace skewlab
