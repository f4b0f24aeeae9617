#pragma once

#include <string>
#include <vector>

#include "skewlab/motion.hpp"
#include "skewlab/rng.hpp"
#include "skewlab/types.hpp"

#include "json.hpp"

namespace skewlab {

using ordered_json = nlohmann::ordered_json;

// Machine-readable outcome of one probe run. `runtime_sec` is diagnostic
// only and is never serialized (outputs must be reproducible from the
// configuration alone).
struct ProbeCertificate {
    std::string kind;
    ordered_json config;
    ordered_json measured;
    std::string verdict;  // "pass", "fail", "inconclusive"
    double runtime_sec = 0.0;

    ordered_json to_json() const;
    int exit_code() const {
        return verdict == "pass" ? 0 : (verdict == "fail" ? 2 : 3);
    }
};

// Weighted sample of the slice measure mu_z from iterated preimages.
struct SliceSample {
    cplx z;
    std::vector<cplx> points;
    double weight = 0.0;  // equal weights, sum = 1
    int depth = 0;
};

struct SliceSampleOptions {
    size_t cap = 1024;   // pool cap per level (seeded subsampling)
    uint64_t seed = 1;
    double root_tol = 1e-9;
};

SliceSample sample_slice_measure(const SkewProduct& f, cplx z, int depth,
                                 cplx w0, const SliceSampleOptions& opt = {});

// Lemma-expansive probe: first n with diam(f^n(A)) > 0.75 delta_hat.
ProbeCertificate expansivity_probe(const SkewProduct& f, cplx z,
                                   const std::vector<cplx>& A, int n_iter,
                                   double delta_hat);

// Lemma-connex probe: crossings of the post-critical curve W = f(C x {c})
// with the leaf family over one invariant circle.
struct IntersectionOptions {
    int angle_samples = 192;
    int bisection_steps = 40;
    double exact_tol = 1e-9;
};

ProbeCertificate postcritical_intersection(
    const SkewProduct& f, const SiegelData& sd, const HyperbolicSkeleton& sk,
    const MotionSet& motion, const LeafEvaluator& ev, double circle_r_lin,
    cplx crit_w, const IntersectionOptions& opt = {});

// A sampled graph over D(center, 2r), candidate Fatou disk.
struct FatouGraphCandidate {
    cplx center;
    double r = 0.0;  // the *inner* radius; samples cover radius 2r
    std::vector<cplx> base_offsets;
    std::vector<cplx> w_samples;
    std::string source;  // "leaf", "tangent", "user"
    std::string classification;  // set by fatou_graph_test

    size_t inner_count() const;  // offsets with |offset| <= r come first
};

FatouGraphCandidate leaf_candidate(const LeafEvaluator& ev, int node, cplx center,
                                   double r);
FatouGraphCandidate tangent_candidate(const Point& x, cplx slope, double r);

ProbeCertificate fatou_graph_test(const SkewProduct& f, FatouGraphCandidate& g,
                                  int n_iter, double delta_hat,
                                  double escape_radius);

ProbeCertificate fatou_disjointness_check(const SkewProduct& f,
                                          const FatouGraphCandidate& g1,
                                          const FatouGraphCandidate& g2,
                                          int n_iter, double delta_hat);

// Ramification-count proxy on f^{-n}(L), L = {w = alpha z + gamma}.
struct RamificationOptions {
    double base_radius = 0.04;   // Omega base disk
    double w_radius = 4.0;       // Omega fiber disk
    int n_max = 6;
    int seed_grid = 40;
    double dedup = 1e-7;
    double slope_tol = 0.15;
    double stability_tol = 0.05;
};

ProbeCertificate ramification_growth(const SkewProduct& f, cplx alpha, cplx gamma,
                                     const RamificationOptions& opt = {});

// Lemma-julia consistency probe: points with non-normal iterates lie in the
// J_z bands; normal/escaping points are excluded.
struct CoincidenceOptions {
    double band_tol = 0.02;   // ring-witness radius for d(., J_z)
    int n_classify = 80;
    double grow_hi = 1e3;
    double decay_lo = 1e-2;
    int ring_points = 8;
};

ProbeCertificate julia_coincidence_probe(const SkewProduct& f,
                                         const std::vector<Point>& samples,
                                         const CoincidenceOptions& opt = {});

}  // namespace skewlab
