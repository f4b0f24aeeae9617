#include "skewlab/motion.hpp"

#include <algorithm>
#include <cmath>

#include "skewlab/parallel.hpp"

namespace skewlab {

int HyperbolicSkeleton::index_of(cplx w, double tol) const {
    for (size_t i = 0; i < nodes.size(); ++i)
        if (std::abs(nodes[i].w - w) < tol) return int(i);
    return -1;
}

namespace {

struct CycleScratch {
    std::vector<cplx> pts;
    double mult_abs = 0.0;
    int period = 0;
};

// Newton for q0^per(x) = x from a seed; returns the refined point.
std::optional<cplx> newton_periodic(const Polynomial1D& q0, const Polynomial1D& dq0,
                                    cplx seed, int per) {
    cplx w = seed;
    for (int it = 0; it < 80; ++it) {
        cplx x = w, dp = 1.0;
        for (int s = 0; s < per; ++s) {
            dp *= dq0.eval(x);
            x = q0.eval(x);
        }
        cplx dF = dp - 1.0;
        if (std::abs(dF) < 1e-14 || !finite(x)) return std::nullopt;
        cplx step = (x - w) / dF;
        w -= step;
        if (!finite(w)) return std::nullopt;
        if (std::abs(step) < 1e-13) return w;
    }
    return std::nullopt;
}

}  // namespace

HyperbolicSkeleton build_skeleton(const Polynomial1D& q0, const BasinBoundary& bb,
                                  const SkeletonOptions& opt) {
    Polynomial1D dq0 = q0.derivative();
    std::vector<cplx> crit = roots(dq0);

    auto dist_crit = [&](cplx w) {
        double b = 1e300;
        for (cplx c : crit) b = std::min(b, std::abs(w - c));
        return b;
    };
    auto contour_pos = [&](cplx w) -> size_t {
        size_t best = 0;
        double bd = 1e300;
        for (size_t i = 0; i < bb.contour.size(); ++i) {
            uint32_t pi = bb.contour[i];
            cplx p = bb.grid.center(int(pi % bb.grid.width), int(pi / bb.grid.width));
            double d = std::abs(p - w);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        return best;
    };

    HyperbolicSkeleton sk;
    // --- periodic cycles from contour seeds
    std::vector<CycleScratch> cycles;
    size_t step = std::max<size_t>(1, bb.contour.size() / 600);
    for (int per = 1; per <= opt.period_max; ++per) {
        for (size_t si = 0; si < bb.contour.size(); si += step) {
            uint32_t pi = bb.contour[si];
            cplx seed = bb.grid.center(int(pi % bb.grid.width), int(pi / bb.grid.width));
            auto wopt = newton_periodic(q0, dq0, seed, per);
            if (!wopt) continue;
            cplx w = *wopt;
            if (boundary_distance_px(bb, w) > opt.boundary_tol_px) continue;
            // build the cycle, polishing every point
            CycleScratch cyc;
            cyc.period = per;
            cplx x = w;
            cplx dp = 1.0;
            bool ok = true;
            for (int s = 0; s < per; ++s) {
                auto pol = newton_periodic(q0, dq0, x, per);
                if (!pol) {
                    ok = false;
                    break;
                }
                cyc.pts.push_back(*pol);
                dp *= dq0.eval(*pol);
                x = q0.eval(*pol);
            }
            if (!ok || std::abs(dp) <= 1.0 + 1e-9) continue;
            // exact cycle length may divide per; keep minimal-period cycles only
            if (per > 1 && std::abs(cyc.pts[0] - q0.eval(cyc.pts[0])) < 1e-9) continue;
            bool lower = false;
            for (int div = 2; div < per; ++div) {
                if (per % div != 0) continue;
                cplx y = cyc.pts[0];
                for (int s = 0; s < div; ++s) y = q0.eval(y);
                if (std::abs(y - cyc.pts[0]) < 1e-9) lower = true;
            }
            if (lower) continue;
            cyc.mult_abs = std::abs(dp);
            // trim: every cycle point must stay off the critical set and on the boundary
            bool good = true;
            for (cplx u : cyc.pts) {
                if (dist_crit(u) < opt.crit_trim) good = false;
                if (boundary_distance_px(bb, u) > opt.boundary_tol_px) good = false;
            }
            if (!good) continue;
            bool dup = false;
            for (const auto& other : cycles)
                for (cplx u : other.pts)
                    if (std::abs(u - cyc.pts[0]) < 1e-9) dup = true;
            if (!dup) cycles.push_back(std::move(cyc));
        }
    }
    // register cycle nodes with closed-up links
    for (const auto& cyc : cycles) {
        int base = int(sk.nodes.size());
        for (int s = 0; s < cyc.period; ++s) {
            SkeletonNode nd;
            nd.w = cyc.pts[s];
            nd.next = base + (s + 1) % cyc.period;
            nd.period = cyc.period;
            nd.cycle_multiplier = cyc.mult_abs;
            nd.depth = 0;
            nd.dist_crit = dist_crit(nd.w);
            sk.nodes.push_back(nd);
        }
    }
    if (sk.nodes.empty())
        throw std::runtime_error("skeleton construction found no repelling periodic points");

    // --- backward tree: preimages staying on the boundary and off Crit(q_0)
    std::vector<int> frontier(sk.nodes.size());
    for (size_t i = 0; i < frontier.size(); ++i) frontier[i] = int(i);
    for (int depth = 1; depth <= opt.tree_depth && sk.nodes.size() < opt.max_nodes;
         ++depth) {
        std::vector<int> next_frontier;
        for (int parent : frontier) {
            if (sk.nodes.size() >= opt.max_nodes) break;
            for (cplx u : solve(q0, sk.nodes[parent].w)) {
                if (!finite(u)) continue;
                if (dist_crit(u) < opt.crit_trim) continue;
                if (boundary_distance_px(bb, u) > opt.boundary_tol_px) continue;
                if (sk.index_of(u, 1e-9) >= 0) continue;
                if (sk.nodes.size() >= opt.max_nodes) break;
                SkeletonNode nd;
                nd.w = u;
                nd.next = parent;
                nd.period = 0;
                nd.cycle_multiplier = sk.nodes[parent].cycle_multiplier;
                nd.depth = depth;
                nd.dist_crit = dist_crit(u);
                next_frontier.push_back(int(sk.nodes.size()));
                sk.nodes.push_back(nd);
            }
        }
        frontier = std::move(next_frontier);
        if (frontier.empty()) break;
    }

    for (auto& nd : sk.nodes) nd.contour_pos = contour_pos(nd.w);
    sk.cyclic_order.resize(sk.nodes.size());
    for (size_t i = 0; i < sk.nodes.size(); ++i) sk.cyclic_order[i] = int(i);
    std::sort(sk.cyclic_order.begin(), sk.cyclic_order.end(), [&](int a, int b) {
        if (sk.nodes[a].contour_pos != sk.nodes[b].contour_pos)
            return sk.nodes[a].contour_pos < sk.nodes[b].contour_pos;
        return a < b;
    });
    sk.min_gap = 1e300;
    for (size_t i = 0; i < sk.nodes.size(); ++i)
        for (size_t j = i + 1; j < sk.nodes.size(); ++j)
            sk.min_gap = std::min(sk.min_gap, std::abs(sk.nodes[i].w - sk.nodes[j].w));
    return sk;
}

BaseMesh make_polar_mesh(const SiegelData& sd, double r_lin, int n_radii,
                         int n_angles) {
    BaseMesh m;
    m.r_lin = r_lin;
    m.zs.push_back(cplx(0.0));
    m.rho.push_back(0.0);
    for (int i = 1; i <= n_radii; ++i) {
        double rho = r_lin * double(i) / n_radii;
        for (int j = 0; j < n_angles; ++j) {
            double t = double(j) / n_angles;
            cplx zeta = rho * cplx(std::cos(2 * M_PI * t), std::sin(2 * M_PI * t));
            m.zs.push_back(sd.phi(zeta));
            m.rho.push_back(rho);
        }
    }
    return m;
}

LeafEvaluator::LeafEvaluator(const SkewProduct& f, const HyperbolicSkeleton& sk,
                             int depth)
    : f_(f), sk_(sk), depth_(depth) {
    tube_.resize(sk.nodes.size());
    for (size_t i = 0; i < sk.nodes.size(); ++i)
        tube_[i] = 0.45 * sk.nodes[i].dist_crit;
}

cplx LeafEvaluator::value_at_depth(int node, cplx z, int k) const {
    // forward chains
    std::vector<int> chain(k + 1);
    chain[0] = node;
    for (int i = 1; i <= k; ++i) chain[i] = sk_.nodes[chain[i - 1]].next;
    std::vector<cplx> zs(k + 1);
    zs[0] = z;
    for (int i = 1; i <= k; ++i) zs[i] = f_.p.eval(zs[i - 1]);

    cplx u = sk_.nodes[chain[k]].w;  // constant initial graph
    for (int i = k - 1; i >= 0; --i) {
        cplx anchor = sk_.nodes[chain[i]].w;
        double tube = tube_[chain[i]];
        cplx x = anchor;
        bool done = false;
        for (int it = 0; it < 60; ++it) {
            cplx dv = f_.q.dw(zs[i], x);
            if (std::abs(dv) < 1e-13)
                throw LeafAbort("inverse branch hit the critical set");
            cplx step = (f_.q.eval(zs[i], x) - u) / dv;
            x -= step;
            if (std::abs(x - anchor) > tube)
                throw LeafAbort("inverse branch left its tube");
            if (std::abs(step) < 1e-13) {
                done = true;
                break;
            }
        }
        if (!done) throw LeafAbort("inverse-branch Newton did not converge");
        u = x;
    }
    return u;
}

cplx LeafEvaluator::slope(int node, cplx z, double h) const {
    cplx a = value(node, z + cplx(h, 0.0));
    cplx b = value(node, z - cplx(h, 0.0));
    return (a - b) / (2.0 * h);
}

MotionSet graph_transform(const SkewProduct& f, const HyperbolicSkeleton& sk,
                          const BaseMesh& mesh, const TransformOptions& opt) {
    MotionSet out;
    out.mesh = mesh;
    LeafEvaluator ev(f, sk, opt.depth);
    const size_t nn = sk.nodes.size();
    const size_t nm = mesh.zs.size();

    // residual history on a mesh subsample (Cauchy increments per depth)
    {
        std::vector<size_t> sub;
        for (size_t j = 0; j < nm; j += std::max<size_t>(1, nm / 16)) sub.push_back(j);
        std::vector<int> subnodes;
        for (size_t i = 0; i < nn; i += std::max<size_t>(1, nn / 8)) subnodes.push_back(int(i));
        std::vector<std::vector<cplx>> prev(subnodes.size(),
                                            std::vector<cplx>(sub.size()));
        for (int k = 1; k <= opt.depth; ++k) {
            double worst = 0.0;
            bool any = false;
            for (size_t a = 0; a < subnodes.size(); ++a)
                for (size_t b = 0; b < sub.size(); ++b) {
                    cplx v;
                    try {
                        v = ev.value_at_depth(subnodes[a], mesh.zs[sub[b]], k);
                    } catch (const LeafAbort&) {
                        continue;
                    }
                    if (k > 1) worst = std::max(worst, std::abs(v - prev[a][b]));
                    prev[a][b] = v;
                    any = true;
                }
            if (k > 1 && any) out.residual_history.push_back(worst);
            if (k > 4 && !out.residual_history.empty() &&
                out.residual_history.back() < opt.tol)
                break;
        }
        // contraction ratio: median of successive ratios above the noise floor
        std::vector<double> ratios;
        for (size_t i = 1; i < out.residual_history.size(); ++i) {
            double a = out.residual_history[i - 1], b = out.residual_history[i];
            if (a > 1e-12 && b > 1e-13) ratios.push_back(b / a);
        }
        if (!ratios.empty()) {
            std::sort(ratios.begin(), ratios.end());
            out.contraction_ratio = ratios[ratios.size() / 2];
        }
    }

    // full leaves at final depth
    std::vector<std::vector<cplx>> samples(nn, std::vector<cplx>(nm));
    std::vector<uint8_t> alive(nn, 1);
    parallel_for(nn, opt.threads, [&](size_t i0, size_t i1) {
        for (size_t i = i0; i < i1; ++i) {
            for (size_t j = 0; j < nm; ++j) {
                try {
                    samples[i][j] = ev.value(int(i), mesh.zs[j]);
                } catch (const LeafAbort&) {
                    alive[i] = 0;
                    break;
                }
            }
        }
    });

    // equivariance residual: |q_z(gamma_w(z)) - gamma_{q0(w)}(p(z))|
    std::vector<double> resid(nn, 0.0);
    parallel_for(nn, opt.threads, [&](size_t i0, size_t i1) {
        for (size_t i = i0; i < i1; ++i) {
            if (!alive[i]) continue;
            int nxt = sk.nodes[i].next;
            double worst = 0.0;
            for (size_t j = 0; j < nm; ++j) {
                cplx lhs = f.q.eval(mesh.zs[j], samples[i][j]);
                cplx rhs;
                try {
                    rhs = ev.value(nxt, f.p.eval(mesh.zs[j]));
                } catch (const LeafAbort&) {
                    alive[i] = 0;
                    break;
                }
                worst = std::max(worst, std::abs(lhs - rhs));
            }
            resid[i] = worst;
        }
    });

    for (size_t i = 0; i < nn; ++i) {
        if (!alive[i]) {
            out.aborted_nodes.push_back(int(i));
            continue;
        }
        MotionLeaf leaf;
        leaf.node = int(i);
        leaf.base_label = sk.nodes[i].w;
        leaf.samples = std::move(samples[i]);
        leaf.residual = resid[i];
        leaf.transform_depth = opt.depth;
        out.max_residual = std::max(out.max_residual, resid[i]);
        out.leaves.push_back(std::move(leaf));
    }

    out.min_leaf_gap = 1e300;
    for (size_t a = 0; a < out.leaves.size(); ++a)
        for (size_t b = a + 1; b < out.leaves.size(); ++b) {
            double g = 1e300;
            for (size_t j = 0; j < nm; ++j)
                g = std::min(g, std::abs(out.leaves[a].samples[j] - out.leaves[b].samples[j]));
            out.min_leaf_gap = std::min(out.min_leaf_gap, g);
        }
    if (out.leaves.size() < 2) out.min_leaf_gap = 0.0;
    return out;
}

double vertical_expansion(const SkewProduct& f, const HyperbolicSkeleton& sk,
                          const LeafEvaluator& ev, int node, int n,
                          const std::vector<cplx>& zs, double* rate_at_first) {
    double worst = 1e300;
    for (size_t j = 0; j < zs.size(); ++j) {
        double acc = 0.0;
        int cur = node;
        cplx z = zs[j];
        for (int k = 0; k < n; ++k) {
            cplx w = ev.value(cur, z);
            acc += std::log(std::abs(f.q.dw(z, w)));
            cur = sk.nodes[cur].next;
            z = f.p.eval(z);
        }
        double rate = acc / n;
        if (j == 0 && rate_at_first) *rate_at_first = rate;
        worst = std::min(worst, rate);
    }
    return worst;
}

}  // namespace skewlab
