#include "wlab/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "json.hpp"

namespace wlab {

namespace {

struct CubeBox {
    std::array<std::int64_t, 2> lo, hi;  // tricell coords
};

CubeBox box_of(const Window& w, const DyadicCube& c) {
    CubeBox b{};
    for (int axis = 0; axis < w.n; ++axis) {
        b.lo[axis] = c.lo_tri(w, axis);
        b.hi[axis] = c.hi_tri(w, axis);
    }
    return b;
}

}  // namespace

SparseFamily cz_sparse_decompose(const GridFunction& f,
                                 std::array<std::uint8_t, 2> alpha,
                                 double lambda) {
    if (!(lambda > 1)) throw BadExponent("stopping factor must exceed 1");
    const Window& w = f.window();
    PrefixTable T(f);

    SparseFamily S;
    S.alpha = alpha;
    S.eta = 1.0 - 1.0 / lambda;

    // Depth-first stopping recursion from the top-scale roots.
    struct Item {
        DyadicCube cube;
        std::size_t parent;  // index in S.cubes, npos for roots
        double base_avg;
    };
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<Item> stack;
    for (const auto& root : dyadic_scale(w, alpha, w.L + 2)) {
        double avg = T.dyadic_avg(root);
        if (avg > 0) stack.push_back({root, npos, avg});
    }
    // Roots are pushed in enumeration order; process stack LIFO.
    std::reverse(stack.begin(), stack.end());

    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        std::size_t self = S.cubes.size();
        S.cubes.push_back(it.cube);
        S.children.emplace_back();
        if (it.parent != npos) S.children[it.parent].push_back(self);

        // Maximal descendants R with avg_R > lambda * avg(self): walk down,
        // descending through non-stopping cubes.
        std::vector<DyadicCube> walk{it.cube};
        while (!walk.empty()) {
            DyadicCube q = walk.back();
            walk.pop_back();
            for (const auto& child : dyadic_children(w, q)) {
                double mass = T.dyadic_sum(child);
                if (!(mass > 0)) continue;
                double side = child.side_len();
                double avg = mass * w.cell_volume() /
                             std::pow(side, static_cast<double>(w.n));
                if (avg > lambda * it.base_avg)
                    stack.push_back({child, self, avg});
                else
                    walk.push_back(child);
            }
        }
    }

    // 1D assignment runs: E_Q = Q minus stopping children.
    if (w.n == 1) {
        S.runs.resize(S.cubes.size());
        for (std::size_t i = 0; i < S.cubes.size(); ++i) {
            std::vector<std::pair<std::int64_t, std::int64_t>> holes;
            for (std::size_t c : S.children[i])
                holes.emplace_back(S.cubes[c].lo_tri(w, 0),
                                   S.cubes[c].hi_tri(w, 0));
            std::sort(holes.begin(), holes.end());
            std::int64_t at = S.cubes[i].lo_tri(w, 0);
            std::int64_t end = S.cubes[i].hi_tri(w, 0);
            for (const auto& h : holes) {
                if (h.first > at) S.runs[i].emplace_back(at, h.first);
                at = std::max(at, h.second);
            }
            if (at < end) S.runs[i].emplace_back(at, end);
        }
    }
    return S;
}

namespace {

// Tricell-resolution accumulation of sum_Q val_Q chi_Q, then per-cell max.
GridFunction collapse_tri(const Window& w, std::vector<double>& tri,
                          std::int64_t tm) {
    std::int64_t m = w.axis_cells();
    std::vector<double> out(static_cast<std::size_t>(w.cell_count()), 0.0);
    if (w.n == 1) {
        for (std::int64_t c = 0; c < m; ++c) {
            double v = 0.0;
            for (int r = 0; r < 3; ++r)
                v = std::max(v, tri[static_cast<std::size_t>(3 * c + r)]);
            out[static_cast<std::size_t>(c)] = v;
        }
    } else {
        for (std::int64_t cy = 0; cy < m; ++cy)
            for (std::int64_t cx = 0; cx < m; ++cx) {
                double v = 0.0;
                for (int ry = 0; ry < 3; ++ry)
                    for (int rx = 0; rx < 3; ++rx)
                        v = std::max(
                            v, tri[static_cast<std::size_t>(
                                   (3 * cy + ry) * tm + 3 * cx + rx)]);
                out[static_cast<std::size_t>(cy * m + cx)] = v;
            }
    }
    return GridFunction(w, std::move(out));
}

std::vector<double> cube_values(const SparseFamily& S,
                                std::span<const GridFunction> fs,
                                const Window& w) {
    std::vector<PrefixTable> tabs;
    tabs.reserve(fs.size());
    for (const auto& f : fs) tabs.emplace_back(f);
    std::vector<double> vals(S.cubes.size(), 0.0);
    for (std::size_t i = 0; i < S.cubes.size(); ++i) {
        double v = 1.0;
        for (const auto& tab : tabs) v *= tab.dyadic_avg(S.cubes[i]);
        vals[i] = v;
    }
    return vals;
}

}  // namespace

GridFunction sparse_operator(const SparseFamily& S,
                             std::span<const GridFunction> fs) {
    if (fs.empty()) throw DimensionMismatch("empty function tuple");
    const Window& w = fs[0].window();
    for (const auto& f : fs) require_same_window(fs[0], f);
    auto vals = cube_values(S, fs, w);

    std::int64_t tm = 3 * w.axis_cells();
    std::int64_t th = 3 * w.half();
    if (w.n == 1) {
        std::vector<double> diff(static_cast<std::size_t>(tm) + 1, 0.0);
        for (std::size_t i = 0; i < S.cubes.size(); ++i) {
            std::int64_t lo =
                std::clamp(S.cubes[i].lo_tri(w, 0) + th, std::int64_t(0), tm);
            std::int64_t hi =
                std::clamp(S.cubes[i].hi_tri(w, 0) + th, std::int64_t(0), tm);
            diff[static_cast<std::size_t>(lo)] += vals[i];
            diff[static_cast<std::size_t>(hi)] -= vals[i];
        }
        std::vector<double> tri(static_cast<std::size_t>(tm), 0.0);
        KahanSum acc;
        for (std::int64_t t = 0; t < tm; ++t) {
            acc.add(diff[static_cast<std::size_t>(t)]);
            tri[static_cast<std::size_t>(t)] = acc.value();
        }
        return collapse_tri(w, tri, tm);
    }
    std::vector<double> tri(static_cast<std::size_t>(tm * tm), 0.0);
    for (std::size_t i = 0; i < S.cubes.size(); ++i) {
        CubeBox b = box_of(w, S.cubes[i]);
        std::int64_t x0 = std::clamp(b.lo[0] + th, std::int64_t(0), tm);
        std::int64_t x1 = std::clamp(b.hi[0] + th, std::int64_t(0), tm);
        std::int64_t y0 = std::clamp(b.lo[1] + th, std::int64_t(0), tm);
        std::int64_t y1 = std::clamp(b.hi[1] + th, std::int64_t(0), tm);
        for (std::int64_t y = y0; y < y1; ++y)
            for (std::int64_t x = x0; x < x1; ++x)
                tri[static_cast<std::size_t>(y * tm + x)] += vals[i];
    }
    return collapse_tri(w, tri, tm);
}

GridFunction sparse_maximal(const SparseFamily& S,
                            std::span<const GridFunction> fs) {
    if (fs.empty()) throw DimensionMismatch("empty function tuple");
    const Window& w = fs[0].window();
    for (const auto& f : fs) require_same_window(fs[0], f);
    auto vals = cube_values(S, fs, w);

    std::int64_t tm = 3 * w.axis_cells();
    std::int64_t th = 3 * w.half();
    std::vector<double> tri(
        static_cast<std::size_t>(w.n == 1 ? tm : tm * tm), 0.0);
    for (std::size_t i = 0; i < S.cubes.size(); ++i) {
        CubeBox b = box_of(w, S.cubes[i]);
        std::int64_t x0 = std::clamp(b.lo[0] + th, std::int64_t(0), tm);
        std::int64_t x1 = std::clamp(b.hi[0] + th, std::int64_t(0), tm);
        if (w.n == 1) {
            for (std::int64_t x = x0; x < x1; ++x) {
                double& o = tri[static_cast<std::size_t>(x)];
                if (vals[i] > o) o = vals[i];
            }
        } else {
            std::int64_t y0 = std::clamp(b.lo[1] + th, std::int64_t(0), tm);
            std::int64_t y1 = std::clamp(b.hi[1] + th, std::int64_t(0), tm);
            for (std::int64_t y = y0; y < y1; ++y)
                for (std::int64_t x = x0; x < x1; ++x) {
                    double& o = tri[static_cast<std::size_t>(y * tm + x)];
                    if (vals[i] > o) o = vals[i];
                }
        }
    }
    return collapse_tri(w, tri, tm);
}

namespace {

// Dinic max flow with int64 capacities.
struct Dinic {
    struct Edge {
        int to;
        std::int64_t cap;
        std::size_t rev;
    };
    std::vector<std::vector<Edge>> g;
    std::vector<int> level, iter;

    explicit Dinic(int n) : g(static_cast<std::size_t>(n)) {}

    void add(int a, int b, std::int64_t cap) {
        g[static_cast<std::size_t>(a)].push_back({b, cap, g[static_cast<std::size_t>(b)].size()});
        g[static_cast<std::size_t>(b)].push_back({a, 0, g[static_cast<std::size_t>(a)].size() - 1});
    }

    bool bfs(int s, int t) {
        level.assign(g.size(), -1);
        std::queue<int> q;
        level[static_cast<std::size_t>(s)] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const auto& e : g[static_cast<std::size_t>(v)])
                if (e.cap > 0 && level[static_cast<std::size_t>(e.to)] < 0) {
                    level[static_cast<std::size_t>(e.to)] = level[static_cast<std::size_t>(v)] + 1;
                    q.push(e.to);
                }
        }
        return level[static_cast<std::size_t>(t)] >= 0;
    }

    std::int64_t dfs(int v, int t, std::int64_t f) {
        if (v == t) return f;
        for (int& i = iter[static_cast<std::size_t>(v)];
             i < static_cast<int>(g[static_cast<std::size_t>(v)].size()); ++i) {
            Edge& e = g[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
            if (e.cap > 0 && level[static_cast<std::size_t>(v)] < level[static_cast<std::size_t>(e.to)]) {
                std::int64_t d = dfs(e.to, t, std::min(f, e.cap));
                if (d > 0) {
                    e.cap -= d;
                    g[static_cast<std::size_t>(e.to)][e.rev].cap += d;
                    return d;
                }
            }
        }
        return 0;
    }

    std::int64_t max_flow(int s, int t) {
        std::int64_t flow = 0;
        while (bfs(s, t)) {
            iter.assign(g.size(), 0);
            std::int64_t f;
            while ((f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) > 0)
                flow += f;
        }
        return flow;
    }
};

}  // namespace

SparseVerdict verify_sparse(const Window& w, const SparseFamily& S,
                            double eta) {
    if (!(eta > 0) || !(eta < 1))
        throw BadExponent("sparsity parameter must lie in (0,1)");
    std::size_t nc = S.cubes.size();
    if (nc == 0) return SparseCertificate{};

    // Segment the cube arrangement by all boundaries per axis.
    std::array<std::vector<std::int64_t>, 2> cuts;
    for (int axis = 0; axis < w.n; ++axis) {
        for (const auto& c : S.cubes) {
            cuts[axis].push_back(c.lo_tri(w, axis));
            cuts[axis].push_back(c.hi_tri(w, axis));
        }
        std::sort(cuts[axis].begin(), cuts[axis].end());
        cuts[axis].erase(std::unique(cuts[axis].begin(), cuts[axis].end()),
                         cuts[axis].end());
    }
    struct Seg {
        std::array<std::int64_t, 2> lo, hi;
        std::int64_t units;
    };
    std::vector<Seg> segs;
    if (w.n == 1) {
        for (std::size_t i = 0; i + 1 < cuts[0].size(); ++i)
            segs.push_back({{cuts[0][i], 0},
                            {cuts[0][i + 1], 1},
                            cuts[0][i + 1] - cuts[0][i]});
    } else {
        for (std::size_t i = 0; i + 1 < cuts[0].size(); ++i)
            for (std::size_t j = 0; j + 1 < cuts[1].size(); ++j)
                segs.push_back({{cuts[0][i], cuts[1][j]},
                                {cuts[0][i + 1], cuts[1][j + 1]},
                                (cuts[0][i + 1] - cuts[0][i]) *
                                    (cuts[1][j + 1] - cuts[1][j])});
    }

    // Scaled integer capacities keep fractional demands exact enough; the
    // scale is a power of two so eta = k/2^j demands stay exact.
    constexpr std::int64_t kScale = std::int64_t(1) << 20;
    int source = 0, sink = 1 + static_cast<int>(nc + segs.size());
    Dinic din(sink + 1);
    std::int64_t total_demand = 0;
    std::vector<std::int64_t> demands(nc);
    for (std::size_t i = 0; i < nc; ++i) {
        double units = std::pow(static_cast<double>(S.cubes[i].side_tri(w)),
                                static_cast<double>(w.n));
        demands[i] = static_cast<std::int64_t>(
            std::ceil(eta * units * static_cast<double>(kScale) - 1e-6));
        total_demand += demands[i];
        din.add(source, 1 + static_cast<int>(i), demands[i]);
    }
    for (std::size_t s = 0; s < segs.size(); ++s) {
        din.add(1 + static_cast<int>(nc + s), sink, segs[s].units * kScale);
        for (std::size_t i = 0; i < nc; ++i) {
            CubeBox b = box_of(w, S.cubes[i]);
            bool inside = true;
            for (int axis = 0; axis < w.n; ++axis)
                inside = inside && segs[s].lo[axis] >= b.lo[axis] &&
                         segs[s].hi[axis] <= b.hi[axis];
            if (inside)
                din.add(1 + static_cast<int>(i), 1 + static_cast<int>(nc + s),
                        segs[s].units * kScale);
        }
    }

    std::int64_t flow = din.max_flow(source, sink);
    if (flow >= total_demand) {
        SparseCertificate cert;
        // Allocations are the flows on cube->segment edges.
        for (std::size_t i = 0; i < nc; ++i) {
            for (const auto& e : din.g[1 + i]) {
                if (e.to == source) continue;
                std::size_t sidx = static_cast<std::size_t>(e.to) - 1 - nc;
                if (sidx >= segs.size()) continue;
                std::int64_t sent = segs[sidx].units * kScale - e.cap;
                // e.cap is the residual; sent = original - residual only for
                // forward edges, which carry all the capacity here.
                if (sent > 0)
                    cert.assignment.push_back({i, segs[sidx].lo, segs[sidx].hi,
                                               sent / kScale});
            }
        }
        return cert;
    }

    // Residual reachability gives the violated cut.
    SparseRefutation ref;
    std::vector<char> seen(din.g.size(), 0);
    std::queue<int> q;
    q.push(source);
    seen[static_cast<std::size_t>(source)] = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const auto& e : din.g[static_cast<std::size_t>(v)])
            if (e.cap > 0 && !seen[static_cast<std::size_t>(e.to)]) {
                seen[static_cast<std::size_t>(e.to)] = 1;
                q.push(e.to);
            }
    }
    double cap_units = 0.0, dem_units = 0.0;
    for (std::size_t i = 0; i < nc; ++i)
        if (seen[1 + i]) {
            ref.cube_cut.push_back(i);
            dem_units += static_cast<double>(demands[i]) / kScale;
        }
    for (std::size_t s = 0; s < segs.size(); ++s)
        if (seen[1 + nc + s]) cap_units += static_cast<double>(segs[s].units);
    double unit_measure = w.cell_volume() / std::pow(3.0, w.n);
    ref.demand = dem_units * unit_measure;
    ref.capacity = cap_units * unit_measure;
    return ref;
}

bool is_certificate(const SparseVerdict& v) {
    return std::holds_alternative<SparseCertificate>(v);
}

std::string sparse_to_json(const Window& w, const SparseFamily& S) {
    nlohmann::ordered_json j;
    j["alpha"] = std::vector<int>(S.alpha.begin(), S.alpha.begin() + w.n);
    j["eta"] = S.eta;
    j["units"] = "third-cell";  // run coordinates in units of 2^-K/3
    nlohmann::ordered_json cubes = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < S.cubes.size(); ++i) {
        nlohmann::ordered_json c;
        c["k"] = S.cubes[i].k;
        c["j"] = std::vector<std::int64_t>(S.cubes[i].j.begin(),
                                           S.cubes[i].j.begin() + w.n);
        if (S.has_assignment()) {
            nlohmann::ordered_json runs = nlohmann::ordered_json::array();
            for (const auto& r : S.runs[i])
                runs.push_back({r.first, r.second});
            c["assignment"] = runs;
        }
        cubes.push_back(c);
    }
    j["cubes"] = cubes;
    return j.dump(2);
}

SparseFamily sparse_from_json(const Window& w, const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SparseFamily S;
    auto alpha = j.at("alpha").get<std::vector<int>>();
    for (std::size_t i = 0; i < alpha.size() && i < 2; ++i)
        S.alpha[i] = static_cast<std::uint8_t>(alpha[i]);
    S.eta = j.at("eta").get<double>();
    bool any_runs = false;
    for (const auto& c : j.at("cubes")) {
        DyadicCube cube;
        cube.third = S.alpha;
        cube.k = c.at("k").get<int>();
        auto js = c.at("j").get<std::vector<std::int64_t>>();
        for (std::size_t i = 0; i < js.size() && i < 2; ++i) cube.j[i] = js[i];
        S.cubes.push_back(cube);
        S.children.emplace_back();
        if (c.contains("assignment")) any_runs = true;
    }
    if (any_runs && w.n == 1) {
        S.runs.resize(S.cubes.size());
        std::size_t idx = 0;
        for (const auto& c : j.at("cubes")) {
            if (c.contains("assignment"))
                for (const auto& r : c.at("assignment"))
                    S.runs[idx].emplace_back(r.at(0).get<std::int64_t>(),
                                             r.at(1).get<std::int64_t>());
            ++idx;
        }
    }
    return S;
}

}  // namespace wlab
