#include "gippo/optimizer.hpp"

#include <algorithm>
#include <deque>
#include <exception>
#include <thread>

namespace gippo {

Solution build_solution(const LatticeGraph& g, Mode mode, Rng& rng) {
    const int n = g.node_count(), m = g.edge_count();
    if (m == 0) throw ParamError("build_solution: graph has no edges");

    std::vector<char> used(m, 0);
    std::vector<int> unused_incident(n, 0);
    std::vector<int> pool;      // nodes with unused incident edges
    std::vector<int> pool_pos(n, -1);
    for (int i = 0; i < n; ++i) {
        unused_incident[i] = static_cast<int>(g.adjacency[i].size());
        if (unused_incident[i] > 0) {
            pool_pos[i] = static_cast<int>(pool.size());
            pool.push_back(i);
        }
    }
    auto mark_used = [&](int ei) {
        used[ei] = 1;
        for (NodeId x : {g.edges[ei].u, g.edges[ei].v}) {
            if (--unused_incident[x] == 0) {
                const int p = pool_pos[x];
                const int last = pool.back();
                pool[p] = last;
                pool_pos[last] = p;
                pool.pop_back();
                pool_pos[x] = -1;
            }
        }
    };

    const bool maximize = (mode == Mode::Max);
    auto strictly_better = [&](double w, double best) {
        return maximize ? w > best : w < best;
    };

    Solution sol;
    int edges_left = m;
    while (edges_left > 0) {
        const NodeId start = pool[rng.bounded(pool.size())];

        // First edge: extreme weight among unused incident edges; adjacency is
        // ascending by edge id, so strict comparison keeps the lowest id on ties.
        int first = -1;
        for (int ei : g.adjacency[start]) {
            if (used[ei]) continue;
            if (first < 0 || strictly_better(g.edges[ei].weight, g.edges[first].weight))
                first = ei;
        }
        std::deque<NodeId> walk{start, g.other_end(first, start)};
        std::deque<int> walk_edges{first};
        double length = g.edges[first].weight;
        mark_used(first);
        --edges_left;

        // Grow from both extremes until neither has an unused incident edge.
        for (;;) {
            const NodeId front = walk.front(), back = walk.back();
            int pick = -1;
            bool pick_back = false;
            auto consider = [&](int ei, bool at_back) {
                if (used[ei]) return;
                if (pick < 0) {
                    pick = ei;
                    pick_back = at_back;
                    return;
                }
                const double w = g.edges[ei].weight, bw = g.edges[pick].weight;
                if (strictly_better(w, bw)) {
                    pick = ei;
                    pick_back = at_back;
                } else if (w == bw) {
                    if (ei < pick) {
                        pick = ei;
                        pick_back = at_back;
                    } else if (ei == pick && at_back) {
                        pick_back = true;  // same edge reachable from both ends
                    }
                }
            };
            for (int ei : g.adjacency[back]) consider(ei, true);
            for (int ei : g.adjacency[front]) consider(ei, false);
            if (pick < 0) break;
            if (pick_back) {
                walk.push_back(g.other_end(pick, back));
                walk_edges.push_back(pick);
            } else {
                walk.push_front(g.other_end(pick, front));
                walk_edges.push_front(pick);
            }
            length += g.edges[pick].weight;
            mark_used(pick);
            --edges_left;
        }

        Path p;
        p.nodes.assign(walk.begin(), walk.end());
        p.edge_ids.assign(walk_edges.begin(), walk_edges.end());
        p.length_mm = length;
        sol.paths.push_back(std::move(p));
    }

    sol.total_paths = static_cast<int>(sol.paths.size());
    sol.total_edges = m;
    for (const Path& p : sol.paths) sol.total_length_mm += p.length_mm;
    sol.score = score(sol);
    return sol;
}

double score(const Solution& s) {
    if (s.paths.empty()) throw ParamError("score: empty solution");
    double num = 0.0, total_len = 0.0;
    for (const Path& p : s.paths) {
        num += p.length_mm * p.num_edges();
        total_len += p.length_mm;
    }
    return num / (total_len * static_cast<double>(s.paths.size()));
}

double lts_percent(const Solution& s, int long_min_nodes) {
    if (s.paths.empty()) throw ParamError("lts_percent: empty solution");
    double long_len = 0.0, total_len = 0.0;
    for (const Path& p : s.paths) {
        total_len += p.length_mm;
        if (p.num_nodes() >= long_min_nodes) long_len += p.length_mm;
    }
    return 100.0 * long_len / total_len;
}

double oe_percent(const Solution& s, int long_min_nodes) {
    if (s.paths.empty()) throw ParamError("oe_percent: empty solution");
    double num = 0.0, total_len = 0.0;
    int total_edges = 0;
    for (const Path& p : s.paths) {
        total_len += p.length_mm;
        total_edges += p.num_edges();
        if (p.num_nodes() >= long_min_nodes) num += p.length_mm * p.num_edges();
    }
    return 100.0 * num / (total_len * static_cast<double>(total_edges));
}

PathClassCounts classify_paths(const Solution& s, int long_min_nodes, int medium_min_nodes) {
    if (medium_min_nodes > long_min_nodes)
        throw ParamError("classify_paths: medium threshold exceeds long threshold");
    PathClassCounts c;
    for (const Path& p : s.paths) {
        const int n = p.num_nodes();
        if (n >= long_min_nodes)
            ++c.long_count;
        else if (n >= medium_min_nodes)
            ++c.medium_count;
        else
            ++c.short_count;
    }
    return c;
}

void sort_paths_canonical(Solution& s) {
    std::sort(s.paths.begin(), s.paths.end(), [](const Path& a, const Path& b) {
        if (a.num_edges() != b.num_edges()) return a.num_edges() > b.num_edges();
        if (a.length_mm != b.length_mm) return a.length_mm > b.length_mm;
        if (a.nodes.front() != b.nodes.front()) return a.nodes.front() < b.nodes.front();
        return a.nodes < b.nodes;
    });
}

void verify_edge_partition(const LatticeGraph& g, const Solution& s) {
    std::vector<char> seen(g.edge_count(), 0);
    int covered = 0;
    for (size_t pi = 0; pi < s.paths.size(); ++pi) {
        const Path& p = s.paths[pi];
        if (p.edge_ids.empty() || p.nodes.size() != p.edge_ids.size() + 1)
            throw StructuralError("solution: path " + std::to_string(pi) + " malformed");
        for (size_t i = 0; i < p.edge_ids.size(); ++i) {
            const int ei = p.edge_ids[i];
            if (ei < 0 || ei >= g.edge_count())
                throw StructuralError("solution: edge id out of range");
            const GraphEdge& e = g.edges[ei];
            const NodeId a = p.nodes[i], b = p.nodes[i + 1];
            if (!((e.u == a && e.v == b) || (e.u == b && e.v == a)))
                throw StructuralError("solution: path " + std::to_string(pi) +
                                      " is not a connected walk at step " + std::to_string(i));
            if (seen[ei])
                throw StructuralError("solution: edge " + std::to_string(ei) + " covered twice");
            seen[ei] = 1;
            ++covered;
        }
    }
    if (covered != g.edge_count())
        throw StructuralError("solution: " + std::to_string(g.edge_count() - covered) +
                              " edges left uncovered");
}

namespace {

struct Extreme {
    double score = 0.0;
    int iteration = -1;
    Solution solution;
};

void take_best(Extreme& acc, const Extreme& cand) {
    if (acc.iteration < 0 || cand.score > acc.score ||
        (cand.score == acc.score && cand.iteration < acc.iteration))
        acc = cand;
}

void take_worst(Extreme& acc, const Extreme& cand) {
    if (acc.iteration < 0 || cand.score < acc.score ||
        (cand.score == acc.score && cand.iteration < acc.iteration))
        acc = cand;
}

}  // namespace

RunReport optimize(const LatticeGraph& g, const OptimizerConfig& cfg, int threads) {
    if (cfg.iterations < 1) throw ParamError("optimize: iterations must be >= 1");
    if (cfg.long_path_min_nodes < 1) throw ParamError("optimize: long_path_min_nodes must be >= 1");
    if (cfg.classify_medium_min_nodes > cfg.classify_long_min_nodes)
        throw ParamError("optimize: classify thresholds out of order");
    if (g.edge_count() == 0) throw ParamError("optimize: graph has no edges");

    int t = threads;
    if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
    t = std::clamp(t, 1, cfg.iterations);

    std::vector<double> scores(cfg.iterations, 0.0);
    std::vector<Extreme> local_best(t), local_worst(t);
    std::vector<std::exception_ptr> errors(t);

    auto run_range = [&](int ti, int lo, int hi) {
        try {
            for (int it = lo; it < hi; ++it) {
                Rng rng = Rng::for_stream(cfg.master_seed, static_cast<uint64_t>(it));
                Solution s = build_solution(g, cfg.mode, rng);
                scores[it] = s.score;
                take_best(local_best[ti], {s.score, it, s});
                take_worst(local_worst[ti], {s.score, it, std::move(s)});
            }
        } catch (...) {
            errors[ti] = std::current_exception();
        }
    };

    if (t == 1) {
        run_range(0, 0, cfg.iterations);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(t);
        for (int ti = 0; ti < t; ++ti) {
            const int lo = static_cast<int>(static_cast<int64_t>(cfg.iterations) * ti / t);
            const int hi = static_cast<int>(static_cast<int64_t>(cfg.iterations) * (ti + 1) / t);
            workers.emplace_back(run_range, ti, lo, hi);
        }
        for (auto& w : workers) w.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    Extreme best, worst;
    for (int ti = 0; ti < t; ++ti) {
        take_best(best, local_best[ti]);
        take_worst(worst, local_worst[ti]);
    }

    RunReport rep;
    rep.config = cfg;
    rep.best = std::move(best.solution);
    rep.worst = std::move(worst.solution);
    rep.best_iteration = best.iteration;
    rep.worst_iteration = worst.iteration;
    rep.per_iteration_scores = std::move(scores);
    sort_paths_canonical(rep.best);
    sort_paths_canonical(rep.worst);
    rep.lts_percent = lts_percent(rep.best, cfg.long_path_min_nodes);
    rep.oe_best_percent = oe_percent(rep.best, cfg.long_path_min_nodes);
    rep.oe_worst_percent = oe_percent(rep.worst, cfg.long_path_min_nodes);
    rep.classification =
        classify_paths(rep.best, cfg.classify_long_min_nodes, cfg.classify_medium_min_nodes);
    return rep;
}

}  // namespace gippo
