#include "kiteflow/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <queue>
#include <set>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "kiteflow/error.hpp"
#include "kiteflow/kernel.hpp"

namespace kiteflow
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<char> mask_of(int n, const std::vector<int>& vs, const char* what)
{
    std::vector<char> m(n, 0);
    for (int v : vs) {
        if (v < 0 || v >= n)
            throw Error(ErrorKind::InvalidArgument, std::string(what) + ": vertex " + std::to_string(v) + " out of range");
        m[v] = 1;
    }
    return m;
}

void require_disjoint(int n, const std::vector<int>& a, const std::vector<int>& b, const char* what)
{
    if (a.empty() || b.empty())
        throw Error(ErrorKind::InvalidArgument, std::string(what) + ": vertex sets must be nonempty");
    const auto ma = mask_of(n, a, what);
    for (int v : b)
        if (ma[v])
            throw Error(ErrorKind::InvalidArgument, std::string(what) + ": vertex sets must be disjoint");
}

/// Vertices reachable from `start` avoiding `blocked`.
std::vector<char> reach(const WeightedGraph& wg, const std::vector<int>& start, const std::vector<char>& blocked)
{
    std::vector<char> seen(wg.num_vertices, 0);
    std::deque<int> queue;
    for (int v : start)
        if (!blocked[v] && !seen[v]) {
            seen[v] = 1;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int e : wg.incident[v]) {
            const int w = wg.other(e, v);
            if (!blocked[w] && !seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
        }
    }
    return seen;
}

/// Harmonic extension on the vertices flagged `active`; fixed vertices keep `h`.
void harmonic_in_place(const WeightedGraph& wg, const std::vector<char>& fixed, const std::vector<char>& active,
                       Eigen::VectorXd& h)
{
    const int n = wg.num_vertices;
    std::vector<int> index(n, -1), unknowns;
    for (int v = 0; v < n; ++v)
        if (active[v] && !fixed[v]) {
            index[v] = static_cast<int>(unknowns.size());
            unknowns.push_back(v);
        }
    if (unknowns.empty())
        return;

    std::vector<int> anchors;
    for (int v = 0; v < n; ++v)
        if (active[v] && fixed[v])
            anchors.push_back(v);
    std::vector<char> not_active(n);
    for (int v = 0; v < n; ++v)
        not_active[v] = !active[v];
    const auto grounded = reach(wg, anchors, not_active);
    for (int v : unknowns)
        if (!grounded[v])
            throw Error(ErrorKind::SingularSystem,
                        "harmonic solve: vertex " + std::to_string(v) + " lies in a component without prescribed values");

    const auto m = static_cast<Eigen::Index>(unknowns.size());
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const int v = unknowns[i];
        double diag = 0.0;
        for (int e : wg.incident[v]) {
            const int w = wg.other(e, v);
            const double mu = wg.edges[e].mu;
            diag += mu;
            if (index[w] >= 0)
                trip.emplace_back(i, index[w], -mu);
            else
                rhs[i] += mu * h[w];
        }
        trip.emplace_back(i, i, diag);
    }
    Eigen::SparseMatrix<double> A(m, m);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() != Eigen::Success)
        throw Error(ErrorKind::SingularSystem, "harmonic solve: factorization failed");
    const Eigen::VectorXd x = ldlt.solve(rhs);
    for (Eigen::Index i = 0; i < m; ++i)
        h[unknowns[i]] = x[i];
}

/// min |eta|^2 subject to sum_{v in S} eta(v) >= 1 for each stored set S,
/// via dual coordinate ascent and an exact solve on the active set.
class SetProgram
{
public:
    explicit SetProgram(int n) : eta_(Eigen::VectorXd::Zero(n)) {}

    void add(std::vector<int> set)
    {
        sets_.push_back(std::move(set));
        lambda_.push_back(0.0);
    }

    int size() const { return static_cast<int>(sets_.size()); }
    const Eigen::VectorXd& eta() const { return eta_; }

    void solve()
    {
        sweep(50000, 1e-15);
        polish();
    }

private:
    double length(const std::vector<int>& s) const
    {
        double sum = 0.0;
        for (int v : s)
            sum += eta_[v];
        return sum;
    }

    void sweep(int max_sweeps, double tol)
    {
        for (int it = 0; it < max_sweeps; ++it) {
            double change = 0.0;
            for (std::size_t i = 0; i < sets_.size(); ++i) {
                const auto& s = sets_[i];
                const double step = std::max(-lambda_[i], (1.0 - length(s)) / static_cast<double>(s.size()));
                if (step == 0.0)
                    continue;
                lambda_[i] += step;
                for (int v : s)
                    eta_[v] += step;
                change = std::max(change, std::abs(step));
            }
            if (change < tol)
                break;
        }
    }

    void polish()
    {
        std::vector<int> active;
        for (std::size_t i = 0; i < sets_.size(); ++i)
            if (lambda_[i] > 0.0)
                active.push_back(static_cast<int>(i));
        if (active.empty())
            return;
        const auto k = static_cast<Eigen::Index>(active.size());
        Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(k, eta_.size());
        for (Eigen::Index a = 0; a < k; ++a)
            for (int v : sets_[active[a]])
                rows(a, v) = 1.0;
        const Eigen::MatrixXd gram = rows * rows.transpose();
        const Eigen::VectorXd lam =
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(gram).solve(Eigen::VectorXd::Ones(k));
        if ((lam.array() < -1e-12).any())
            return;
        const Eigen::VectorXd eta = rows.transpose() * lam;
        for (const auto& s : sets_) {
            double sum = 0.0;
            for (int v : s)
                sum += eta[v];
            if (sum < 1.0 - 1e-12)
                return;
        }
        eta_ = eta;
        for (auto& l : lambda_)
            l = 0.0;
        for (Eigen::Index a = 0; a < k; ++a)
            lambda_[active[a]] = std::max(0.0, lam[a]);
    }

    std::vector<std::vector<int>> sets_;
    std::vector<double> lambda_;
    Eigen::VectorXd eta_;
};

}  // namespace

WeightedGraph make_weighted_graph(int num_vertices, std::vector<WeightedEdge> edges)
{
    if (num_vertices < 0)
        throw Error(ErrorKind::InvalidArgument, "weighted graph: negative vertex count");
    WeightedGraph wg;
    wg.num_vertices = num_vertices;
    wg.incident.assign(num_vertices, {});
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& ed = edges[e];
        if (ed.u < 0 || ed.v < 0 || ed.u >= num_vertices || ed.v >= num_vertices || ed.u == ed.v)
            throw Error(ErrorKind::InvalidArgument, "weighted graph: bad edge " + std::to_string(e));
        if (!(ed.mu > 0.0) || !std::isfinite(ed.mu))
            throw Error(ErrorKind::InvalidArgument, "weighted graph: conductance must be positive and finite");
        wg.incident[ed.u].push_back(static_cast<int>(e));
        wg.incident[ed.v].push_back(static_cast<int>(e));
    }
    wg.edges = std::move(edges);
    return wg;
}

WeightedGraph conductances_from_pattern(const WhiteGraph& g, const Labelling& alpha, const Eigen::VectorXd& r)
{
    if (r.size() != g.num_vertices || !(r.array() > 0.0).all())
        throw Error(ErrorKind::MissingRadius, "conductances: radii must be positive on every vertex");
    std::vector<WeightedEdge> edges;
    edges.reserve(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto& we = g.edges[e];
        const double mu = 2.0 * f_theta_prime(alpha.alpha[static_cast<Eigen::Index>(e)],
                                              std::log(r[we.v1]) - std::log(r[we.v0]));
        edges.push_back({we.v0, we.v1, mu});
    }
    WeightedGraph wg = make_weighted_graph(g.num_vertices, std::move(edges));
    wg.boundary = g.boundary;
    return wg;
}

Eigen::VectorXd laplacian(const WeightedGraph& wg, const Eigen::VectorXd& h)
{
    if (h.size() != wg.num_vertices)
        throw Error(ErrorKind::InvalidArgument, "laplacian: one value per vertex expected");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(wg.num_vertices);
    for (const auto& e : wg.edges) {
        const double flow = e.mu * (h[e.v] - h[e.u]);
        out[e.u] += flow;
        out[e.v] -= flow;
    }
    return out;
}

Eigen::SparseMatrix<double> laplacian_matrix(const WeightedGraph& wg)
{
    std::vector<Eigen::Triplet<double>> trip;
    for (const auto& e : wg.edges) {
        trip.emplace_back(e.u, e.v, e.mu);
        trip.emplace_back(e.v, e.u, e.mu);
        trip.emplace_back(e.u, e.u, -e.mu);
        trip.emplace_back(e.v, e.v, -e.mu);
    }
    Eigen::SparseMatrix<double> L(wg.num_vertices, wg.num_vertices);
    L.setFromTriplets(trip.begin(), trip.end());
    return L;
}

double dirichlet_energy(const WeightedGraph& wg, const Eigen::VectorXd& h)
{
    double sum = 0.0;
    for (const auto& e : wg.edges)
        sum += e.mu * (h[e.u] - h[e.v]) * (h[e.u] - h[e.v]);
    return sum;
}

Eigen::VectorXd solve_harmonic(const WeightedGraph& wg, const std::vector<int>& fixed, const Eigen::VectorXd& values)
{
    if (fixed.empty())
        throw Error(ErrorKind::SingularSystem, "harmonic solve: no prescribed vertices");
    if (values.size() != static_cast<Eigen::Index>(fixed.size()))
        throw Error(ErrorKind::InvalidArgument, "harmonic solve: one value per prescribed vertex expected");
    const auto fmask = mask_of(wg.num_vertices, fixed, "harmonic solve");
    Eigen::VectorXd h = Eigen::VectorXd::Zero(wg.num_vertices);
    for (std::size_t k = 0; k < fixed.size(); ++k)
        h[fixed[k]] = values[static_cast<Eigen::Index>(k)];
    harmonic_in_place(wg, fmask, std::vector<char>(wg.num_vertices, 1), h);
    return h;
}

Eigen::VectorXd solve_harmonic(const WeightedGraph& wg, const Eigen::VectorXd& boundary_values_per_vertex)
{
    if (static_cast<int>(wg.boundary.size()) != wg.num_vertices)
        throw Error(ErrorKind::InvalidArgument, "harmonic solve: graph carries no boundary flags");
    std::vector<int> fixed;
    std::vector<double> vals;
    for (int v = 0; v < wg.num_vertices; ++v)
        if (wg.boundary[v]) {
            fixed.push_back(v);
            vals.push_back(boundary_values_per_vertex[v]);
        }
    return solve_harmonic(wg, fixed, Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size())));
}

double effective_resistance(const WeightedGraph& wg, const std::vector<int>& A, const std::vector<int>& Z)
{
    require_disjoint(wg.num_vertices, A, Z, "effective resistance");
    const std::vector<char> none(wg.num_vertices, 0);
    const auto from_a = reach(wg, A, none);
    if (std::none_of(Z.begin(), Z.end(), [&](int z) { return from_a[z]; }))
        return kInf;
    std::vector<int> both = A;
    both.insert(both.end(), Z.begin(), Z.end());
    const auto active = reach(wg, both, none);
    std::vector<char> fixed(wg.num_vertices, 0);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(wg.num_vertices);
    for (int a : A)
        fixed[a] = 1;
    for (int z : Z) {
        fixed[z] = 1;
        h[z] = 1.0;
    }
    harmonic_in_place(wg, fixed, active, h);
    double energy = 0.0;
    for (const auto& e : wg.edges)
        if (active[e.u])
            energy += e.mu * (h[e.u] - h[e.v]) * (h[e.u] - h[e.v]);
    return 1.0 / energy;
}

double shortest_vertex_path(const WeightedGraph& wg, const Eigen::VectorXd& eta, const std::vector<int>& V1,
                            const std::vector<int>& V2, std::vector<int>* path)
{
    const int n = wg.num_vertices;
    std::vector<double> dist(n, kInf);
    std::vector<int> pred(n, -1);
    std::vector<char> done(n, 0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (int v : V1)
        if (eta[v] < dist[v]) {
            dist[v] = eta[v];
            heap.emplace(dist[v], v);
        }
    const auto target = mask_of(n, V2, "shortest path");
    int best = -1;
    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (done[v])
            continue;
        done[v] = 1;
        if (target[v]) {
            best = v;
            break;
        }
        for (int e : wg.incident[v]) {
            const int w = wg.other(e, v);
            const double nd = d + eta[w];
            if (!done[w] && nd < dist[w]) {
                dist[w] = nd;
                pred[w] = v;
                heap.emplace(nd, w);
            }
        }
    }
    if (best < 0)
        return kInf;
    if (path) {
        path->clear();
        for (int v = best; v >= 0; v = pred[v])
            path->push_back(v);
        std::reverse(path->begin(), path->end());
    }
    return dist[best];
}

VelResult vel(const WeightedGraph& wg, const std::vector<int>& V1, const std::vector<int>& V2, const VelOptions& opts)
{
    require_disjoint(wg.num_vertices, V1, V2, "vel");
    SetProgram qp(wg.num_vertices);
    std::set<std::vector<int>> seen;
    VelResult res;
    std::vector<int> path;
    double len = 0.0;
    for (;;) {
        len = shortest_vertex_path(wg, qp.eta(), V1, V2, &path);
        if (std::isinf(len))
            throw Error(ErrorKind::NoPath, "vel: V2 is not reachable from V1");
        if (len >= 1.0 - opts.tol)
            break;
        if (++res.rounds > opts.max_rounds)
            throw Error(ErrorKind::NoConvergence, "vel: constraint generation did not settle");
        std::vector<int> key = path;
        std::sort(key.begin(), key.end());
        if (seen.insert(key).second)
            qp.add(path);
        qp.solve();
    }
    res.eta = qp.eta() / len;
    res.min_path_length = shortest_vertex_path(wg, res.eta, V1, V2);
    res.mod = res.eta.squaredNorm();
    res.vel = 1.0 / res.mod;
    res.constraints = qp.size();
    return res;
}

Eigen::VectorXd modulus_of_sets(int num_vertices, const std::vector<std::vector<int>>& sets)
{
    SetProgram qp(num_vertices);
    for (const auto& s : sets) {
        if (s.empty())
            throw Error(ErrorKind::InvalidArgument, "modulus: empty set admits no function");
        qp.add(s);
    }
    qp.solve();
    return qp.eta();
}

DualityReport vel_duality_check(const WeightedGraph& wg, const std::vector<int>& V1, const std::vector<int>& V2)
{
    const int n = wg.num_vertices;
    if (n > kDualityMaxVertices)
        throw Error(ErrorKind::TooLarge, "duality check: at most " + std::to_string(kDualityMaxVertices) + " vertices");
    require_disjoint(n, V1, V2, "duality check");
    const auto in1 = mask_of(n, V1, "duality check");
    const auto in2 = mask_of(n, V2, "duality check");
    DualityReport rep;

    // simple paths, ending at the first V2 vertex and never re-entering V1
    std::set<unsigned> path_masks;
    std::vector<char> on(n, 0);
    auto dfs = [&](auto&& self, int v, unsigned mask) -> void {
        if (in2[v]) {
            path_masks.insert(mask);
            if (path_masks.size() > 1000000)
                throw Error(ErrorKind::TooLarge, "duality check: too many paths");
            return;
        }
        for (int e : wg.incident[v]) {
            const int w = wg.other(e, v);
            if (on[w] || in1[w])
                continue;
            on[w] = 1;
            self(self, w, mask | (1u << w));
            on[w] = 0;
        }
    };
    for (int s : V1) {
        on[s] = 1;
        dfs(dfs, s, 1u << s);
        on[s] = 0;
    }
    if (path_masks.empty()) {
        rep.degenerate = true;
        return rep;
    }

    auto sets_of = [&](const std::vector<unsigned>& masks) {
        std::vector<std::vector<int>> out;
        for (unsigned m : masks) {
            std::vector<int> s;
            for (int v = 0; v < n; ++v)
                if (m & (1u << v))
                    s.push_back(v);
            out.push_back(std::move(s));
        }
        return out;
    };
    auto minimal = [](const std::vector<unsigned>& masks) {
        std::vector<unsigned> out;
        for (unsigned m : masks)
            if (std::none_of(masks.begin(), masks.end(), [&](unsigned o) { return o != m && (o & m) == o; }))
                out.push_back(m);
        return out;
    };

    const auto paths = minimal({path_masks.begin(), path_masks.end()});
    rep.num_paths = static_cast<int>(paths.size());
    rep.mod_paths = modulus_of_sets(n, sets_of(paths)).squaredNorm();

    const unsigned full = 1u << n;
    std::vector<char> sep(full, 0);
    for (unsigned m = 0; m < full; ++m) {
        std::vector<char> blocked(n);
        for (int v = 0; v < n; ++v)
            blocked[v] = (m >> v) & 1u;
        const auto r = reach(wg, V1, blocked);
        sep[m] = std::none_of(V2.begin(), V2.end(), [&](int z) { return r[z] != 0; });
    }
    std::vector<unsigned> separating;
    for (unsigned m = 0; m < full; ++m) {
        if (!sep[m])
            continue;
        bool is_min = true;
        for (int v = 0; v < n && is_min; ++v)
            if ((m & (1u << v)) && sep[m ^ (1u << v)])
                is_min = false;
        if (is_min)
            separating.push_back(m);
    }
    rep.num_separating = static_cast<int>(separating.size());
    rep.mod_separating = modulus_of_sets(n, sets_of(separating)).squaredNorm();
    rep.product = rep.mod_paths * rep.mod_separating;
    return rep;
}

bool separates(const WeightedGraph& wg, const std::vector<int>& V1, const std::vector<int>& V2,
               const std::vector<int>& V3)
{
    const auto blocked = mask_of(wg.num_vertices, V2, "separates");
    const auto r = reach(wg, V1, blocked);
    return std::none_of(V3.begin(), V3.end(), [&](int v) { return r[v] != 0; });
}

ConductanceSumReport conductance_sum_report(const WeightedGraph& wg)
{
    ConductanceSumReport rep;
    rep.per_vertex = Eigen::VectorXd::Zero(wg.num_vertices);
    for (const auto& e : wg.edges) {
        rep.per_vertex[e.u] += e.mu;
        rep.per_vertex[e.v] += e.mu;
    }
    for (int v = 0; v < wg.num_vertices; ++v) {
        rep.finite = rep.finite && std::isfinite(rep.per_vertex[v]);
        if (rep.argmax < 0 || rep.per_vertex[v] > rep.max) {
            rep.max = rep.per_vertex[v];
            rep.argmax = v;
        }
    }
    return rep;
}

VelReffReport vel_reff_bound(const WeightedGraph& wg, const std::vector<int>& V1, const std::vector<int>& V2)
{
    VelReffReport rep;
    rep.C4 = conductance_sum_report(wg).max;
    rep.reff = effective_resistance(wg, V1, V2);
    rep.vel = vel(wg, V1, V2).vel;
    rep.holds = rep.vel <= 2.0 * rep.C4 * rep.reff + 1e-9;
    return rep;
}

std::vector<double> annuli_resistance_profile(const WeightedGraph& wg, const CirclePattern& p, int v0,
                                              const std::vector<double>& radii)
{
    if (v0 < 0 || v0 >= wg.num_vertices || static_cast<int>(p.center.size()) != wg.num_vertices)
        throw Error(ErrorKind::InvalidArgument, "annuli profile: pattern does not match the graph");
    std::vector<double> out;
    for (double R : radii) {
        std::vector<int> outside;
        for (int v = 0; v < wg.num_vertices; ++v)
            if (v != v0 && (p.center[v] - p.center[v0]).norm() >= R)
                outside.push_back(v);
        out.push_back(outside.empty() ? kInf : effective_resistance(wg, {v0}, outside));
    }
    return out;
}

Constants network_constants(double alpha0, double N, double C1)
{
    if (!(alpha0 > 0.0 && alpha0 < std::numbers::pi))
        throw Error(ErrorKind::AngleOutOfRange, "constants: alpha0 must lie in (0, pi)");
    Constants c;
    c.C0 = 1.0 / std::sin(alpha0);
    c.C2 = 1.0 / (48.0 * c.C0 * c.C0 * N + 16.0 * C1 * C1 * std::numbers::pi * std::numbers::pi);
    c.C6 = 9.0 / (4.0 * c.C2);
    return c;
}

}  // namespace kiteflow
