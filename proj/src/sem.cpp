#include "adjset/sem.hpp"

#include <cmath>
#include <deque>
#include <functional>
#include <random>

#include "adjset/adjustment.hpp"

namespace adjset {

namespace {

constexpr double kMinResidual = 0.01;

void require_dag(const MixedGraph& g) {
    if (g.graph_class() != GraphClass::Dag) throw Error(ErrorKind::NotADag, "a linear SEM needs a dag");
}

void check_support(const MixedGraph& dag, const Eigen::MatrixXd& a) {
    const auto n = static_cast<Eigen::Index>(dag.size());
    if (a.rows() != n || a.cols() != n)
        throw Error(ErrorKind::InvalidArgument, "coefficient matrix has the wrong shape");
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            if (a(j, i) != 0.0 && !dag.has_directed(static_cast<NodeId>(i), static_cast<NodeId>(j)))
                throw Error(ErrorKind::InvalidArgument, "coefficient on a missing edge");
}

// Residual variances giving unit variances; throws if some node has none left.
Eigen::VectorXd unit_residuals(const MixedGraph& dag, const Eigen::MatrixXd& a) {
    const auto n = static_cast<Eigen::Index>(dag.size());
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd resid(n);
    for (NodeId v : topological_order(dag)) {
        const Eigen::RowVectorXd row = a.row(v);
        // Covariance of v with every node already placed (others are zero rows).
        Eigen::RowVectorXd c = row * sigma;
        double explained = c.dot(row);
        resid(v) = 1.0 - explained;
        if (resid(v) <= 0.0)
            throw Error(ErrorKind::NotStandardized,
                        "coefficients into '" + dag.name(v) + "' explain all of its variance");
        sigma.row(v) = c;
        sigma.col(v) = c.transpose();
        sigma(v, v) = 1.0;
    }
    return resid;
}

} // namespace

LinearSem::LinearSem(MixedGraph dag, Eigen::MatrixXd a, Eigen::VectorXd resid_var)
    : dag_(std::move(dag)), a_(std::move(a)), resid_(std::move(resid_var)) {
    require_dag(dag_);
    check_support(dag_, a_);
    if (resid_.size() != static_cast<Eigen::Index>(dag_.size()) || (resid_.array() <= 0.0).any())
        throw Error(ErrorKind::InvalidArgument, "residual variances must be positive");
}

LinearSem LinearSem::standardized(MixedGraph dag, Eigen::MatrixXd a) {
    require_dag(dag);
    check_support(dag, a);
    Eigen::VectorXd resid = unit_residuals(dag, a);
    return LinearSem(std::move(dag), std::move(a), std::move(resid));
}

LinearSem random_sem(const MixedGraph& dag, std::uint64_t seed, bool standardized) {
    require_dag(dag);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> weight(0.2, 0.8);
    const auto n = static_cast<Eigen::Index>(dag.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : dag.edges()) {
        NodeId from = e.mark_a == Mark::Tail ? e.a : e.b;
        a(e.other(from), from) = weight(rng);
    }
    if (!standardized) {
        std::uniform_real_distribution<double> var(0.5, 1.5);
        Eigen::VectorXd resid(n);
        for (Eigen::Index i = 0; i < n; ++i) resid(i) = var(rng);
        return LinearSem(dag, std::move(a), std::move(resid));
    }
    // Shrink the weights into any node whose parents would leave it under 10% residual variance.
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(n, n);
    for (NodeId v : topological_order(dag)) {
        Eigen::RowVectorXd row = a.row(v);
        double explained = (row * sigma).dot(row);
        if (explained > 0.9) a.row(v) *= std::sqrt(0.9 / explained);
        row = a.row(v);
        Eigen::RowVectorXd c = row * sigma;
        sigma.row(v) = c;
        sigma.col(v) = c.transpose();
        sigma(v, v) = 1.0;
    }
    return LinearSem::standardized(dag, std::move(a));
}

Eigen::MatrixXd covariance(const LinearSem& sem) {
    const auto n = static_cast<Eigen::Index>(sem.dag().size());
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - sem.a();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (!lu.isInvertible()) throw Error(ErrorKind::SingularSystem, "I - A is singular");
    const Eigen::MatrixXd inv = lu.inverse();
    Eigen::MatrixXd sigma = inv * sem.resid_var().asDiagonal() * inv.transpose();
    sigma = 0.5 * (sigma + sigma.transpose());
    if (n > 0 && Eigen::LLT<Eigen::MatrixXd>(sigma).info() != Eigen::Success)
        throw Error(ErrorKind::SingularSystem, "covariance is not positive definite");
    return sigma;
}

double wright_covariance(const LinearSem& sem, NodeId i, NodeId j) {
    const MixedGraph& g = sem.dag();
    if (g.size() > 12) throw Error(ErrorKind::GraphTooLarge, "path rule is limited to 12 nodes");
    const Eigen::MatrixXd sigma = covariance(sem);
    for (Eigen::Index k = 0; k < sigma.rows(); ++k)
        if (std::abs(sigma(k, k) - 1.0) > 1e-9)
            throw Error(ErrorKind::NotStandardized, "SEM is not standardized");
    if (i == j) return 1.0;

    double total = 0.0;
    std::vector<bool> on(g.size(), false);
    // went_down: the walk already moved along an edge in its direction.
    std::function<void(NodeId, bool, double)> walk = [&](NodeId v, bool went_down, double product) {
        if (v == j) {
            total += product;
            return;
        }
        for (const auto& inc : g.incident(v)) {
            const NodeId w = inc.neighbor;
            if (on[w]) continue;
            const bool down = inc.there == Mark::Arrow;
            if (went_down && !down) continue; // would make v a collider
            const double c = down ? sem.coef(v, w) : sem.coef(w, v);
            on[w] = true;
            walk(w, went_down || down, product * c);
            on[w] = false;
        }
    };
    on[i] = true;
    walk(i, false, 1.0);
    return total;
}

double do_effect(const LinearSem& sem, const NodeSet& x, const std::vector<double>& values, NodeId y) {
    const MixedGraph& g = sem.dag();
    if (values.size() != x.size())
        throw Error(ErrorKind::InvalidArgument, "one value per intervened node is needed");
    std::vector<double> mean(g.size(), 0.0);
    std::vector<double> fixed(g.size(), 0.0);
    std::size_t k = 0;
    for (NodeId v : x) fixed[v] = values[k++];
    for (NodeId v : topological_order(g)) {
        if (x.contains(v)) {
            mean[v] = fixed[v];
            continue;
        }
        double m = 0.0;
        for (const auto& inc : g.incident(v))
            if (inc.here == Mark::Arrow) m += sem.coef(inc.neighbor, v) * mean[inc.neighbor];
        mean[v] = m;
    }
    return mean[y];
}

double adjusted_estimate(const LinearSem& sem, const NodeSet& x, const std::vector<double>& values,
                         NodeId y, const NodeSet& z) {
    if (values.size() != x.size())
        throw Error(ErrorKind::InvalidArgument, "one value per exposure is needed");
    const Eigen::MatrixXd sigma = covariance(sem);
    std::vector<NodeId> w = x.to_vector();
    for (NodeId v : z) w.push_back(v);
    const auto k = static_cast<Eigen::Index>(w.size());
    Eigen::MatrixXd sww(k, k);
    Eigen::VectorXd swy(k);
    for (Eigen::Index r = 0; r < k; ++r) {
        swy(r) = sigma(w[r], y);
        for (Eigen::Index c = 0; c < k; ++c) sww(r, c) = sigma(w[r], w[c]);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(sww);
    if (llt.info() != Eigen::Success || llt.rcond() < 1e-13)
        throw Error(ErrorKind::SingularRegression, "covariance of exposures and covariates is singular");
    const Eigen::VectorXd beta = llt.solve(swy);
    double out = 0.0;
    for (std::size_t r = 0; r < values.size(); ++r) out += beta(static_cast<Eigen::Index>(r)) * values[r];
    return out;
}

namespace {

bool is_directed_path(const MixedGraph& g, const Path& p) {
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i)
        if (!g.has_directed(p.nodes[i], p.nodes[i + 1])) return false;
    return true;
}

// Shortest directed path from some source to some target (length 0 if a source is a target).
std::optional<Path> shortest_directed(const MixedGraph& g, const std::vector<NodeId>& sources,
                                      const NodeSet& targets) {
    const std::size_t n = g.size();
    std::vector<NodeId> parent(n, static_cast<NodeId>(n));
    std::vector<bool> seen(n, false);
    std::deque<NodeId> queue;
    for (NodeId s : sources) {
        seen[s] = true;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        NodeId v = queue.front();
        queue.pop_front();
        if (targets.contains(v)) {
            Path p;
            for (NodeId u = v; u != n; u = parent[u]) p.nodes.push_back(u);
            std::reverse(p.nodes.begin(), p.nodes.end());
            return p;
        }
        for (const auto& inc : g.incident(v))
            if (inc.here == Mark::Tail && inc.there == Mark::Arrow && !seen[inc.neighbor]) {
                seen[inc.neighbor] = true;
                parent[inc.neighbor] = v;
                queue.push_back(inc.neighbor);
            }
    }
    return std::nullopt;
}

struct Choice {
    WitnessCase which;
    Path p;
    std::vector<Path> extra;
};

std::optional<Choice> pick_paths(const MixedGraph& g, const NodeSet& x, const NodeSet& y,
                                 const NodeSet& z) {
    const std::size_t n = g.size();
    const NodeSet an_z = ancestors(g, z);
    std::optional<Path> open_free, mediator, below_y, below_mid, collider;
    std::size_t best_colliders = n + 1;
    auto shorter = [](const std::optional<Path>& cur, const Path& p) {
        return !cur || p.nodes.size() < cur->nodes.size();
    };

    for_each_path(g, x, y, true, false, [&](const Path& p) {
        const NodeId end = p.back();
        if (is_directed_path(g, p)) {
            bool hits = false;
            for (std::size_t i = 1; i + 1 < p.nodes.size(); ++i) hits |= z.contains(p.nodes[i]);
            if (hits) {
                if (shorter(mediator, p)) mediator = p;
                return true;
            }
            if (descendants(g, NodeSet(n, {end})).intersects(z)) {
                if (shorter(below_y, p)) below_y = p;
                return true;
            }
            for (std::size_t i = 1; i + 1 < p.nodes.size(); ++i)
                if (an_z.contains(p.nodes[i])) {
                    if (shorter(below_mid, p)) below_mid = p;
                    break;
                }
            return true;
        }
        std::size_t colliders = 0;
        bool open = true;
        for (std::size_t i = 1; i + 1 < p.nodes.size() && open; ++i) {
            const NodeId v = p.nodes[i];
            if (status_at(g, p, i) == NodeStatus::Collider) {
                ++colliders;
                open = an_z.contains(v);
            } else {
                open = !z.contains(v);
            }
        }
        if (!open) return true;
        if (colliders == 0) {
            if (shorter(open_free, p)) open_free = p;
        } else if (colliders < best_colliders ||
                   (colliders == best_colliders && p.nodes.size() < collider->nodes.size())) {
            best_colliders = colliders;
            collider = p;
        }
        return true;
    });

    if (open_free) return Choice{WitnessCase::NonCausalOpenPath, *open_free, {}};
    if (mediator) return Choice{WitnessCase::MediatorInZ, *mediator, {}};
    if (below_y) {
        auto q = shortest_directed(g, {below_y->back()}, z);
        return Choice{WitnessCase::BelowOutcome, *below_y, {*q}};
    }
    if (below_mid) {
        std::vector<NodeId> interior(below_mid->nodes.begin() + 1, below_mid->nodes.end() - 1);
        auto q = shortest_directed(g, interior, z);
        return Choice{WitnessCase::BelowMediator, *below_mid, {*q}};
    }
    if (collider) {
        Choice c{WitnessCase::ColliderPath, *collider, {}};
        for (std::size_t i = 1; i + 1 < collider->nodes.size(); ++i)
            if (status_at(g, *collider, i) == NodeStatus::Collider)
                c.extra.push_back(*shortest_directed(g, {collider->nodes[i]}, z));
        return c;
    }
    return std::nullopt;
}

} // namespace

std::optional<AdversarialWitness> adversarial_sem(const MixedGraph& dag, const NodeSet& x,
                                                  const NodeSet& y, const NodeSet& z,
                                                  std::uint64_t seed) {
    require_dag(dag);
    if (gac_verify(dag, x, y, z).ok) return std::nullopt;
    auto choice = pick_paths(dag, x, y, z);
    if (!choice) throw Error(ErrorKind::NoWitnessFound, "no witnessing path for a rejected set");

    // Edges carrying weight: those of the chosen paths, each counted once.
    std::vector<std::pair<NodeId, NodeId>> used;
    auto add_path = [&](const Path& p) {
        for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
            NodeId u = p.nodes[i], v = p.nodes[i + 1];
            std::pair<NodeId, NodeId> e = dag.has_directed(u, v) ? std::pair{u, v} : std::pair{v, u};
            if (std::find(used.begin(), used.end(), e) == used.end()) used.push_back(e);
        }
    };
    add_path(choice->p);
    for (const auto& q : choice->extra) add_path(q);

    const auto n = static_cast<Eigen::Index>(dag.size());
    const std::vector<double> ones(x.size(), 1.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> weight(0.5, 0.75);
    for (int attempt = 0; attempt < 100; ++attempt) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (auto [from, to] : used) a(to, from) = weight(rng);
        std::optional<LinearSem> sem;
        try {
            sem = LinearSem::standardized(dag, a);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::NotStandardized) continue;
            throw;
        }
        if ((sem->resid_var().array() <= kMinResidual).any()) continue;

        std::optional<AdversarialWitness> best;
        for (NodeId t : y) {
            double d, adj;
            try {
                d = do_effect(*sem, x, ones, t);
                adj = adjusted_estimate(*sem, x, ones, t, z);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::SingularRegression) continue;
                throw;
            }
            if (!best || std::abs(d - adj) > std::abs(best->gap()))
                best = AdversarialWitness{*sem, choice->which, choice->p, t, d, adj};
        }
        if (best && std::abs(best->gap()) > 1e-6) return best;
    }
    throw Error(ErrorKind::NoWitnessFound, "no SEM separated the adjusted and causal means");
}

} // namespace adjset
