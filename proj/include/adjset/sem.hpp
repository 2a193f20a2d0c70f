#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "adjset/graph.hpp"
#include "adjset/reach.hpp"

namespace adjset {

// Linear SEM V = A V + e over a dag. coef(i, j) is the weight of edge i -> j,
// stored as A(j, i).
class LinearSem {
public:
    // Uses the given residual variances.
    LinearSem(MixedGraph dag, Eigen::MatrixXd a, Eigen::VectorXd resid_var);
    // Residual variances chosen so every variable has variance 1.
    static LinearSem standardized(MixedGraph dag, Eigen::MatrixXd a);

    const MixedGraph& dag() const noexcept { return dag_; }
    const Eigen::MatrixXd& a() const noexcept { return a_; }
    const Eigen::VectorXd& resid_var() const noexcept { return resid_; }
    double coef(NodeId from, NodeId to) const { return a_(to, from); }

private:
    MixedGraph dag_;
    Eigen::MatrixXd a_;
    Eigen::VectorXd resid_;
};

// Coefficients uniform in [0.2, 0.8], drawn in canonical edge order.
LinearSem random_sem(const MixedGraph& dag, std::uint64_t seed, bool standardized);

Eigen::MatrixXd covariance(const LinearSem& sem);

// Path-rule covariance of a standardized SEM (n <= 12).
double wright_covariance(const LinearSem& sem, NodeId i, NodeId j);

// E[y | do(x = values)], values listed in ascending node order of x.
double do_effect(const LinearSem& sem, const NodeSet& x, const std::vector<double>& values, NodeId y);

// Covariate-adjusted mean: the x-block of the regression of y on (x, z), times values.
double adjusted_estimate(const LinearSem& sem, const NodeSet& x, const std::vector<double>& values,
                         NodeId y, const NodeSet& z);

enum class WitnessCase {
    NonCausalOpenPath = 1, // collider-free proper non-causal path avoiding z
    MediatorInZ = 2,       // z meets a proper causal path
    BelowOutcome = 3,      // z holds a descendant of the outcome
    BelowMediator = 4,     // z holds a descendant of a mediator
    ColliderPath = 5,      // d-connecting proper non-causal path with colliders
};

struct AdversarialWitness {
    LinearSem sem;
    WitnessCase which;
    Path path;
    NodeId y;
    double do_value;
    double adjusted_value;
    double gap() const { return do_value - adjusted_value; }
};

// For a z rejected by the adjustment criterion, a SEM on which adjusting
// for z gives the wrong answer. Returns nothing when z is valid.
std::optional<AdversarialWitness> adversarial_sem(const MixedGraph& dag, const NodeSet& x,
                                                  const NodeSet& y, const NodeSet& z,
                                                  std::uint64_t seed = 1);

} // namespace adjset
