#ifndef VOTERLAB_ORACLE_HPP
#define VOTERLAB_ORACLE_HPP

//! \file oracle.hpp
//! Exact small-instance computations used to check the sampler:
//!  - harmonic measure of the 1-boundary (single walk exit law),
//!  - the two-walker absorbing chain under the fair-coin scheduler, which gives
//!    pair coalescence probabilities, joint vote probabilities and the
//!    independent-walk cross term,
//!  - the exact stationary law of the voter chain for tiny boxes.
//!
//! The harmonic and pair systems are symmetric positive definite (the
//! uniform six-neighbour step is symmetric), so they are solved with
//! conjugate gradients and then re-checked by explicit residuals.

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"

namespace voterlab {

inline constexpr double kFieldTolerance = 1e-10;
inline constexpr double kIdentityTolerance = 1e-8;

struct OracleCaps {
    int max_pair_interior = 196;       // L <= 16
    int max_stationary_interior = 12;  // 2^12 configurations
};

namespace detail {

using SparseMatrix = Eigen::SparseMatrix<double>;

inline Eigen::VectorXd solve_spd(const SparseMatrix& A, const Eigen::VectorXd& b, const char* what) {
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-15);
    cg.setMaxIterations(std::max<Eigen::Index>(1000, 20 * A.rows()));
    cg.compute(A);
    Eigen::VectorXd x = cg.solve(b);
    const double residual = (A * x - b).cwiseAbs().maxCoeff();
    if (!std::isfinite(residual) || residual >= kFieldTolerance) {
        throw NumericError(std::string(what) + ": linear solve did not converge", residual);
    }
    return x;
}

// Dense numbering of interior sites, row-major.
class InteriorIndex {
  public:
    explicit InteriorIndex(const BoxGeometry& g) : of_site_(g.num_sites(), -1) {
        for (const Site& s : g.interior_sites()) {
            of_site_[g.index(s)] = static_cast<int>(sites_.size());
            sites_.push_back(g.index(s));
        }
    }
    int size() const noexcept { return static_cast<int>(sites_.size()); }
    int of(int site_index) const noexcept { return of_site_[site_index]; }
    int site(int k) const noexcept { return sites_[k]; }

  private:
    std::vector<int> of_site_;
    std::vector<int> sites_;
};

}  // namespace detail

// Probability that a simple random walk from each site first exits through the
// 1-boundary. Stored over the whole box; boundary entries hold the fixed vote.
class HarmonicField {
  public:
    HarmonicField(BoxGeometry g, std::vector<double> values, double residual)
        : geometry_(std::move(g)), values_(std::move(values)), residual_(residual) {}

    const BoxGeometry& geometry() const noexcept { return geometry_; }
    double operator[](int site_index) const noexcept { return values_[site_index]; }
    double at(const Site& s) const {
        if (!geometry_.contains(s)) throw DomainError("site " + to_string(s) + " outside box");
        return values_[geometry_.index(s)];
    }
    const std::vector<double>& values() const noexcept { return values_; }
    double max_residual() const noexcept { return residual_; }

  private:
    BoxGeometry geometry_;
    std::vector<double> values_;
    double residual_;
};

inline HarmonicField harmonic_measure(const BoxGeometry& g) {
    const detail::InteriorIndex idx(g);
    const int n = idx.size();
    const auto& off = g.index_offsets();

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(n) * 7);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < n; ++k) {
        const int s = idx.site(k);
        triplets.emplace_back(k, k, 1.0);
        for (int d : off) {
            const int t = s + d;
            if (g.is_boundary(t)) {
                rhs[k] += g.fixed_vote(t) / 6.0;
            } else {
                triplets.emplace_back(k, idx.of(t), -1.0 / 6.0);
            }
        }
    }
    detail::SparseMatrix A(n, n);
    A.setFromTriplets(triplets.begin(), triplets.end());
    const Eigen::VectorXd h = detail::solve_spd(A, rhs, "harmonic measure");

    std::vector<double> values(g.num_sites());
    for (int s = 0; s < g.num_sites(); ++s) values[s] = g.fixed_vote(s);
    for (int k = 0; k < n; ++k) values[idx.site(k)] = h[k];

    double residual = 0.0;
    for (int k = 0; k < n; ++k) {
        const int s = idx.site(k);
        double mean = 0.0;
        for (int d : off) mean += values[s + d];
        residual = std::max(residual, std::abs(values[s] - mean / 6.0));
    }
    if (residual >= kFieldTolerance) throw NumericError("harmonic measure residual too large", residual);
    return HarmonicField(g, std::move(values), residual);
}

struct PairChainResult {
    double coalesce_prob = 0.0;     // P(walks meet before either exits)
    double joint_11 = 0.0;          // P(both votes 1) for coalescing walks
    double indep_cross_term = 0.0;  // P(S1 exits at 1, S2 exits at 0, met first), independent walks
};

// Two walkers under the fair-coin scheduler: each step one of the two, chosen
// by a fair coin, moves to a uniform neighbour. Transient states are ordered
// pairs (a, b) of distinct interior sites; a pair is absorbed when the mover
// lands on the other walker or on the boundary. One sparse system, three
// right-hand sides.
class PairChain {
  public:
    explicit PairChain(const BoxGeometry& g, const OracleCaps& caps = {})
        : geometry_(g), index_(g), harmonic_(harmonic_measure(g)) {
        const int n = index_.size();
        if (n > caps.max_pair_interior) {
            throw SizeCapError("pair chain: interior of " + std::to_string(n) + " sites too large",
                               caps.max_pair_interior);
        }
        solve();
    }

    const BoxGeometry& geometry() const noexcept { return geometry_; }
    const HarmonicField& harmonic() const noexcept { return harmonic_; }

    PairChainResult at(const Site& x, const Site& y) const {
        const int a = interior_id(x);
        const int b = interior_id(y);
        if (a == b) {
            const double h = harmonic_[index_.site(a)];
            return {1.0, h, h * (1.0 - h)};
        }
        const auto k = static_cast<Eigen::Index>(state(a, b));
        return {coalesce_[k], joint_[k], cross_[k]};
    }

    double max_residual() const noexcept { return residual_; }

  private:
    int interior_id(const Site& s) const {
        if (!geometry_.contains(s) || geometry_.is_boundary(s)) {
            throw DomainError("pair chain: " + to_string(s) + " is not an interior site");
        }
        return index_.of(geometry_.index(s));
    }

    int state(int a, int b) const noexcept {
        const int n = index_.size();
        return a * (n - 1) + (b < a ? b : b - 1);
    }

    void solve() {
        const int n = index_.size();
        const int states = n * (n - 1);
        if (states == 0) {
            residual_ = 0.0;
            return;
        }
        const auto& off = geometry_.index_offsets();
        constexpr double w = 1.0 / 12.0;

        std::vector<Eigen::Triplet<double>> triplets;
        triplets.reserve(static_cast<std::size_t>(states) * 13);
        Eigen::VectorXd rhs_meet = Eigen::VectorXd::Zero(states);
        Eigen::VectorXd rhs_joint = Eigen::VectorXd::Zero(states);
        Eigen::VectorXd rhs_cross = Eigen::VectorXd::Zero(states);

        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (a == b) continue;
                const int k = state(a, b);
                triplets.emplace_back(k, k, 1.0);
                const int sa = index_.site(a);
                const int sb = index_.site(b);
                for (int mover = 0; mover < 2; ++mover) {
                    const int from = mover == 0 ? sa : sb;
                    const int other = mover == 0 ? sb : sa;
                    for (int d : off) {
                        const int to = from + d;
                        if (to == other) {
                            const double h = harmonic_[other];
                            rhs_meet[k] += w;
                            rhs_joint[k] += w * h;
                            rhs_cross[k] += w * h * (1.0 - h);
                        } else if (geometry_.is_boundary(to)) {
                            rhs_joint[k] += w * geometry_.fixed_vote(to) * harmonic_[other];
                        } else {
                            const int next = mover == 0 ? state(index_.of(to), b) : state(a, index_.of(to));
                            triplets.emplace_back(k, next, -w);
                        }
                    }
                }
            }
        }
        detail::SparseMatrix A(states, states);
        A.setFromTriplets(triplets.begin(), triplets.end());
        coalesce_ = detail::solve_spd(A, rhs_meet, "pair chain (coalescence)");
        joint_ = detail::solve_spd(A, rhs_joint, "pair chain (joint votes)");
        cross_ = detail::solve_spd(A, rhs_cross, "pair chain (independent cross term)");
        residual_ = std::max({(A * coalesce_ - rhs_meet).cwiseAbs().maxCoeff(),
                              (A * joint_ - rhs_joint).cwiseAbs().maxCoeff(),
                              (A * cross_ - rhs_cross).cwiseAbs().maxCoeff()});
    }

    BoxGeometry geometry_;
    detail::InteriorIndex index_;
    HarmonicField harmonic_;
    Eigen::VectorXd coalesce_;
    Eigen::VectorXd joint_;
    Eigen::VectorXd cross_;
    double residual_ = 0.0;
};

inline double pair_coalescence_prob(const BoxGeometry& g, const Site& x, const Site& y,
                                    const OracleCaps& caps = {}) {
    return PairChain(g, caps).at(x, y).coalesce_prob;
}

// E|C_L(x)| = sum over interior y of P(walks from x and y meet before exiting).
inline double expected_class_size_exact(const PairChain& chain, const Site& x) {
    double total = 0.0;
    for (const Site& y : chain.geometry().interior_sites()) total += chain.at(x, y).coalesce_prob;
    return total;
}

inline double expected_class_size_exact(const BoxGeometry& g, const Site& x, const OracleCaps& caps = {}) {
    return expected_class_size_exact(PairChain(g, caps), x);
}

// Cov(V(x), V(y)) for the stationary voter model, computed both as
// joint_11 - h(x)h(y) and as the independent-walk cross term; the two must agree.
inline double joint_vote_cov_exact(const PairChain& chain, const Site& x, const Site& y) {
    const PairChainResult r = chain.at(x, y);
    const double hx = chain.harmonic().at(x);
    const double hy = chain.harmonic().at(y);
    const double via_joint = r.joint_11 - hx * hy;
    const double via_cross = r.indep_cross_term;
    if (std::abs(via_joint - via_cross) > kIdentityTolerance) {
        throw ConsistencyError("covariance routes disagree: " + std::to_string(via_joint) + " vs " +
                               std::to_string(via_cross));
    }
    return via_cross;
}

inline double joint_vote_cov_exact(const BoxGeometry& g, const Site& x, const Site& y,
                                   const OracleCaps& caps = {}) {
    return joint_vote_cov_exact(PairChain(g, caps), x, y);
}

// Stationary law of the voter chain on {0,1}^interior. Configuration bit k is
// the vote of the k-th interior site in row-major order.
class ExactStationary {
  public:
    ExactStationary(BoxGeometry g, std::vector<double> probs, double balance_residual)
        : geometry_(std::move(g)), probs_(std::move(probs)), residual_(balance_residual) {}

    const BoxGeometry& geometry() const noexcept { return geometry_; }
    int num_interior() const noexcept { return geometry_.num_interior(); }
    std::size_t num_configurations() const noexcept { return probs_.size(); }
    const std::vector<double>& probabilities() const noexcept { return probs_; }
    double probability(std::uint64_t config) const { return probs_.at(config); }
    double balance_residual() const noexcept { return residual_; }

    // P(vote = 1) at the k-th interior site.
    double marginal(int k) const {
        double total = 0.0;
        for (std::size_t c = 0; c < probs_.size(); ++c)
            if ((c >> k) & 1U) total += probs_[c];
        return total;
    }

    double marginal(const Site& s) const {
        const auto sites = geometry_.interior_sites();
        const auto it = std::find(sites.begin(), sites.end(), s);
        if (it == sites.end()) throw DomainError("site " + to_string(s) + " is not interior");
        return marginal(static_cast<int>(it - sites.begin()));
    }

  private:
    BoxGeometry geometry_;
    std::vector<double> probs_;
    double residual_;
};

// Interior votes packed as a configuration index (bit k = k-th interior site).
inline std::uint64_t configuration_index(const BoxGeometry& g, const std::vector<Vote>& box_votes) {
    std::uint64_t c = 0;
    int k = 0;
    for (const Site& s : g.interior_sites()) {
        if (box_votes[g.index(s)]) c |= std::uint64_t{1} << k;
        ++k;
    }
    return c;
}

inline ExactStationary exact_stationary(const BoxGeometry& g, const OracleCaps& caps = {}) {
    const detail::InteriorIndex idx(g);
    const int n = idx.size();
    if (n > caps.max_stationary_interior) {
        throw SizeCapError("exact stationary: interior of " + std::to_string(n) + " sites too large",
                           caps.max_stationary_interior);
    }
    const auto& off = g.index_offsets();
    const int configs = 1 << n;

    // Q(c, c') rates; the balance system is Q^T pi = 0 with one row replaced by normalisation.
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(configs, configs);
    for (int c = 0; c < configs; ++c) {
        for (int k = 0; k < n; ++k) {
            const int s = idx.site(k);
            const int mine = (c >> k) & 1;
            int disagree = 0;
            for (int d : off) {
                const int t = s + d;
                const int theirs = g.is_boundary(t) ? g.fixed_vote(t) : (c >> idx.of(t)) & 1;
                disagree += theirs != mine;
            }
            if (disagree == 0) continue;
            const double rate = disagree / 6.0;
            Q(c, c ^ (1 << k)) += rate;
            Q(c, c) -= rate;
        }
    }
    Eigen::MatrixXd M = Q.transpose();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(configs);
    M.row(configs - 1).setOnes();
    rhs[configs - 1] = 1.0;
    const Eigen::VectorXd pi = M.fullPivLu().solve(rhs);

    const double residual = (Q.transpose() * pi).cwiseAbs().maxCoeff();
    if (residual >= kFieldTolerance || std::abs(pi.sum() - 1.0) >= kFieldTolerance) {
        throw NumericError("exact stationary: balance equations not satisfied", residual);
    }
    std::vector<double> probs(pi.data(), pi.data() + configs);
    return ExactStationary(g, std::move(probs), residual);
}

inline void write_site_values_csv(std::ostream& os, const BoxGeometry& g, const std::vector<double>& values) {
    os << "i,j,value\n";
    const auto old_precision = os.precision(17);
    for (const Site& s : g.interior_sites()) os << s.i << ',' << s.j << ',' << values[g.index(s)] << '\n';
    os.precision(old_precision);
}

}  // namespace voterlab

#endif  // VOTERLAB_ORACLE_HPP
