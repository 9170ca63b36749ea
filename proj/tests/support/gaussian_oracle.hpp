#pragma once

#include <cstddef>
#include <vector>

#include "kcgg/guidance.hpp"
#include "kcgg/score_model.hpp"
#include "kcgg/tensor.hpp"

namespace kcgg::testsupport {

/// Dense symmetric positive-definite prior over a 1-dof "trajectory": the
/// closed-form oracle behind the guidance comparisons. AR(1)-style
/// covariance sigma^2 * rho^|j-k| couples all coordinates, so conditioning
/// on one coordinate shifts every mean entry.
struct GaussianPrior {
    std::vector<double> mean;
    Tensor cov; // D x D

    static GaussianPrior ar1(std::size_t dim, double rho, double sigma,
                             std::vector<double> mean);
    std::size_t dim() const { return mean.size(); }
};

/// Solves A x = b for small dense symmetric A (Gaussian elimination with
/// partial pivoting). Independent of anything in the library under test.
std::vector<double> solve_dense(Tensor a, std::vector<double> b);

/// Exact score of the noised marginal of a Gaussian prior:
///   s(x) = -(alpha_bar * Cov + (1 - alpha_bar) I)^{-1} (x - sqrt(alpha_bar) mean).
/// Linear in x, so KCGG's gradient through it is dense.
class GaussianAnalyticScore final : public ScoreModel {
public:
    explicit GaussianAnalyticScore(GaussianPrior prior) : prior_(std::move(prior)) {}

    std::size_t dim() const override { return prior_.dim(); }
    ad::Value score_node(ad::Graph& g, ad::Value x, const ScheduleStep& step,
                         const std::vector<int>& cond) const override;

    const GaussianPrior& prior() const { return prior_; }

private:
    Tensor precision_at(double alpha_bar) const; // (ab*Cov + (1-ab)I)^{-1}

    GaussianPrior prior_;
};

/// Exact score for a point-mass prior smoothed by the forward process:
///   s(x) = -(x - sqrt(alpha_bar) tau*) / (1 - alpha_bar).
class PointScore final : public ScoreModel {
public:
    explicit PointScore(std::vector<double> tau_star) : tau_star_(std::move(tau_star)) {}

    std::size_t dim() const override { return tau_star_.size(); }
    ad::Value score_node(ad::Graph& g, ad::Value x, const ScheduleStep& step,
                         const std::vector<int>& cond) const override;

private:
    std::vector<double> tau_star_;
};

/// Score model that is identically zero (shape and plumbing checks).
class ZeroScore final : public ScoreModel {
public:
    explicit ZeroScore(std::size_t dim) : dim_(dim) {}
    std::size_t dim() const override { return dim_; }
    ad::Value score_node(ad::Graph& g, ad::Value x, const ScheduleStep&,
                         const std::vector<int>&) const override {
        return ad::scale(x, 0.0);
    }

private:
    std::size_t dim_;
};

/// Quadratic single-coordinate cost c(row) = w * (row[k] - y)^2 in model
/// space (identity normalization).
class QuadraticCoordCost final : public GuidanceCost {
public:
    QuadraticCoordCost(std::size_t coord, double target, double weight)
        : coord_(coord), target_(target), weight_(weight) {}

    ad::Value cost_node(ad::Graph& g, ad::Value rows) const override;
    double cost_value(std::span<const double> physical_row) const override;

private:
    std::size_t coord_;
    double target_;
    double weight_;
};

/// Mean of p(tau) * exp(-w (tau_k - y)^2), i.e. conditioning the Gaussian
/// prior on a pseudo-observation y of coordinate k with variance 1 / (2w).
std::vector<double> conditional_mean(const GaussianPrior& prior, std::size_t coord, double target,
                                     double weight);

} // namespace kcgg::testsupport
