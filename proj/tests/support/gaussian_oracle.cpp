#include "gaussian_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace kcgg::testsupport {

GaussianPrior GaussianPrior::ar1(std::size_t dim, double rho, double sigma,
                                 std::vector<double> mean) {
    if (mean.size() != dim) throw std::invalid_argument("ar1: mean size mismatch");
    GaussianPrior p;
    p.mean = std::move(mean);
    p.cov = Tensor::zeros({dim, dim});
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            p.cov.at(i, j) = sigma * sigma * std::pow(rho, std::abs(static_cast<double>(i) -
                                                                    static_cast<double>(j)));
        }
    }
    return p;
}

std::vector<double> solve_dense(Tensor a, std::vector<double> b) {
    const std::size_t n = b.size();
    if (a.rank() != 2 || a.shape()[0] != n || a.shape()[1] != n) {
        throw std::invalid_argument("solve_dense: dimension mismatch");
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a.at(i, k)) > std::abs(a.at(pivot, k))) pivot = i;
        }
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(pivot, j));
            std::swap(b[k], b[pivot]);
        }
        if (a.at(k, k) == 0.0) throw std::runtime_error("solve_dense: singular matrix");
        for (std::size_t i = k + 1; i < n; ++i) {
            double factor = a.at(i, k) / a.at(k, k);
            for (std::size_t j = k; j < n; ++j) a.at(i, j) -= factor * a.at(k, j);
            b[i] -= factor * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= a.at(i, j) * x[j];
        x[i] = acc / a.at(i, i);
    }
    return x;
}

Tensor GaussianAnalyticScore::precision_at(double alpha_bar) const {
    const std::size_t n = prior_.dim();
    Tensor m = Tensor::zeros({n, n});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m.at(i, j) = alpha_bar * prior_.cov.at(i, j) + (i == j ? 1.0 - alpha_bar : 0.0);
        }
    }
    // Invert column by column; n is tiny in every use.
    Tensor inv = Tensor::zeros({n, n});
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<double> e(n, 0.0);
        e[c] = 1.0;
        std::vector<double> col = solve_dense(m, std::move(e));
        for (std::size_t r = 0; r < n; ++r) inv.at(r, c) = col[r];
    }
    return inv;
}

ad::Value GaussianAnalyticScore::score_node(ad::Graph& g, ad::Value x, const ScheduleStep& step,
                                            const std::vector<int>&) const {
    const std::size_t n = prior_.dim();
    Tensor shifted_mean = Tensor::zeros({n});
    double a = std::sqrt(step.alpha_bar);
    for (std::size_t i = 0; i < n; ++i) shifted_mean[i] = -a * prior_.mean[i];

    // s = -(x - sqrt(ab) mu) A^T with symmetric A.
    ad::Value centered = ad::add_rowvec(x, g.constant(shifted_mean));
    return ad::scale(ad::matmul(centered, g.constant(precision_at(step.alpha_bar))), -1.0);
}

ad::Value PointScore::score_node(ad::Graph& g, ad::Value x, const ScheduleStep& step,
                                 const std::vector<int>&) const {
    const std::size_t n = tau_star_.size();
    Tensor shifted = Tensor::zeros({n});
    double a = std::sqrt(step.alpha_bar);
    for (std::size_t i = 0; i < n; ++i) shifted[i] = -a * tau_star_[i];
    ad::Value centered = ad::add_rowvec(x, g.constant(shifted));
    return ad::scale(centered, -1.0 / (1.0 - step.alpha_bar));
}

ad::Value QuadraticCoordCost::cost_node(ad::Graph& g, ad::Value rows) const {
    const std::size_t batch = rows.tensor().shape()[0];
    ad::Value total;
    for (std::size_t r = 0; r < batch; ++r) {
        ad::Value e = ad::element(ad::row(rows, r), coord_);
        ad::Value d = ad::sub(e, g.constant(Tensor::scalar(target_)));
        ad::Value c = ad::scale(ad::mul(d, d), weight_);
        total = r == 0 ? c : ad::add(total, c);
    }
    return total;
}

double QuadraticCoordCost::cost_value(std::span<const double> physical_row) const {
    double d = physical_row[coord_] - target_;
    return weight_ * d * d;
}

std::vector<double> conditional_mean(const GaussianPrior& prior, std::size_t coord, double target,
                                     double weight) {
    // Observation y ~ N(tau_k, v) with v = 1/(2w):
    //   mu_post = mu + Cov[:, k] (y - mu_k) / (Cov[k, k] + v).
    const std::size_t n = prior.dim();
    double v = 1.0 / (2.0 * weight);
    double gain = (target - prior.mean[coord]) / (prior.cov.at(coord, coord) + v);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = prior.mean[i] + prior.cov.at(i, coord) * gain;
    return out;
}

} // namespace kcgg::testsupport
