#include "rankdist/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rankdist/kernels.hpp"
#include "rankdist/metrics.hpp"

namespace rankdist {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_dims(const SampledRanks& sr, const ConditionalModel& model) {
    if (sr.num_items != model.num_items() || sr.pool_size != model.pool_size())
        throw domain_error("estimator: sampled ranks and model disagree on (N, n)");
}

// Column access that works for both dense and lazy models; `buf` must be
// sized N for the lazy case.
std::span<const double> model_column(const ConditionalModel& model, int r,
                                     std::vector<double>& buf) {
    return model.column(r, buf);
}

RankPmf normalized_pmf(std::vector<double> mass) {
    const double total = kern::sum(mass.data(), mass.size());
    if (!(total > 0.0))
        throw solver_error("estimator: probability mass vanished");
    for (double& m : mass) m /= total;
    return RankPmf(std::move(mass));
}

}  // namespace

double decay_weight(const WeightDescriptor& w, int sampled_rank) {
    switch (w.kind) {
        case WeightDescriptor::Kind::None:
            return 1.0;
        case WeightDescriptor::Kind::APDecay:
            return w.scale / sampled_rank;
        case WeightDescriptor::Kind::NDCGDecay:
            return 1.0 / std::log2(sampled_rank / w.scale + 1.0);
    }
    throw domain_error("decay_weight: unknown weight kind");
}

void EmConfig::validate(int support) const {
    if (max_iterations < 1) throw domain_error("EmConfig: max_iterations must be >= 1");
    if (!(tolerance > 0.0)) throw domain_error("EmConfig: tolerance must be positive");
    if (weight.kind != WeightDescriptor::Kind::None && !(weight.scale > 1.0))
        throw domain_error("EmConfig: weight scale C must be > 1");
    if (init && init->support() != support)
        throw domain_error("EmConfig: init support must equal catalog size");
}

void MesConfig::validate() const {
    if (!(eta >= 0.0)) throw domain_error("MesConfig: eta must be >= 0");
    if (!(tolerance > 0.0)) throw domain_error("MesConfig: tolerance must be positive");
    if (max_iterations < 1) throw domain_error("MesConfig: max_iterations must be >= 1");
}

void BvConfig::validate(int support) const {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw domain_error("BvConfig: gamma must be in [0, 1]");
    if (prior && prior->support() != support)
        throw domain_error("BvConfig: prior support must equal catalog size");
}

namespace {

// Shared EM loop. Update (grouped over distinct sampled ranks):
//   pi_new[R] = sum_r coef(r) * pi[R] p(r|R) / sum_j pi[j] p(r|j)
// with coef(r) = pmf~(r) for plain MLE and pmf~(r) w(r) / sum pmf~ w for the
// weighted variant. The trace records the (weighted) log-likelihood
//   sum_u w(r_u) log sum_R pi_R p(r_u|R)
// of the iterate each update starts from.
EstimatorReport em_run(const SampledRanks& sr, const ConditionalModel& model,
                       const EmConfig& cfg) {
    check_dims(sr, model);
    cfg.validate(model.num_items());

    const int n_items = model.num_items();
    const int n_pool = model.pool_size();
    const std::size_t items = static_cast<std::size_t>(n_items);
    const double num_users = sr.num_users();

    const RankPmf sampled = empirical_pmf(sr.ranks, n_pool);

    std::vector<double> coef(static_cast<std::size_t>(n_pool));
    std::vector<double> obj_coef(static_cast<std::size_t>(n_pool));
    double weight_norm = 0.0;
    for (int r = 1; r <= n_pool; ++r) {
        const double w = decay_weight(cfg.weight, r);
        if (!(w > 0.0) || !std::isfinite(w))
            throw domain_error("em: weight function produced non-positive value at r=" +
                               std::to_string(r));
        const double pw = sampled.at_rank(r) * w;
        coef[static_cast<std::size_t>(r - 1)] = pw;
        obj_coef[static_cast<std::size_t>(r - 1)] = num_users * pw;
        weight_norm += pw;
    }
    for (double& c : coef) c /= weight_norm;

    std::vector<double> pi(items, 1.0 / n_items);
    if (cfg.init) pi.assign(cfg.init->mass().begin(), cfg.init->mass().end());
    std::vector<double> pi_next(items);
    std::vector<double> col_buf(model.dense() ? 0 : items);

    EstimatorReport report;
    report.objective_trace.reserve(static_cast<std::size_t>(std::min(cfg.max_iterations, 4096)));

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        std::fill(pi_next.begin(), pi_next.end(), 0.0);
        double objective = 0.0;
        for (int r = 1; r <= n_pool; ++r) {
            const std::size_t ri = static_cast<std::size_t>(r - 1);
            if (coef[ri] == 0.0) continue;
            auto col = model_column(model, r, col_buf);
            const double denom = kern::dot(pi.data(), col.data(), items);
            if (!(denom > 0.0))
                throw solver_error("em: zero mixture mass at observed sampled rank r=" +
                                   std::to_string(r));
            objective += obj_coef[ri] * std::log(denom);
            kern::scaled_mul_add(pi_next.data(), pi.data(), col.data(), coef[ri] / denom, items);
        }
        report.objective_trace.push_back(objective);
        ++report.iterations_used;

        const double delta = kern::max_abs_diff(pi.data(), pi_next.data(), items);
        pi.swap(pi_next);
        if (delta <= cfg.tolerance) {
            report.converged = true;
            break;
        }
    }

    report.pmf_estimate = normalized_pmf(std::move(pi));
    return report;
}

}  // namespace

EstimatorReport mle_em(const SampledRanks& sr, const ConditionalModel& model,
                       const EmConfig& cfg) {
    EmConfig plain = cfg;
    plain.weight = WeightDescriptor{};
    return em_run(sr, model, plain);
}

EstimatorReport wmle_em(const SampledRanks& sr, const ConditionalModel& model,
                        const EmConfig& cfg) {
    return em_run(sr, model, cfg);
}

double mes_objective(std::span<const double> pi, const ConditionalModel& model,
                     std::span<const double> sampled_pmf, double eta) {
    const std::size_t items = static_cast<std::size_t>(model.num_items());
    const int n_pool = model.pool_size();
    if (pi.size() != items)
        throw domain_error("mes_objective: pi size must equal catalog size");
    if (sampled_pmf.size() != static_cast<std::size_t>(n_pool))
        throw domain_error("mes_objective: sampled pmf size must equal pool size");

    double entropy = 0.0;
    for (double p : pi)
        if (p > 0.0) entropy -= p * std::log(p);

    double sq_err = 0.0;
    std::vector<double> col_buf(model.dense() ? 0 : items);
    for (int r = 1; r <= n_pool; ++r) {
        auto col = model_column(model, r, col_buf);
        const double q = kern::dot(pi.data(), col.data(), items);
        const double d = q - sampled_pmf[static_cast<std::size_t>(r - 1)];
        sq_err += sampled_pmf[static_cast<std::size_t>(r - 1)] * d * d;
    }
    return eta * entropy - sq_err;
}

// Exponentiated-gradient ascent with a monotone line search. One step moves
//   pi <- softmax((1 - lambda*eta) log pi + lambda * g_quad)
// which is mirror descent under the entropy mirror map: the eta * (-log pi - 1)
// entropy gradient folds into the (1 - lambda*eta) coefficient, so a hard zero
// coordinate stays zero instead of producing inf - inf.
EstimatorReport mes_optimize(const SampledRanks& sr, const ConditionalModel& model,
                             const MesConfig& cfg) {
    check_dims(sr, model);
    cfg.validate();

    const std::size_t items = static_cast<std::size_t>(model.num_items());
    const int n_pool = model.pool_size();
    const RankPmf sampled = empirical_pmf(sr.ranks, n_pool);
    const std::span<const double> p_tilde = sampled.mass();

    std::vector<double> pi(items, 1.0 / items);
    std::vector<double> log_pi(items, -std::log(static_cast<double>(items)));
    std::vector<double> q(static_cast<std::size_t>(n_pool));
    std::vector<double> grad(items);
    std::vector<double> logits(items);
    std::vector<double> pi_next(items);
    std::vector<double> log_pi_next(items);
    std::vector<double> col_buf(model.dense() ? 0 : items);

    auto evaluate = [&](const std::vector<double>& x) {
        return mes_objective(x, model, p_tilde, cfg.eta);
    };

    // The (1 - lambda*eta) coefficient must stay positive; within that cap the
    // line search adapts freely. Starting at a unit step keeps the first
    // softmax from flushing coordinates to zero, which exponentiated updates
    // cannot undo.
    const double lambda_cap = cfg.eta > 0.0 ? std::min(0.5 / cfg.eta, 1e12) : 1e12;
    double lambda = std::min(1.0, lambda_cap);
    double objective = evaluate(pi);

    EstimatorReport report;
    report.objective_trace.push_back(objective);

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        // Quadratic-term gradient: -2 sum_r pmf~(r) (q_r - pmf~(r)) p(r|R).
        std::fill(grad.begin(), grad.end(), 0.0);
        for (int r = 1; r <= n_pool; ++r) {
            const std::size_t ri = static_cast<std::size_t>(r - 1);
            auto col = model_column(model, r, col_buf);
            q[ri] = kern::dot(pi.data(), col.data(), items);
            const double s = -2.0 * p_tilde[ri] * (q[ri] - p_tilde[ri]);
            if (s != 0.0) kern::axpy(grad.data(), s, col.data(), items);
        }

        bool accepted = false;
        double next_objective = objective;
        for (int attempt = 0; attempt < 60; ++attempt) {
            const double shrink = 1.0 - lambda * cfg.eta;
            double max_logit = kNegInf;
            for (std::size_t i = 0; i < items; ++i) {
                logits[i] = shrink * log_pi[i] + lambda * grad[i];
                if (logits[i] > max_logit) max_logit = logits[i];
            }
            double z = 0.0;
            for (std::size_t i = 0; i < items; ++i) {
                pi_next[i] = std::exp(logits[i] - max_logit);
                z += pi_next[i];
            }
            const double log_z = std::log(z);
            for (std::size_t i = 0; i < items; ++i) {
                pi_next[i] /= z;
                log_pi_next[i] = logits[i] - max_logit - log_z;
            }
            next_objective = evaluate(pi_next);
            if (next_objective >= objective) {
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }

        ++report.iterations_used;
        if (!accepted) {
            // No ascent direction representable at any step size: optimal to
            // within floating-point resolution.
            report.converged = true;
            break;
        }

        pi.swap(pi_next);
        log_pi.swap(log_pi_next);
        const double gain = next_objective - objective;
        objective = next_objective;
        report.objective_trace.push_back(objective);
        lambda = std::min(lambda * 2.0, lambda_cap);

        if (gain <= cfg.tolerance * std::max(1.0, std::fabs(objective))) {
            report.converged = true;
            break;
        }
    }

    report.pmf_estimate = normalized_pmf(std::move(pi));
    return report;
}

BvEstimator::BvEstimator(const ConditionalModel& model, const BvConfig& cfg)
    : model_(model),
      prior_(cfg.prior ? *cfg.prior : RankPmf::uniform(model.num_items())),
      gamma_(cfg.gamma) {
    cfg.validate(model.num_items());

    // Gram matrix (1-gamma) A^T A + gamma diag(c), with A and c from the
    // Recall system (A and c do not depend on the metric, only b does).
    LsSystem sys = assemble_ls_system(
        prior_, model_, MetricSpec(MetricKind::Recall, model.num_items()));
    a_ = std::move(sys.a);
    c_ = std::move(sys.c);

    const std::size_t n = static_cast<std::size_t>(model.pool_size());
    const std::size_t items = static_cast<std::size_t>(model.num_items());
    Matrix gram(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double g = kern::dot(a_.col(i), a_.col(j), items) * (1.0 - gamma_);
            gram(i, j) = g;
            gram(j, i) = g;
        }
        gram(i, i) += gamma_ * c_[i];
    }
    chol_ = cholesky_factor_jittered(gram);
}

std::vector<double> BvEstimator::solve(std::span<const double> rhs) const {
    std::vector<double> x(rhs.begin(), rhs.end());
    cholesky_substitute(chol_, x);
    return x;
}

std::vector<double> BvEstimator::corrected_weights(const MetricSpec& spec) const {
    const int n_items = model_.num_items();
    const std::size_t items = static_cast<std::size_t>(n_items);
    if (spec.cutoff > n_items)
        throw domain_error("BvEstimator: cutoff exceeds catalog size");

    std::vector<double> b(items);
    for (int R = 1; R <= n_items; ++R)
        b[static_cast<std::size_t>(R - 1)] =
            std::sqrt(prior_.at_rank(R)) * metric_weight(spec.kind, R, n_items, spec.cutoff);

    const std::size_t n = static_cast<std::size_t>(model_.pool_size());
    std::vector<double> rhs(n);
    for (std::size_t r = 0; r < n; ++r) rhs[r] = kern::dot(a_.col(r), b.data(), items);
    return solve(rhs);
}

double BvEstimator::metric(const RankPmf& sampled_pmf, const MetricSpec& spec) const {
    if (sampled_pmf.support() != model_.pool_size())
        throw domain_error("BvEstimator: sampled pmf support must equal pool size");
    const std::vector<double> m_hat = corrected_weights(spec);
    return kern::dot(sampled_pmf.mass().data(), m_hat.data(), m_hat.size());
}

BvPmfResult BvEstimator::pmf(const RankPmf& sampled_pmf) const {
    if (sampled_pmf.support() != model_.pool_size())
        throw domain_error("BvEstimator: sampled pmf support must equal pool size");
    const std::size_t items = static_cast<std::size_t>(model_.num_items());
    const std::size_t n = static_cast<std::size_t>(model_.pool_size());

    // P^hat(R) = Recall_BV(R) - Recall_BV(R-1) = sqrt(P(R)) * (A v)_R with
    // v solving the Gram system against pmf~; the b-vectors of consecutive
    // Recall cutoffs differ in exactly one coordinate.
    const std::vector<double> v = solve(sampled_pmf.mass());
    std::vector<double> accum(items, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        kern::axpy(accum.data(), v[r], a_.col(r), items);

    std::vector<double> mass(items);
    for (std::size_t i = 0; i < items; ++i)
        mass[i] = std::sqrt(prior_.at_rank(static_cast<int>(i) + 1)) * accum[i];

    BvPmfResult result;
    result.mass_before_repair = kern::sum(mass.data(), items);
    for (double& m : mass) {
        if (m < 0.0) {
            m = 0.0;
            result.repaired = true;
        }
    }
    result.pmf = normalized_pmf(std::move(mass));
    return result;
}

double bv_metric(const SampledRanks& sr, const ConditionalModel& model, const MetricSpec& spec,
                 const BvConfig& cfg) {
    check_dims(sr, model);
    BvEstimator est(model, cfg);
    return est.metric(empirical_pmf(sr.ranks, sr.pool_size), spec);
}

BvPmfResult bv_pmf(const SampledRanks& sr, const ConditionalModel& model, const BvConfig& cfg) {
    check_dims(sr, model);
    BvEstimator est(model, cfg);
    return est.pmf(empirical_pmf(sr.ranks, sr.pool_size));
}

}  // namespace rankdist
