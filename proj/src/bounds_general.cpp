#include "mlebound/bounds_general.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "mlebound/errors.hpp"
#include "mlebound/fit_replicates.hpp"
#include "mlebound/montecarlo.hpp"

namespace mlebound {

namespace {

enum PassTag : std::uint64_t { kScorePass = 11, kCubePass = 12, kMlePass = 13 };

std::uint64_t pass_seed(std::uint64_t base, PassTag tag) { return stream_key(base, tag); }

TermValue mc_term(const Estimate& e, const McConfig& mc) { return {e.value, e.stderr, false, mc.reps, mc.seed}; }

Vec row(const Matrix& A, std::size_t j) {
    Vec r(A.cols());
    for (std::size_t k = 0; k < A.cols(); ++k) r[k] = A(j, k);
    return r;
}

double quad(const Vec& a, const Matrix& F, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) s += a[i] * F(i, j) * b[j];
    return s;
}

Matrix invsqrt_fisher(const Model& model, const Vec& theta0, std::size_t n) {
    return spd_invsqrt(model.fisher_bar(theta0, n)).to_matrix();
}

std::vector<double> column_abs_sums(const Matrix& A) {
    std::vector<double> c(A.cols(), 0.0);
    for (std::size_t l = 0; l < A.rows(); ++l)
        for (std::size_t k = 0; k < A.cols(); ++k) c[k] += std::fabs(A(l, k));
    return c;
}

struct MleTerms {
    K1Parts k1;
    TermValue mse;
};

MleTerms mle_terms(const Model& model, const Vec& theta0, std::size_t n, double eps, const McConfig& mc,
                   bool want_k1, bool want_mse) {
    const std::size_t d = model.dim_param();
    const bool force = mc.mode == EstimationMode::ForceMonteCarlo;
    const double nn = static_cast<double>(n);
    MleTerms out;

    std::optional<MleMoments> mm;
    std::optional<Matrix> hv;
    std::optional<double> env;
    Matrix A, fbar;
    std::vector<double> colsum;
    if (!force) mm = model.mle_moments(theta0, n);
    if (want_k1) {
        if (!(eps > 0.0)) throw Error(ErrorKind::Domain, "epsilon must be positive");
        A = invsqrt_fisher(model, theta0, n);
        fbar = model.fisher_bar(theta0, n).to_matrix();
        colsum = column_abs_sums(A);
        if (!force) {
            const std::size_t loop = model.identically_distributed() ? 1 : n;
            for (std::size_t i = 0; i < loop; ++i) {
                auto v = model.hessian_variance(i, theta0);
                if (!v) {
                    hv.reset();
                    break;
                }
                if (!hv) hv = Matrix(d, d);
                *hv += *v;
            }
            if (hv && model.identically_distributed()) *hv *= nn;
            if (model.third_derivatives_vanish())
                env = 0.0;
            else
                env = model.k1_envelope_closed(theta0, n, eps);
        }
    }
    bool hv_zero = hv.has_value();
    if (hv)
        for (double v : hv->data()) hv_zero = hv_zero && v == 0.0;

    const bool need_hv_mc = want_k1 && !hv;
    const bool need_d2_mc = (want_k1 && !hv_zero && !mm) || (want_mse && !mm);
    const bool need_env_mc = want_k1 && !env;
    const bool need_pass = need_hv_mc || need_d2_mc || need_env_mc;

    // stat layout
    const std::size_t o_d2 = 0, o_d4 = d, o_h = o_d4 + d * d, o_c = o_h + d * d, o_m = o_c + 1,
                      o_mse = o_m + d * d * d, nstat = o_mse + 2;
    BlockSums bs;
    if (need_pass) {
        const bool with_k1 = need_hv_mc || need_env_mc;
        bs = run_fits(model, theta0, n, eps, mc.reps, pass_seed(mc.seed, kMlePass), with_k1, nstat,
                      [&](std::size_t, const ReplicateFit& f, double* acc) {
                          Vec dev(d);
                          double se = 0.0;
                          bool inside = true;
                          for (std::size_t j = 0; j < d; ++j) {
                              dev[j] = f.theta_hat[j] - theta0[j];
                              se += dev[j] * dev[j];
                              inside = inside && std::fabs(dev[j]) < eps;
                          }
                          for (std::size_t j = 0; j < d; ++j) {
                              acc[o_d2 + j] += dev[j] * dev[j];
                              for (std::size_t v = 0; v < d; ++v)
                                  acc[o_d4 + j * d + v] += dev[j] * dev[j] * dev[v] * dev[v];
                          }
                          acc[o_mse] += se;
                          acc[o_mse + 1] += se * se;
                          if (!with_k1) return;
                          for (std::size_t j = 0; j < d; ++j)
                              for (std::size_t k = 0; k < d; ++k) {
                                  const double c = f.hessian_sum(j, k) + nn * fbar(k, j);
                                  acc[o_h + j * d + k] += c * c;
                              }
                          // |Q_(m)| < eps with Q_(m) the largest deviation is the
                          // same event as every |D_j| < eps.
                          if (inside) {
                              acc[o_c] += 1.0;
                              for (std::size_t k = 0; k < d; ++k)
                                  for (std::size_t j = 0; j < d; ++j)
                                      for (std::size_t v = 0; v < d; ++v) {
                                          const double m = f.envelope(k, j, v);
                                          acc[o_m + (k * d + j) * d + v] += m * m;
                                      }
                          }
                      });
    }

    auto d2 = [&](const std::vector<double>& m, std::size_t j) { return mm ? mm->second[j] : m[o_d2 + j]; };
    auto d4 = [&](const std::vector<double>& m, std::size_t j, std::size_t v) {
        return mm ? mm->mixed(j, v) : m[o_d4 + j * d + v];
    };

    if (want_k1) {
        auto g_hess = [&](const std::vector<double>& m) {
            if (hv_zero) return 0.0;
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t j = 0; j < d; ++j) {
                    const double h = hv ? (*hv)(j, k) : m[o_h + j * d + k];
                    s += colsum[k] * std::sqrt(std::max(0.0, d2(m, j) * h));
                }
            return s;
        };
        auto g_env = [&](const std::vector<double>& m) {
            const double c = m[o_c];
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t j = 0; j < d; ++j)
                    for (std::size_t v = 0; v < d; ++v) {
                        const double em = m[o_m + (k * d + j) * d + v] / c;
                        s += colsum[k] * std::sqrt(std::max(0.0, d4(m, j, v))) * std::sqrt(em);
                    }
            return 0.5 * s;
        };
        if (need_pass && (need_hv_mc || (need_d2_mc && !hv_zero)))
            out.k1.hessian = mc_term(jackknife(bs, g_hess), mc);
        else
            out.k1.hessian = {g_hess({}), 0.0, true, 0, 0};

        if (env) {
            out.k1.envelope = {*env, 0.0, true, 0, 0};
        } else {
            const double kept = bs.total()[o_c];
            out.k1.kept = static_cast<std::size_t>(kept);
            if (out.k1.kept < mc.min_kept)
                throw Error(ErrorKind::ConditioningStarved, std::to_string(out.k1.kept) + " of " +
                                                                std::to_string(mc.reps) +
                                                                " replicates inside the eps-box");
            out.k1.envelope = mc_term(jackknife(bs, g_env), mc);
        }
    }
    if (want_mse) {
        if (mm) {
            double s = 0.0;
            for (double v : mm->second) s += v;
            out.mse = {s, 0.0, true, 0, 0};
        } else {
            out.mse = mc_term(mean_estimate(bs, o_mse, o_mse + 1), mc);
        }
    }
    return out;
}

}  // namespace

double BoundReport::group_total(const std::string& group) const {
    double s = 0.0;
    for (const auto& t : terms)
        if (t.group == group) s += t.contribution;
    return s;
}

double BoundReport::conservative_total() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.contribution + 3.0 * t.stderr;
    return s;
}

void BoundReport::add(TermReport t) {
    total += t.contribution;
    terms.push_back(std::move(t));
}

double resolve_epsilon(const Model& model, const Vec& theta0, std::optional<double> eps) {
    if (eps) {
        if (!(*eps > 0.0)) throw Error(ErrorKind::Domain, "epsilon must be positive");
        return *eps;
    }
    if (auto e = model.default_epsilon(theta0)) return *e;
    // no Taylor remainder, so no eps-box is ever used
    if (model.third_derivatives_vanish()) return std::numeric_limits<double>::infinity();
    throw Error(ErrorKind::Domain, model.id() + " has no default epsilon; set one explicitly");
}

ScoreRootSums score_root_sums(const Model& model, const Vec& theta, std::size_t n, const Matrix& A,
                              const McConfig& mc) {
    const std::size_t d = model.dim_param();
    const bool iid = model.identically_distributed();
    const std::size_t loop = iid ? 1 : n;
    const double scale = iid ? static_cast<double>(n) : 1.0;
    std::vector<Vec> a(d);
    for (std::size_t j = 0; j < d; ++j) a[j] = row(A, j);

    // Second moments are exact from the Fisher information.
    Vec qd(d, 0.0);
    Matrix qc(d, d);
    for (std::size_t i = 0; i < loop; ++i) {
        Matrix F = model.fisher_per_obs(i, theta);
        for (std::size_t j = 0; j < d; ++j) {
            const double q = quad(a[j], F, a[j]);
            qd[j] += q * q;
            for (std::size_t k = 0; k < j; ++k) {
                const double c = quad(a[j], F, a[k]);
                qc(j, k) += c * c;
            }
        }
    }

    auto g_diag = [&](const Vec& m4, const Matrix&) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += std::sqrt(std::max(0.0, scale * (m4[j] - qd[j])));
        return s;
    };
    auto g_cross = [&](const Vec&, const Matrix& m22) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < j; ++k) s += std::sqrt(std::max(0.0, scale * (m22(j, k) - qc(j, k))));
        return s;
    };

    if (mc.mode == EstimationMode::Auto) {
        Vec m4(d, 0.0);
        Matrix m22(d, d);
        bool closed = true;
        for (std::size_t i = 0; i < loop && closed; ++i)
            for (std::size_t j = 0; j < d && closed; ++j) {
                auto v = model.score_moment4(i, theta, a[j], a[j], a[j], a[j]);
                if (!v) {
                    closed = false;
                    break;
                }
                m4[j] += *v;
                for (std::size_t k = 0; k < j; ++k) m22(j, k) += *model.score_moment4(i, theta, a[j], a[j], a[k], a[k]);
            }
        if (closed) return {{g_diag(m4, m22), 0.0, true, 0, 0}, {g_cross(m4, m22), 0.0, true, 0, 0}};
    }

    const std::size_t t = model.dim_obs();
    const std::size_t npair = d * d;
    BlockSums bs = run_replicates(mc.reps, pass_seed(mc.seed, kScorePass), d + npair,
                                  [&](std::size_t, std::uint64_t key, double* acc) {
                                      SplitMix64 rng(key);
                                      Vec x(t);
                                      for (std::size_t i = 0; i < loop; ++i) {
                                          model.sample_obs(i, theta, rng, x.data());
                                          Vec u = A * model.score_per_obs(i, x, theta);
                                          for (std::size_t j = 0; j < d; ++j) {
                                              const double u2 = u[j] * u[j];
                                              acc[j] += u2 * u2;
                                              for (std::size_t k = 0; k < j; ++k) acc[d + j * d + k] += u2 * u[k] * u[k];
                                          }
                                      }
                                  });
    auto unpack = [&](const std::vector<double>& m, Vec& m4, Matrix& m22) {
        m4.assign(m.begin(), m.begin() + d);
        m22 = Matrix(d, d);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < j; ++k) m22(j, k) = m[d + j * d + k];
    };
    ScoreRootSums out;
    out.diag = mc_term(jackknife(bs,
                                 [&](const std::vector<double>& m) {
                                     Vec m4;
                                     Matrix m22;
                                     unpack(m, m4, m22);
                                     return g_diag(m4, m22);
                                 }),
                       mc);
    out.cross = mc_term(jackknife(bs,
                                  [&](const std::vector<double>& m) {
                                      Vec m4;
                                      Matrix m22;
                                      unpack(m, m4, m22);
                                      return g_cross(m4, m22);
                                  }),
                        mc);
    return out;
}

K2Parts k2_parts(const Model& model, const Vec& theta0, std::size_t n, const McConfig& mc) {
    const Matrix A = invsqrt_fisher(model, theta0, n);
    ScoreRootSums rs = score_root_sums(model, theta0, n, A, mc);
    const double rn = std::sqrt(static_cast<double>(n));
    K2Parts k;
    k.diag = rs.diag;
    k.diag.value /= 4.0 * rn;
    k.diag.stderr /= 4.0 * rn;
    k.cross = rs.cross;
    k.cross.value /= 2.0 * rn;
    k.cross.stderr /= 2.0 * rn;
    return k;
}

TermValue k2_term(const Model& model, const Vec& theta0, std::size_t n, const McConfig& mc) {
    K2Parts k = k2_parts(model, theta0, n, mc);
    TermValue t = k.diag;
    t.value += k.cross.value;
    t.stderr = std::hypot(k.diag.stderr, k.cross.stderr);
    t.closed_form = k.diag.closed_form && k.cross.closed_form;
    return t;
}

TermValue score_difference_cube_sum(const Model& model, const Vec& theta, std::size_t n, const Matrix& A,
                                    const McConfig& mc) {
    const std::size_t d = model.dim_param();
    const bool iid = model.identically_distributed();
    const std::size_t loop = iid ? 1 : n;
    const double scale = iid ? static_cast<double>(n) : 1.0;
    if (mc.mode == EstimationMode::Auto) {
        double s = 0.0;
        bool closed = true;
        for (std::size_t i = 0; i < loop; ++i) {
            auto v = model.score_difference_cube(i, theta, A);
            if (!v) {
                closed = false;
                break;
            }
            s += *v;
        }
        if (closed) return {scale * s, 0.0, true, 0, 0};
    }
    const std::size_t t = model.dim_obs();
    BlockSums bs = run_replicates(mc.reps, pass_seed(mc.seed, kCubePass), 2,
                                  [&](std::size_t, std::uint64_t key, double* acc) {
                                      SplitMix64 rng(key);
                                      Vec x(t), xp(t);
                                      double total = 0.0;
                                      for (std::size_t i = 0; i < loop; ++i) {
                                          model.sample_obs(i, theta, rng, x.data());
                                          model.sample_obs(i, theta, rng, xp.data());
                                          Vec s = model.score_per_obs(i, x, theta);
                                          Vec sp = model.score_per_obs(i, xp, theta);
                                          for (std::size_t l = 0; l < d; ++l) sp[l] -= s[l];
                                          Vec v = A * sp;
                                          double a = 0.0;
                                          for (double w : v) a += std::fabs(w);
                                          total += a * a * a;
                                      }
                                      acc[0] += total;
                                      acc[1] += total * total;
                                  });
    Estimate e = mean_estimate(bs, 0, 1);
    e.value *= scale;
    e.stderr *= scale;
    return mc_term(e, mc);
}

TermValue k3_term(const Model& model, const Vec& theta0, std::size_t n, const McConfig& mc) {
    const Matrix A = invsqrt_fisher(model, theta0, n);
    TermValue e = score_difference_cube_sum(model, theta0, n, A, mc);
    const double f = 12.0 * static_cast<double>(n);
    e.value /= f;
    e.stderr /= f;
    return e;
}

K1Parts k1_parts(const Model& model, const Vec& theta0, std::size_t n, double eps, const McConfig& mc) {
    return mle_terms(model, theta0, n, eps, mc, true, false).k1;
}

TermValue k1_term(const Model& model, const Vec& theta0, std::size_t n, double eps, const McConfig& mc) {
    K1Parts k = k1_parts(model, theta0, n, eps, mc);
    TermValue t = k.hessian;
    t.value += k.envelope.value;
    t.stderr = std::hypot(k.hessian.stderr, k.envelope.stderr);
    t.closed_form = k.hessian.closed_form && k.envelope.closed_form;
    if (!k.envelope.closed_form) {
        t.reps = k.envelope.reps;
        t.seed = k.envelope.seed;
    }
    return t;
}

TermValue mse_moment(const Model& model, const Vec& theta0, std::size_t n, double eps, const McConfig& mc) {
    return mle_terms(model, theta0, n, eps, mc, false, true).mse;
}

double tail_term(double eps, double mse, double sup_h) { return 2.0 * sup_h * mse / (eps * eps); }

BoundReport assemble(const Model& model, const Vec& theta0, std::size_t n, double eps, const TestFunction& h,
                     const McConfig& mc) {
    return assemble(model, theta0, n, eps, h.norms, h.id, mc);
}

BoundReport assemble(const Model& model, const Vec& theta0, std::size_t n, double eps, const NormSet& nm,
                     const std::string& h_id, const McConfig& mc) {
    if (!(eps > 0.0)) throw Error(ErrorKind::Domain, "epsilon must be positive");
    BoundReport r;
    r.model_id = model.id();
    r.h_id = h_id;
    r.n = n;
    r.theta0 = theta0;
    r.epsilon = eps;
    const double rn = std::sqrt(static_cast<double>(n));
    auto add = [&](const char* name, const char* group, double w, const TermValue& t, double div) {
        r.add({name, group, w * t.value / div, w * t.stderr / div, t.closed_form, t.reps, t.seed});
    };
    // with vanishing third derivatives the expansion is exact and there is no tail
    const bool want_k1 = nm.sup_1 > 0.0, want_mse = nm.sup_h > 0.0 && !model.third_derivatives_vanish();
    MleTerms mt;
    if (want_k1 || want_mse) mt = mle_terms(model, theta0, n, eps, mc, want_k1, want_mse);
    add("k1_hessian", "k1", nm.sup_1, mt.k1.hessian, rn);
    add("k1_envelope", "k1", nm.sup_1, mt.k1.envelope, rn);
    K2Parts k2;
    if (nm.sup_2 > 0.0) k2 = k2_parts(model, theta0, n, mc);
    add("k2_diag", "k2", nm.sup_2, k2.diag, rn);
    add("k2_cross", "k2", nm.sup_2, k2.cross, rn);
    TermValue k3;
    if (nm.sup_3 > 0.0) k3 = k3_term(model, theta0, n, mc);
    add("k3", "k3", nm.sup_3, k3, rn);
    add("tail", "tail", 2.0 * nm.sup_h, mt.mse, eps * eps);
    return r;
}

}  // namespace mlebound
