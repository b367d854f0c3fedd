#include "qks/conic.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

// Homogeneous self-dual predictor-corrector interior-point method with
// Nesterov-Todd scaling, in the usual standard form
//
//     min c'x   s.t.  A x = b,   G x + s = h,   s in K,
//
// K a product of a nonnegative orthant and second-order cones. Dense KKT
// factorization (partial-pivot LU); problems here stay below ~10^3 variables.

namespace qks {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kStepMax = 0.9995;
constexpr double kStepMin = 1e-7;
constexpr double kGamma = 0.99;      // step back-off
constexpr double kSigmaMin = 1e-4;
constexpr double kSigmaMax = 0.8;
constexpr double kStaticReg = 1e-8; // KKT diagonal regularization
constexpr int kRefineSteps = 2;     // iterative-refinement passes per solve

struct StdForm {
    VectorXd c;
    MatrixXd A; // equalities
    VectorXd b;
    MatrixXd G; // cone constraints, G x + s = h
    VectorXd h;
    Eigen::Index n_lc = 0;          // leading nonnegative rows of s
    std::vector<Eigen::Index> socs; // SOC dimensions after the orthant
};

StdForm to_standard_form(const ConeProgram& p) {
    StdForm f;
    f.c = p.objective;

    Eigen::Index n_eq = 0, n_nn = 0, n_soc = 0;
    for (const auto& blk : p.blocks) {
        if (blk.kind == BlockKind::Zero) n_eq += blk.A.rows();
        else if (blk.kind == BlockKind::NonNeg) n_nn += blk.A.rows();
        else n_soc += blk.A.rows();
    }

    f.A.resize(n_eq, p.n_vars);
    f.b.resize(n_eq);
    f.G.resize(n_nn + n_soc, p.n_vars);
    f.h.resize(n_nn + n_soc);
    f.n_lc = n_nn;

    Eigen::Index re = 0, rn = 0, rs = n_nn;
    for (const auto& blk : p.blocks) {
        // A x + b in cone  <=>  s = A x + b, i.e. (-A) x + s = b
        switch (blk.kind) {
        case BlockKind::Zero:
            f.A.middleRows(re, blk.A.rows()) = blk.A;
            f.b.segment(re, blk.b.size()) = -blk.b;
            re += blk.A.rows();
            break;
        case BlockKind::NonNeg:
            f.G.middleRows(rn, blk.A.rows()) = -blk.A;
            f.h.segment(rn, blk.b.size()) = blk.b;
            rn += blk.A.rows();
            break;
        case BlockKind::Soc:
            f.G.middleRows(rs, blk.A.rows()) = -blk.A;
            f.h.segment(rs, blk.b.size()) = blk.b;
            f.socs.push_back(blk.A.rows());
            rs += blk.A.rows();
            break;
        }
    }
    return f;
}

// Nesterov-Todd scaling state.
struct SocScaling {
    double eta2 = 1.0; // eta^2
    double a = 1.0;    // first component of the normalized NT point
    VectorXd q;        // remaining components
};

struct Scalings {
    VectorXd lp_w;  // sqrt(s_i / z_i) on the orthant
    std::vector<SocScaling> soc;
};

class Ipm {
  public:
    Ipm(const StdForm& f, double tol, int max_iter)
        : f_(f), tol_(tol), max_iter_(max_iter), n_(f.c.size()),
          p_(f.A.rows()), m_(f.G.rows()) {}

    ConeSolution run();

  private:
    const StdForm& f_;
    double tol_;
    int max_iter_;
    Eigen::Index n_, p_, m_;

    Scalings W_;
    VectorXd lam_;

    // Applies W, W^{-1}T composition etc. via closed forms.
    VectorXd scale(const VectorXd& z) const;        // W z
    VectorXd cone_product(const VectorXd& u, const VectorXd& v) const;
    VectorXd cone_division(const VectorXd& u, const VectorXd& w) const;
    void bring_to_cone(VectorXd& s) const;
    bool update_scalings(const VectorXd& s, const VectorXd& z);
    MatrixXd scaling_matrix_sq() const;             // W'W, block diagonal
    double line_search(const VectorXd& ds_by_W, const VectorXd& dz_scaled,
                       double tau, double dtau, double kap, double dkap) const;

    MatrixXd kkt_matrix(const MatrixXd& Wsq) const;
    struct Dir { VectorXd x, y, z; };
    Dir split(const VectorXd& sol) const;

    // Factorization of the statically regularized KKT matrix plus the exact
    // matrix for iterative refinement.
    struct Kkt {
        Eigen::PartialPivLU<MatrixXd> lu;
        MatrixXd exact;
        void compute(const MatrixXd& K, Eigen::Index n_primal);
        VectorXd solve(const VectorXd& rhs) const;
    };
};

void Ipm::Kkt::compute(const MatrixXd& K, Eigen::Index n_primal) {
    exact = K;
    MatrixXd reg = K;
    // +delta on the primal block, -delta on the dual blocks keeps the matrix
    // quasi-definite even when G has rank-deficient cone rows; the refinement
    // passes in solve() remove the bias.
    for (Eigen::Index i = 0; i < K.rows(); ++i)
        reg(i, i) += i < n_primal ? kStaticReg : -kStaticReg;
    lu.compute(reg);
}

VectorXd Ipm::Kkt::solve(const VectorXd& rhs) const {
    VectorXd x = lu.solve(rhs);
    for (int r = 0; r < kRefineSteps; ++r) {
        const VectorXd res = rhs - exact * x;
        x += lu.solve(res);
    }
    return x;
}

VectorXd Ipm::scale(const VectorXd& z) const {
    VectorXd lam(m_);
    lam.head(f_.n_lc) = W_.lp_w.cwiseProduct(z.head(f_.n_lc));
    Eigen::Index k = f_.n_lc;
    for (const auto& sc : W_.soc) {
        const Eigen::Index d = sc.q.size() + 1;
        const double eta = std::sqrt(sc.eta2);
        const double zeta = sc.q.dot(z.segment(k + 1, d - 1));
        const double factor = z(k) + zeta / (1.0 + sc.a);
        lam(k) = eta * (sc.a * z(k) + zeta);
        lam.segment(k + 1, d - 1) = eta * (z.segment(k + 1, d - 1) + factor * sc.q);
        k += d;
    }
    return lam;
}

VectorXd Ipm::cone_product(const VectorXd& u, const VectorXd& v) const {
    VectorXd w(m_);
    w.head(f_.n_lc) = u.head(f_.n_lc).cwiseProduct(v.head(f_.n_lc));
    Eigen::Index k = f_.n_lc;
    for (const auto& sc : W_.soc) {
        const Eigen::Index d = sc.q.size() + 1;
        w(k) = u.segment(k, d).dot(v.segment(k, d));
        w.segment(k + 1, d - 1) =
            u(k) * v.segment(k + 1, d - 1) + v(k) * u.segment(k + 1, d - 1);
        k += d;
    }
    return w;
}

VectorXd Ipm::cone_division(const VectorXd& u, const VectorXd& w) const {
    VectorXd v(m_);
    v.head(f_.n_lc) = w.head(f_.n_lc).cwiseQuotient(u.head(f_.n_lc));
    Eigen::Index k = f_.n_lc;
    for (const auto& sc : W_.soc) {
        const Eigen::Index d = sc.q.size() + 1;
        const double u0 = u(k);
        const double w0 = w(k);
        const double rho = u0 * u0 - u.segment(k + 1, d - 1).squaredNorm();
        const double zeta = u.segment(k + 1, d - 1).dot(w.segment(k + 1, d - 1));
        const double factor = (zeta / u0 - w0) / rho;
        v(k) = (u0 * w0 - zeta) / rho;
        v.segment(k + 1, d - 1) =
            factor * u.segment(k + 1, d - 1) + w.segment(k + 1, d - 1) / u0;
        k += d;
    }
    return v;
}

void Ipm::bring_to_cone(VectorXd& s) const {
    double alpha = -1.0;
    for (Eigen::Index i = 0; i < f_.n_lc; ++i)
        if (s(i) <= 0.0) alpha = std::max(alpha, -s(i));
    Eigen::Index k = f_.n_lc;
    for (const auto d : f_.socs) {
        const double res = s(k) - s.segment(k + 1, d - 1).norm();
        if (res <= 0.0) alpha = std::max(alpha, -res);
        k += d;
    }
    if (alpha < 0.0) return;
    alpha += 1.0;
    s.head(f_.n_lc).array() += alpha;
    k = f_.n_lc;
    for (const auto d : f_.socs) {
        s(k) += alpha;
        k += d;
    }
}

bool Ipm::update_scalings(const VectorXd& s, const VectorXd& z) {
    W_.lp_w = (s.head(f_.n_lc).cwiseQuotient(z.head(f_.n_lc))).cwiseSqrt();
    if (!W_.lp_w.allFinite()) return false;

    W_.soc.assign(f_.socs.size(), SocScaling{});
    Eigen::Index k = f_.n_lc;
    for (size_t ci = 0; ci < f_.socs.size(); ++ci) {
        const Eigen::Index d = f_.socs[ci];
        const double sres = s(k) * s(k) - s.segment(k + 1, d - 1).squaredNorm();
        const double zres = z(k) * z(k) - z.segment(k + 1, d - 1).squaredNorm();
        if (sres <= 0.0 || zres <= 0.0) return false;

        const double snorm = std::sqrt(sres);
        const double znorm = std::sqrt(zres);
        const VectorXd sbar = s.segment(k, d) / snorm;
        const VectorXd zbar = z.segment(k, d) / znorm;

        SocScaling& sc = W_.soc[ci];
        sc.eta2 = snorm / znorm;
        double gamma = std::sqrt(0.5 * (1.0 + sbar.dot(zbar)));
        sc.a = (0.5 / gamma) * (sbar(0) + zbar(0));
        sc.q = (0.5 / gamma) * (sbar.tail(d - 1) - zbar.tail(d - 1));
        k += d;
    }
    lam_ = scale(z);
    return true;
}

MatrixXd Ipm::scaling_matrix_sq() const {
    MatrixXd Wsq = MatrixXd::Zero(m_, m_);
    Wsq.topLeftCorner(f_.n_lc, f_.n_lc).diagonal() = W_.lp_w.array().square();
    Eigen::Index k = f_.n_lc;
    for (const auto& sc : W_.soc) {
        const Eigen::Index d = sc.q.size() + 1;
        // Wbar^2 = 2 wbar wbar' - J with wbar = (a, q), J = diag(1, -I)
        VectorXd wbar(d);
        wbar(0) = sc.a;
        wbar.tail(d - 1) = sc.q;
        MatrixXd blockM = 2.0 * wbar * wbar.transpose();
        blockM(0, 0) -= 1.0;
        blockM.bottomRightCorner(d - 1, d - 1) += MatrixXd::Identity(d - 1, d - 1);
        Wsq.block(k, k, d, d) = sc.eta2 * blockM;
        k += d;
    }
    return Wsq;
}

double Ipm::line_search(const VectorXd& ds_by_W, const VectorXd& dz_scaled,
                        double tau, double dtau, double kap, double dkap) const {
    double alpha = 1.0 / kStepMin;
    if (f_.n_lc > 0) {
        const double rhomin =
            (ds_by_W.head(f_.n_lc).cwiseQuotient(lam_.head(f_.n_lc))).minCoeff();
        const double sigmin =
            (dz_scaled.head(f_.n_lc).cwiseQuotient(lam_.head(f_.n_lc))).minCoeff();
        const double worst = std::min(rhomin, sigmin);
        if (worst < 0.0) alpha = 1.0 / (-worst);
    }

    if (dtau < 0.0) alpha = std::min(alpha, -tau / dtau);
    if (dkap < 0.0) alpha = std::min(alpha, -kap / dkap);

    Eigen::Index k = f_.n_lc;
    for (const auto& sc : W_.soc) {
        const Eigen::Index d = sc.q.size() + 1;
        const double lknorm2 =
            lam_(k) * lam_(k) - lam_.segment(k + 1, d - 1).squaredNorm();
        if (lknorm2 <= 0.0) {
            k += d;
            continue;
        }
        const double lknorm = std::sqrt(lknorm2);
        const VectorXd lkbar = lam_.segment(k, d) / lknorm;
        const double inv = 1.0 / lknorm;

        auto cone_rate = [&](const VectorXd& dvec) {
            const double lk_times_d =
                lkbar(0) * dvec(k) - lkbar.tail(d - 1).dot(dvec.segment(k + 1, d - 1));
            const double r0 = inv * lk_times_d;
            const double factor = (lk_times_d + dvec(k)) / (lkbar(0) + 1.0);
            const VectorXd rtail =
                inv * (dvec.segment(k + 1, d - 1) - factor * lkbar.tail(d - 1));
            return rtail.norm() - r0;
        };

        const double rate = std::max({0.0, cone_rate(ds_by_W), cone_rate(dz_scaled)});
        if (rate > 0.0) alpha = std::min(alpha, 1.0 / rate);
        k += d;
    }
    return std::clamp(alpha, kStepMin, kStepMax);
}

MatrixXd Ipm::kkt_matrix(const MatrixXd& Wsq) const {
    const Eigen::Index dim = n_ + p_ + m_;
    MatrixXd K = MatrixXd::Zero(dim, dim);
    if (p_ > 0) {
        K.block(0, n_, n_, p_) = f_.A.transpose();
        K.block(n_, 0, p_, n_) = f_.A;
    }
    K.block(0, n_ + p_, n_, m_) = f_.G.transpose();
    K.block(n_ + p_, 0, m_, n_) = f_.G;
    K.block(n_ + p_, n_ + p_, m_, m_) = -Wsq;
    return K;
}

Ipm::Dir Ipm::split(const VectorXd& sol) const {
    return {sol.head(n_), sol.segment(n_, p_), sol.tail(m_)};
}

ConeSolution Ipm::run() {
    ConeSolution out;

    // Cone degree for the barrier parameter
    const double degree = static_cast<double>(f_.n_lc + f_.socs.size());

    // Init: identity scaling, solve the two start systems
    W_.lp_w = VectorXd::Ones(f_.n_lc);
    W_.soc.clear();
    for (const auto d : f_.socs) {
        SocScaling sc;
        sc.q = VectorXd::Zero(d - 1);
        W_.soc.push_back(sc);
    }

    Kkt lu;
    lu.compute(kkt_matrix(MatrixXd::Identity(m_, m_)), n_);

    VectorXd rhs1 = VectorXd::Zero(n_ + p_ + m_);
    rhs1.segment(n_, p_) = f_.b;
    rhs1.tail(m_) = f_.h;
    Dir d1 = split(lu.solve(rhs1));

    VectorXd rhs2 = VectorXd::Zero(n_ + p_ + m_);
    rhs2.head(n_) = -f_.c;
    Dir d2 = split(lu.solve(rhs2));

    VectorXd x = d1.x;
    VectorXd y = d2.y;
    VectorXd s = -d1.z;
    bring_to_cone(s);
    VectorXd z = d2.z;
    bring_to_cone(z);

    double tau = 1.0, kap = 1.0;

    const double resx0 = std::max(1.0, f_.c.norm());
    const double resy0 = std::max(1.0, f_.b.norm());
    const double resz0 = std::max(1.0, f_.h.norm());

    rhs1.head(n_) = -f_.c; // from now on rhs1 = [-c; b; h]

    double best_err = std::numeric_limits<double>::infinity();
    VectorXd best_x = x / tau;
    double best_pres = 0, best_dres = 0, best_gap = 0;

    int iter = 0;
    for (; iter <= max_iter_; ++iter) {
        // Residuals
        VectorXd rx = -f_.G.transpose() * z;
        if (p_ > 0) rx -= f_.A.transpose() * y;
        const double hresx = rx.norm();
        rx -= tau * f_.c;

        VectorXd ry;
        double hresy = 0.0;
        if (p_ > 0) {
            ry = f_.A * x;
            hresy = ry.norm();
            ry -= tau * f_.b;
        } else {
            ry = VectorXd::Zero(0);
        }

        VectorXd rz = s + f_.G * x;
        const double hresz_vecnorm = (rz).norm();
        rz -= tau * f_.h;

        const double cx = f_.c.dot(x);
        const double by = p_ > 0 ? f_.b.dot(y) : 0.0;
        const double hz = f_.h.dot(z);
        const double rt = kap + cx + by + hz;

        const double nx = x.norm(), nyv = y.norm(), nz = z.norm(), ns = s.norm();

        // Statistics
        const double gap = s.dot(z);
        const double mu = (gap + kap * tau) / (degree + 1.0);
        const double pcost = cx / tau;
        const double dcost = -(hz + by) / tau;
        double relgap = std::numeric_limits<double>::infinity();
        if (pcost < 0.0) relgap = gap / (-pcost);
        else if (dcost > 0.0) relgap = gap / dcost;

        const double nry = p_ > 0 ? ry.norm() / std::max(resy0 + nx, 1.0) : 0.0;
        const double nrz = rz.norm() / std::max(resz0 + nx + ns, 1.0);
        const double pres = std::max(nry, nrz) / tau;
        const double dres = rx.norm() / std::max(resx0 + nyv + nz, 1.0) / tau;

        // Infeasibility measures
        double pinfres = std::numeric_limits<double>::infinity();
        double dinfres = std::numeric_limits<double>::infinity();
        if ((hz + by) / std::max(nyv + nz, 1.0) < -tol_)
            pinfres = hresx / std::max(nyv + nz, 1.0);
        if (cx / std::max(nx, 1.0) < -tol_)
            dinfres = std::max(hresy / std::max(nx, 1.0),
                               hresz_vecnorm / std::max(nx + ns, 1.0));

        // Track the best iterate seen
        const double err = std::max({pres, dres, std::min(gap, relgap)});
        if (err < best_err) {
            best_err = err;
            best_x = x / tau;
            best_pres = pres;
            best_dres = dres;
            best_gap = std::min(gap, relgap);
        }

        // Exit tests
        if ((-cx > 0.0 || -by - hz >= -tol_) && pres < tol_ && dres < tol_ &&
            (gap < tol_ || relgap < tol_)) {
            out.status = SolveStatus::Optimal;
            out.x = x / tau;
            out.primal_residual = pres;
            out.dual_residual = dres;
            out.gap = std::min(gap, relgap);
            break;
        }
        if (dinfres < tol_ && tau < kap) {
            out.status = SolveStatus::Unbounded;
            out.x = x / std::max(nx, 1e-30); // certificate ray
            out.primal_residual = pres;
            out.dual_residual = dres;
            out.gap = gap;
            break;
        }
        if (pinfres < tol_ && tau < kap) {
            out.status = SolveStatus::Infeasible;
            out.x = best_x;
            out.primal_residual = pres;
            out.dual_residual = dres;
            out.gap = gap;
            break;
        }
        if (iter == max_iter_ || !std::isfinite(mu)) {
            out.status = SolveStatus::MaxIter;
            out.x = best_x;
            out.primal_residual = best_pres;
            out.dual_residual = best_dres;
            out.gap = best_gap;
            break;
        }

        // NT scaling + KKT factorization
        if (!update_scalings(s, z)) {
            out.status = SolveStatus::MaxIter;
            out.x = best_x;
            out.primal_residual = best_pres;
            out.dual_residual = best_dres;
            out.gap = best_gap;
            break;
        }
        lu.compute(kkt_matrix(scaling_matrix_sq()), n_);

        d1 = split(lu.solve(rhs1));

        // Affine (predictor) direction
        VectorXd rhs_a(n_ + p_ + m_);
        rhs_a.head(n_) = rx;
        rhs_a.segment(n_, p_) = -ry;
        rhs_a.tail(m_) = s - rz;
        Dir da = split(lu.solve(rhs_a));

        const double dtau_denom =
            kap / tau - f_.c.dot(d1.x) - (p_ > 0 ? f_.b.dot(d1.y) : 0.0) - f_.h.dot(d1.z);
        const double dtau_aff =
            (rt - kap + f_.c.dot(da.x) + (p_ > 0 ? f_.b.dot(da.y) : 0.0) + f_.h.dot(da.z)) /
            dtau_denom;

        VectorXd dz_aff = da.z + dtau_aff * d1.z;
        VectorXd W_dz_aff = scale(dz_aff);
        VectorXd ds_aff_by_W = -W_dz_aff - lam_;
        const double dkap_aff = -kap - kap / tau * dtau_aff;

        const double alpha_aff =
            line_search(ds_aff_by_W, W_dz_aff, tau, dtau_aff, kap, dkap_aff);
        const double sigma =
            std::clamp(std::pow(1.0 - alpha_aff, 3), kSigmaMin, kSigmaMax);

        // Combined (corrector) direction
        VectorXd dscomb = cone_product(lam_, lam_) + cone_product(ds_aff_by_W, W_dz_aff);
        const double sigmamu = sigma * mu;
        dscomb.head(f_.n_lc).array() -= sigmamu;
        {
            Eigen::Index k = f_.n_lc;
            for (const auto dsoc : f_.socs) {
                dscomb(k) -= sigmamu;
                k += dsoc;
            }
        }
        VectorXd lam_div_ds = cone_division(lam_, dscomb);
        VectorXd W_lam_div_ds = scale(lam_div_ds);

        VectorXd rhs_c(n_ + p_ + m_);
        const double oms = 1.0 - sigma;
        rhs_c.head(n_) = oms * rx;
        rhs_c.segment(n_, p_) = -oms * ry;
        rhs_c.tail(m_) = -oms * rz + W_lam_div_ds;
        Dir dc = split(lu.solve(rhs_c));

        const double bkap = kap * tau + dkap_aff * dtau_aff - sigmamu;
        const double dtau =
            (oms * rt - bkap / tau + f_.c.dot(dc.x) +
             (p_ > 0 ? f_.b.dot(dc.y) : 0.0) + f_.h.dot(dc.z)) /
            dtau_denom;

        VectorXd dx = dc.x + dtau * d1.x;
        VectorXd dy = p_ > 0 ? VectorXd(dc.y + dtau * d1.y) : VectorXd::Zero(0);
        VectorXd dz = dc.z + dtau * d1.z;

        VectorXd W_dz = scale(dz);
        VectorXd ds_by_W = -(lam_div_ds + W_dz);
        const double dkap = -(bkap + kap * dtau) / tau;

        const double alpha =
            kGamma * line_search(ds_by_W, W_dz, tau, dtau, kap, dkap);

        VectorXd ds = scale(ds_by_W); // W (W^{-1} ds) back to unscaled

        x += alpha * dx;
        if (p_ > 0) y += alpha * dy;
        z += alpha * dz;
        s += alpha * ds;
        kap += alpha * dkap;
        tau += alpha * dtau;

        if (alpha <= kStepMin * kGamma * 1.0000001) {
            out.status = SolveStatus::MaxIter;
            out.x = best_x;
            out.primal_residual = best_pres;
            out.dual_residual = best_dres;
            out.gap = best_gap;
            ++iter;
            break;
        }
    }

    out.iterations = iter;
    out.objective_value = f_.c.dot(out.x);
    return out;
}

} // namespace

ConeSolution solve(const ConeProgram& p, double tol, int max_iter) {
    p.validate();
    if (tol <= 0.0 || tol > 1e-2)
        throw std::invalid_argument("solve: tol must lie in (0, 1e-2]");
    if (max_iter < 1)
        throw std::invalid_argument("solve: max_iter must be >= 1");

    const StdForm f = to_standard_form(p);
    // IPM iteration counts are small; clamp the cap to something sane while
    // honoring user limits below it.
    Ipm ipm(f, tol, std::min(max_iter, 200));
    return ipm.run();
}

} // namespace qks
