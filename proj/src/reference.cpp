#include "stratiwave/reference.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "stratiwave/errors.hpp"

namespace stratiwave {

namespace {

constexpr double pi = std::numbers::pi;

// Root of a monotone function on [a, b] given values of opposite sign.
template <class F>
double bracketed_root(F f, double a, double b, double fa, double fb) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    std::uintmax_t iters = 200;
    auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52),
                                                      iters);
    return 0.5 * (lo + hi);
}

}  // namespace

// ---------------------------------------------------------------------------
// Laminar flows

LaminarSolution::LaminarSolution(DensityProfile rho, BernoulliFunction beta, double g, double d, double q,
                                 NodalFunction p_of_y, NodalFunction hp_of_y)
    : rho_(std::move(rho)),
      beta_(std::move(beta)),
      g_(g),
      d_(d),
      q_(q),
      p0_(p_of_y.values().back()),
      p_of_y_(std::move(p_of_y)),
      hp_of_y_(std::move(hp_of_y)) {}

double LaminarSolution::y_of_p(double p) const {
    if (p >= 0.0) return 0.0;
    if (p <= p0_) return -d_;
    auto f = [&](double y) { return p_of_y_.at(y) - p; };
    return bracketed_root(f, -d_, 0.0, p0_ - p, -p);
}

double LaminarSolution::height(double p) const { return y_of_p(p) + d_; }

double LaminarSolution::height_p(double p) const { return hp_of_y_.at(y_of_p(p)); }

AxisData LaminarSolution::axis(double c, int m, double p_atm) const {
    AxisData out{{}, 0.0, c, d_, g_, p_atm};
    for (double y : cheb::nodes(m, out.domain())) {
        const double p = p_of_y_.at(y);
        out.u.push_back(c - 1.0 / (std::sqrt(rho_.rho(p)) * hp_of_y_.at(y)));
    }
    return out;
}

WaveParameters LaminarSolution::parameters(double c, double p_atm) const { return {c, d_, g_, p_atm, p0_, q_}; }

LaminarSolution solve_laminar(const DensityProfile& rho, const BernoulliFunction& beta, double d, double q, double g,
                              int m, int substeps) {
    if (!(d > 0.0)) fail(ErrorKind::structural, "bed depth must be positive");
    if (m < 4 || substeps < 1) fail(ErrorKind::structural, "laminar grid too small");
    const double rho_top = rho.rho(0.0);
    if (!(rho_top > 0.0)) fail(ErrorKind::profile_range, "density must be positive at the surface");
    const double slack = q - 2.0 * g * rho_top * d;
    if (!(slack > 0.0)) {
        std::ostringstream msg;
        msg << "no laminar flow: head Q = " << q << " must exceed 2 g rho(0) d = " << 2.0 * g * rho_top * d;
        fail(ErrorKind::no_laminar_flow, msg.str());
    }

    // State (p, w) with w = H'(p), integrated downward from the flat surface.
    auto rhs = [&](double y, double p, double w, double& dp, double& dw) {
        dp = 1.0 / w;
        dw = -(beta.beta(-p) - g * y * rho.rho.eval(p, 1)) * w * w;
    };
    const Interval iv{-d, 0.0};
    const auto ys = cheb::nodes(m, iv);
    std::vector<double> pv(ys.size()), wv(ys.size());
    double p = 0.0, w = 1.0 / std::sqrt(slack);
    pv[0] = p;
    wv[0] = w;
    for (std::size_t k = 1; k < ys.size(); ++k) {
        const double h = (ys[k] - ys[k - 1]) / substeps;
        double y = ys[k - 1];
        for (int s = 0; s < substeps; ++s) {
            double k1p, k1w, k2p, k2w, k3p, k3w, k4p, k4w;
            rhs(y, p, w, k1p, k1w);
            rhs(y + 0.5 * h, p + 0.5 * h * k1p, w + 0.5 * h * k1w, k2p, k2w);
            rhs(y + 0.5 * h, p + 0.5 * h * k2p, w + 0.5 * h * k2w, k3p, k3w);
            rhs(y + h, p + h * k3p, w + h * k3w, k4p, k4w);
            p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
            y += h;
            if (!std::isfinite(p) || !std::isfinite(w) || !(w > 0.0)) {
                std::ostringstream msg;
                msg << "no laminar flow: H' leaves (0, inf) at y = " << y;
                fail(ErrorKind::no_laminar_flow, msg.str());
            }
        }
        pv[k] = p;
        wv[k] = w;
    }
    for (double pk : pv) {
        if (!(rho.rho(pk) > 0.0)) fail(ErrorKind::profile_range, "density non-positive on the laminar flow");
    }
    return LaminarSolution(rho, beta, g, d, q, NodalFunction(pv, iv), NodalFunction(wv, iv));
}

// ---------------------------------------------------------------------------
// Manufactured waves

ManufacturedWave::ManufacturedWave(double lambda, double epsilon, double d, double c)
    : lambda_(lambda), epsilon_(epsilon), d_(d), c_(c) {
    if (!(lambda < 0.0)) fail(ErrorKind::structural, "manufactured wave needs lambda < 0");
    if (!(d > 0.0)) fail(ErrorKind::structural, "bed depth must be positive");
    if (!std::isfinite(epsilon)) fail(ErrorKind::structural, "amplitude must be finite");
    kf_ = std::sqrt(-lambda);
    kg_ = std::sqrt(1.0 - lambda);

    auto psi0 = [&](double y) { return f(y) + epsilon_ * gfun(y); };
    const double bottom = psi0(-d_);
    if (!(bottom > 0.0)) fail(ErrorKind::structural, "manufactured wave: psi must be positive on the bed");
    if (epsilon_ == 0.0) {
        eta0_ = 0.0;
    } else {
        double hi = 0.0, fhi = psi0(hi);
        for (double step = 0.05; fhi > 0.0; step *= 2.0) {
            hi += step;
            fhi = psi0(hi);
            if (hi > 10.0 * d_) {
                // Past the fold psi(0, .) never returns to zero; its minimum is where psi_y = 0.
                double ymin = -d_;
                for (int k = 1; k <= 4000; ++k) {
                    const double y = -d_ + 11.0 * d_ * k / 4000;
                    if (psi0(y) < psi0(ymin)) ymin = y;
                }
                std::ostringstream msg;
                msg << "amplitude too large: psi(0, y) has no zero above the bed; psi_y = 0 near y = " << ymin;
                throw StagnationError(ymin, msg.str());
            }
        }
        eta0_ = bracketed_root(psi0, -d_, hi, bottom, fhi);
    }

    // psi_y < 0 throughout the wave; the worst vertical is x = 0 or x = pi.
    const int samples = 2000;
    for (int k = 0; k <= samples; ++k) {
        const double y = -d_ + (eta0_ + d_) * k / samples;
        const double worst = -kf_ * std::cosh(kf_ * y) + std::abs(epsilon_) * kg_ * std::sinh(kg_ * (y + d_));
        if (!(worst < 0.0)) {
            std::ostringstream msg;
            msg << "amplitude too large: psi_y >= 0 at y = " << y;
            throw StagnationError(y, msg.str());
        }
    }
}

double ManufacturedWave::f(double y) const { return -std::sinh(kf_ * y); }
double ManufacturedWave::gfun(double y) const { return std::cosh(kg_ * (y + d_)); }

SeriesPoint ManufacturedWave::at(double x, double y) const {
    const double cx = std::cos(x), sx = std::sin(x);
    const double gy = gfun(y);
    const double gp = kg_ * std::sinh(kg_ * (y + d_));
    SeriesPoint out;
    out.psi = f(y) + epsilon_ * cx * gy;
    out.psi_x = -epsilon_ * sx * gy;
    out.psi_xx = -epsilon_ * cx * gy;
    out.psi_y = -kf_ * std::cosh(kf_ * y) + epsilon_ * cx * gp;
    out.psi_yy = -kf_ * kf_ * std::sinh(kf_ * y) + epsilon_ * cx * kg_ * kg_ * gy;
    return out;
}

AxisData ManufacturedWave::axis(int m, double g, double p_atm) const {
    AxisData out{{}, eta0_, c_, d_, g, p_atm};
    for (double y : cheb::nodes(m, out.domain())) out.u.push_back(c_ + at(0.0, y).psi_y);
    return out;
}

EvenSeries ManufacturedWave::series(int order, int m) const {
    if (order < 0) fail(ErrorKind::structural, "series order must be non-negative");
    const Interval iv{-d_, eta0_};
    std::vector<NodalFunction> coeffs;
    coeffs.push_back(NodalFunction::sample(m, iv, [&](double y) { return f(y) + epsilon_ * gfun(y); }));
    double scale = epsilon_;
    for (int n = 1; n <= order; ++n) {
        scale /= -static_cast<double>((2 * n) * (2 * n - 1));
        coeffs.push_back(NodalFunction::sample(m, iv, [&](double y) { return scale * gfun(y); }));
    }
    return EvenSeries(std::move(coeffs));
}

ManufacturedWave manufacture_linear_wave(double lambda, double epsilon, double d, double c) {
    return ManufacturedWave(lambda, epsilon, d, c);
}

// ---------------------------------------------------------------------------
// Height fields

HeightField::HeightField(int nq_, int np_, double p0_, WaveParameters params_)
    : nq(nq_), np(np_), p0(p0_), h(static_cast<std::size_t>(nq_) * np_, 0.0), params(params_) {
    if (nq < 1 || np < 3) fail(ErrorKind::structural, "height grid needs nq >= 1 and np >= 3");
    if (!(p0 < 0.0)) fail(ErrorKind::structural, "relative flux p0 must be negative");
}

double HeightField::dq() const { return 2.0 * pi / nq; }
double HeightField::dp() const { return -p0 / (np - 1); }
double HeightField::q(int j) const { return -pi + j * dq(); }
double HeightField::p(int i) const { return i == np - 1 ? 0.0 : p0 + i * dp(); }

HeightField HeightField::from_function(int nq, int np, double p0, WaveParameters params,
                                       const std::function<double(double, double)>& fn) {
    HeightField out(nq, np, p0, params);
    for (int i = 0; i < np; ++i)
        for (int j = 0; j < nq; ++j) out.at(i, j) = fn(out.q(j), out.p(i));
    return out;
}

HeightField height_from_laminar(const LaminarSolution& laminar, int nq, int np, WaveParameters params) {
    HeightField out(nq, np, laminar.p0(), params);
    for (int i = 0; i < np; ++i) {
        const double h = i == 0 ? 0.0 : laminar.height(out.p(i));
        for (int j = 0; j < nq; ++j) out.at(i, j) = h;
    }
    return out;
}

HeightField height_from_manufactured(const ManufacturedWave& wave, int nq, int np, WaveParameters params) {
    const double p0 = -wave.stream(0.0, -wave.d());
    HeightField out(nq, np, p0, params);
    const double lo = -wave.d() - 0.5, hi = wave.eta0() + 0.5;
    for (int j = 0; j < nq; ++j) {
        const double q = out.q(j);
        auto psi = [&](double y) { return wave.stream(q, y); };
        const double flo = psi(lo), fhi = psi(hi);
        for (int i = 0; i < np; ++i) {
            const double target = -out.p(i);
            auto f = [&](double y) { return psi(y) - target; };
            if (!((flo - target) > 0.0 && (fhi - target) < 0.0))
                fail(ErrorKind::surface_escape, "manufactured wave: streamline leaves the search bracket");
            out.at(i, j) = bracketed_root(f, lo, hi, flo - target, fhi - target) + wave.d();
        }
    }
    return out;
}

HeightField crest_shift(const HeightField& h) {
    const int top = h.np - 1;
    int jmax = 0;
    for (int j = 1; j < h.nq; ++j)
        if (h.at(top, j) > h.at(top, jmax)) jmax = j;
    const int shift = ((h.crest_column() - jmax) % h.nq + h.nq) % h.nq;
    if (shift == 0) return h;
    HeightField out = h;
    for (int i = 0; i < h.np; ++i)
        for (int j = 0; j < h.nq; ++j) out.at(i, (j + shift) % h.nq) = h.at(i, j);
    return out;
}

double HeightResidual::sup() const {
    double s = 0.0;
    for (double v : values) s = std::max(s, std::abs(v));
    return s;
}

namespace {

// Residual at one node with its partial derivatives with respect to the
// difference quotients, chained onto stencil entries by `emit`.
struct NodeStencil {
    double value = 0.0;
    double dq_coef = 0.0;   // d/d h_q
    double dp_coef = 0.0;   // d/d h_p
    double dpp_coef = 0.0;  // d/d h_pp
    double dqp_coef = 0.0;  // d/d h_qp
    double dqq_coef = 0.0;  // d/d h_qq
    double dh_coef = 0.0;   // d/d h (explicit)
};

[[noreturn]] void stagnant_node(const HeightField& h, int i, int j, double hp) {
    std::ostringstream msg;
    msg << "stagnation: h_p = " << hp << " <= 0 at (q, p) = (" << h.q(j) << ", " << h.p(i) << ")";
    throw StagnationError(h.at(i, j) - h.params.d, msg.str());
}

NodeStencil interior_node(const HeightField& h, const HeightSystem& sys, int i, int j) {
    const int jm = (j - 1 + h.nq) % h.nq, jp = (j + 1) % h.nq;
    const double dq = h.dq(), dp = h.dp();
    const double hp = (h.at(i + 1, j) - h.at(i - 1, j)) / (2.0 * dp);
    const double hpp = (h.at(i + 1, j) - 2.0 * h.at(i, j) + h.at(i - 1, j)) / (dp * dp);
    const double hq = (h.at(i, jp) - h.at(i, jm)) / (2.0 * dq);
    const double hqq = (h.at(i, jp) - 2.0 * h.at(i, j) + h.at(i, jm)) / (dq * dq);
    const double hqp = (h.at(i + 1, jp) - h.at(i + 1, jm) - h.at(i - 1, jp) + h.at(i - 1, jm)) / (4.0 * dp * dq);
    if (!(hp > 0.0)) stagnant_node(h, i, j, hp);
    const double p = h.p(i);
    const double rho_p = sys.rho.rho.eval(p, 1);
    const double force = sys.beta.beta(-p) - sys.g * (h.at(i, j) - sys.d) * rho_p;
    NodeStencil s;
    s.value = (1.0 + hq * hq) * hpp - 2.0 * hq * hp * hqp + hp * hp * hqq + force * hp * hp * hp;
    s.dq_coef = 2.0 * hq * hpp - 2.0 * hp * hqp;
    s.dp_coef = -2.0 * hq * hqp + 2.0 * hp * hqq + 3.0 * force * hp * hp;
    s.dpp_coef = 1.0 + hq * hq;
    s.dqp_coef = -2.0 * hq * hp;
    s.dqq_coef = hp * hp;
    s.dh_coef = -sys.g * rho_p * hp * hp * hp;
    return s;
}

template <class Emit>
void for_each_equation(const HeightField& h, const HeightSystem& sys, double head, std::vector<double>& values,
                       std::vector<double>* dr_dq, Emit emit) {
    const int nq = h.nq, top = h.np - 1;
    const double dq = h.dq(), dp = h.dp();
    const double rho0 = sys.rho.rho(0.0);
    for (int i = 1; i <= top; ++i) {
        for (int j = 0; j < nq; ++j) {
            const int jm = (j - 1 + nq) % nq, jp = (j + 1) % nq;
            const int eq = height_unknown(h, i, j);
            const std::size_t slot = static_cast<std::size_t>(i) * nq + j;
            if (i < top) {
                const NodeStencil s = interior_node(h, sys, i, j);
                values[slot] = s.value;
                if (dr_dq) (*dr_dq)[eq] = 0.0;
                emit(eq, i + 1, j, s.dp_coef / (2.0 * dp) + s.dpp_coef / (dp * dp));
                emit(eq, i - 1, j, -s.dp_coef / (2.0 * dp) + s.dpp_coef / (dp * dp));
                emit(eq, i, j, -2.0 * s.dpp_coef / (dp * dp) - 2.0 * s.dqq_coef / (dq * dq) + s.dh_coef);
                emit(eq, i, jp, s.dq_coef / (2.0 * dq) + s.dqq_coef / (dq * dq));
                emit(eq, i, jm, -s.dq_coef / (2.0 * dq) + s.dqq_coef / (dq * dq));
                const double c = s.dqp_coef / (4.0 * dp * dq);
                emit(eq, i + 1, jp, c);
                emit(eq, i + 1, jm, -c);
                emit(eq, i - 1, jp, -c);
                emit(eq, i - 1, jm, c);
            } else {
                const double hp = (3.0 * h.at(i, j) - 4.0 * h.at(i - 1, j) + h.at(i - 2, j)) / (2.0 * dp);
                const double hq = (h.at(i, jp) - h.at(i, jm)) / (2.0 * dq);
                if (!(hp > 0.0)) stagnant_node(h, i, j, hp);
                const double bracket = 2.0 * sys.g * rho0 * h.at(i, j) - head;
                values[slot] = 1.0 + hq * hq + hp * hp * bracket;
                if (dr_dq) (*dr_dq)[eq] = -hp * hp;
                const double d_hp = 2.0 * hp * bracket;
                const double d_hq = 2.0 * hq;
                emit(eq, i, j, 3.0 * d_hp / (2.0 * dp) + hp * hp * 2.0 * sys.g * rho0);
                emit(eq, i - 1, j, -4.0 * d_hp / (2.0 * dp));
                emit(eq, i - 2, j, d_hp / (2.0 * dp));
                emit(eq, i, jp, d_hq / (2.0 * dq));
                emit(eq, i, jm, -d_hq / (2.0 * dq));
            }
        }
    }
}

}  // namespace

HeightResidual height_residual(const HeightField& h, const HeightSystem& sys, double q) {
    HeightResidual out;
    out.values.assign(h.h.size(), 0.0);
    for_each_equation(h, sys, q, out.values, nullptr, [](int, int, int, double) {});
    return out;
}

std::vector<double> HeightLinearization::apply(const std::vector<double>& x) const {
    std::vector<double> y(dr_dq.size(), 0.0);
    for (std::size_t k = 0; k < vals.size(); ++k) y[rows[k]] += vals[k] * x[cols[k]];
    return y;
}

HeightLinearization height_residual_and_jacobian(const HeightField& h, const HeightSystem& sys, double q) {
    HeightLinearization out;
    out.residual.values.assign(h.h.size(), 0.0);
    const int n = (h.np - 1) * h.nq;
    out.dr_dq.assign(static_cast<std::size_t>(n), 0.0);
    out.rows.reserve(static_cast<std::size_t>(n) * 9);
    out.cols.reserve(static_cast<std::size_t>(n) * 9);
    out.vals.reserve(static_cast<std::size_t>(n) * 9);
    for_each_equation(h, sys, q, out.residual.values, &out.dr_dq, [&](int eq, int i, int j, double v) {
        if (i < 1) return;  // bed row is prescribed
        out.rows.push_back(eq);
        out.cols.push_back(height_unknown(h, i, j));
        out.vals.push_back(v);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Newton

namespace {

struct Evaluated {
    std::vector<double> r;  // residual over unknowns (+ amplitude row)
    double merit = 0.0;
};

double amplitude(const HeightField& h) {
    const int top = h.np - 1;
    return h.at(top, h.crest_column()) - h.at(top, 0);
}

Evaluated evaluate(const HeightField& h, const HeightSystem& sys, double q, bool pinned, double target) {
    const HeightResidual res = height_residual(h, sys, q);
    Evaluated out;
    const int n = (h.np - 1) * h.nq;
    out.r.resize(static_cast<std::size_t>(n) + (pinned ? 1 : 0));
    for (int k = 0; k < n; ++k) out.r[k] = res.values[static_cast<std::size_t>(h.nq) + k];
    if (pinned) out.r[n] = amplitude(h) - target;
    for (double v : out.r) {
        if (!std::isfinite(v)) {
            out.merit = std::numeric_limits<double>::infinity();
            return out;
        }
        out.merit = std::max(out.merit, std::abs(v));
    }
    return out;
}

}  // namespace

NewtonResult solve_height_newton(const HeightField& init, const HeightSystem& sys, double q,
                                 const NewtonOptions& options) {
    if (options.pin_amplitude && init.nq < 2) fail(ErrorKind::structural, "amplitude pinning needs nq >= 2");
    NewtonResult out;
    out.field = init;
    out.field.params.q = q;
    for (int j = 0; j < init.nq; ++j) out.field.at(0, j) = 0.0;
    const bool pinned = options.pin_amplitude;
    const double target = amplitude(init);
    const int n = (init.np - 1) * init.nq;
    const int size = n + (pinned ? 1 : 0);

    double head = q;
    Evaluated cur = evaluate(out.field, sys, head, pinned, target);
    out.residual = cur.merit;
    out.log.push_back({0, cur.merit, 0.0, head});

    for (int it = 1; it <= options.max_iter && !(cur.merit <= options.tolerance); ++it) {
        const HeightLinearization lin = height_residual_and_jacobian(out.field, sys, head);
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(lin.vals.size() + (pinned ? n + 2 : 0));
        for (std::size_t k = 0; k < lin.vals.size(); ++k) trips.emplace_back(lin.rows[k], lin.cols[k], lin.vals[k]);
        if (pinned) {
            for (int k = 0; k < n; ++k)
                if (lin.dr_dq[k] != 0.0) trips.emplace_back(k, n, lin.dr_dq[k]);
            const int top = init.np - 1;
            trips.emplace_back(n, height_unknown(init, top, init.crest_column()), 1.0);
            trips.emplace_back(n, height_unknown(init, top, 0), -1.0);
        }
        Eigen::SparseMatrix<double> jac(size, size);
        jac.setFromTriplets(trips.begin(), trips.end());
        jac.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
        lu.compute(jac);
        if (lu.info() != Eigen::Success) fail(ErrorKind::convergence, "Newton: singular Jacobian");
        Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(cur.r.data(), size);
        const Eigen::VectorXd step = lu.solve(rhs);
        if (lu.info() != Eigen::Success || !step.allFinite())
            fail(ErrorKind::convergence, "Newton: linear solve failed");

        bool accepted = false;
        for (double alpha = 1.0; alpha >= 1.0 / 1024.0; alpha *= 0.5) {
            HeightField trial = out.field;
            for (int i = 1; i < init.np; ++i)
                for (int j = 0; j < init.nq; ++j) trial.at(i, j) += alpha * step[height_unknown(init, i, j)];
            const double trial_head = pinned ? head + alpha * step[n] : head;
            Evaluated next;
            try {
                next = evaluate(trial, sys, trial_head, pinned, target);
            } catch (const StagnationError&) {
                continue;
            }
            if (next.merit < cur.merit) {
                out.field = std::move(trial);
                head = trial_head;
                cur = std::move(next);
                out.log.push_back({it, cur.merit, alpha, head});
                accepted = true;
                break;
            }
        }
        out.iterations = it;
        out.residual = cur.merit;
        if (!accepted) break;
    }
    out.field.params.q = head;
    out.converged = cur.merit <= options.tolerance;
    return out;
}

// ---------------------------------------------------------------------------
// Bifurcation from the laminar family

namespace {

HeightField column_field(const HeightField& h) {
    HeightField out(1, h.np, h.p0, h.params);
    for (int i = 0; i < h.np; ++i) out.at(i, 0) = h.at(i, h.crest_column());
    return out;
}

HeightField broadcast(const HeightField& column, int nq) {
    HeightField out(nq, column.np, column.p0, column.params);
    for (int i = 0; i < column.np; ++i)
        for (int j = 0; j < nq; ++j) out.at(i, j) = column.at(i, 0);
    return out;
}

Eigen::MatrixXd cos_block(const HeightField& laminar, const HeightSystem& sys, double q) {
    const HeightLinearization lin = height_residual_and_jacobian(laminar, sys, q);
    const int rows = laminar.np - 1;
    const int crest = laminar.crest_column();
    Eigen::MatrixXd block(rows, rows);
    std::vector<double> x(lin.dr_dq.size());
    for (int k = 0; k < rows; ++k) {
        std::fill(x.begin(), x.end(), 0.0);
        for (int j = 0; j < laminar.nq; ++j) x[height_unknown(laminar, k + 1, j)] = std::cos(laminar.q(j));
        const auto y = lin.apply(x);
        for (int i = 0; i < rows; ++i) block(i, k) = y[height_unknown(laminar, i + 1, crest)];
    }
    return block;
}

struct LaminarStep {
    HeightField column;
    int sign = 0;
};

LaminarStep laminar_at(const HeightField& start, const HeightSystem& sys, double q, int nq) {
    NewtonOptions opts;
    opts.max_iter = 30;
    opts.tolerance = 1e-12;
    NewtonResult res = solve_height_newton(start, sys, q, opts);
    if (!res.converged) fail(ErrorKind::convergence, "laminar continuation did not converge");
    LaminarStep out{res.field, 0};
    out.sign = cos_mode_determinant(broadcast(res.field, nq), sys, q).first;
    return out;
}

}  // namespace

std::pair<int, double> cos_mode_determinant(const HeightField& laminar, const HeightSystem& sys, double q) {
    const Eigen::MatrixXd block = cos_block(laminar, sys, q);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(block);
    const Eigen::MatrixXd& m = lu.matrixLU();
    int sign = static_cast<int>(lu.permutationP().determinant());
    double log_abs = 0.0;
    for (int k = 0; k < m.rows(); ++k) {
        const double v = m(k, k);
        if (v == 0.0) return {0, -std::numeric_limits<double>::infinity()};
        if (v < 0.0) sign = -sign;
        log_abs += std::log(std::abs(v));
    }
    return {sign, log_abs};
}

Bifurcation locate_bifurcation(const HeightField& laminar, const HeightSystem& sys) {
    const int nq = laminar.nq;
    if (nq < 4) fail(ErrorKind::structural, "bifurcation search needs nq >= 4");
    const double q0 = laminar.params.q;
    const LaminarStep base = laminar_at(column_field(laminar), sys, q0, nq);
    if (base.sign == 0) {
        return {q0, broadcast(base.column, nq), {}};
    }

    // Expand outward in both directions until the cos-mode determinant flips.
    double qa = q0, qb = q0;
    LaminarStep sa = base, sb = base;
    bool found = false;
    LaminarStep up = base, down = base;
    double q_up = q0, q_down = q0;
    bool up_ok = true, down_ok = true;
    for (double step = 1e-3 * std::abs(q0); !found && (up_ok || down_ok) && step < 0.5 * std::abs(q0); step *= 2.0) {
        for (int dir : {+1, -1}) {
            bool& ok = dir > 0 ? up_ok : down_ok;
            if (!ok || found) continue;
            LaminarStep& prev = dir > 0 ? up : down;
            double& qprev = dir > 0 ? q_up : q_down;
            const double qn = q0 + dir * step;
            try {
                LaminarStep next = laminar_at(prev.column, sys, qn, nq);
                if (next.sign != base.sign) {
                    qa = qprev;
                    sa = prev;
                    qb = qn;
                    sb = next;
                    found = true;
                }
                prev = std::move(next);
                qprev = qn;
            } catch (const Error&) {
                ok = false;
            }
        }
    }
    if (!found) {
        std::ostringstream msg;
        msg << "no bifurcation from the laminar family found near Q = " << q0;
        fail(ErrorKind::convergence, msg.str());
    }

    // Bisection on the determinant sign.
    for (int it = 0; it < 100 && std::abs(qb - qa) > 1e-14 * std::abs(qa); ++it) {
        const double qm = 0.5 * (qa + qb);
        LaminarStep mid = laminar_at(sa.column, sys, qm, nq);
        if (mid.sign == 0) {
            qa = qb = qm;
            sa = sb = mid;
            break;
        }
        if (mid.sign == sa.sign) {
            qa = qm;
            sa = std::move(mid);
        } else {
            qb = qm;
            sb = std::move(mid);
        }
    }

    Bifurcation out;
    out.head = 0.5 * (qa + qb);
    out.laminar = broadcast(laminar_at(sa.column, sys, out.head, nq).column, nq);
    out.laminar.params.q = out.head;
    const Eigen::MatrixXd block = cos_block(out.laminar, sys, out.head);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeFullV);
    const Eigen::VectorXd v = svd.matrixV().col(block.cols() - 1);
    const double scale = v.cwiseAbs().maxCoeff() * (v[v.size() - 1] < 0.0 ? -1.0 : 1.0);
    out.kernel.resize(static_cast<std::size_t>(v.size()));
    for (Eigen::Index k = 0; k < v.size(); ++k) out.kernel[k] = v[k] / scale;
    return out;
}

// ---------------------------------------------------------------------------
// Axis sampling

namespace {

// Least-squares Chebyshev fit of degree `degree` on [lo, hi].
struct ChebyshevFit {
    Interval iv;
    std::vector<double> coeffs;
    std::vector<double> deriv;

    static double eval(const std::vector<double>& c, Interval iv, double x) {
        const double t = (2.0 * x - iv.lo - iv.hi) / iv.length();
        double b1 = 0.0, b2 = 0.0;
        for (std::size_t k = c.size(); k-- > 1;) {
            const double b0 = 2.0 * t * b1 - b2 + c[k];
            b2 = b1;
            b1 = b0;
        }
        return t * b1 - b2 + c[0];
    }
    double operator()(double x) const { return eval(coeffs, iv, x); }
    double prime(double x) const { return eval(deriv, iv, x); }
};

ChebyshevFit fit_chebyshev(const std::vector<double>& xs, const std::vector<double>& ys, Interval iv, int degree) {
    const int n = static_cast<int>(xs.size());
    Eigen::MatrixXd a(n, degree + 1);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        const double t = (2.0 * xs[i] - iv.lo - iv.hi) / iv.length();
        a(i, 0) = 1.0;
        if (degree >= 1) a(i, 1) = t;
        for (int k = 2; k <= degree; ++k) a(i, k) = 2.0 * t * a(i, k - 1) - a(i, k - 2);
        b[i] = ys[i];
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    ChebyshevFit fit{iv, std::vector<double>(c.data(), c.data() + c.size()), {}};
    fit.deriv = cheb::differentiate(fit.coeffs, iv.length());
    return fit;
}

}  // namespace

AxisData sample_axis_from_height(const HeightField& h, const DensityProfile& rho, double c, int m, int degree) {
    const int crest = h.crest_column();
    const int top = h.np - 1;
    const double d = h.params.d;
    std::vector<double> ys(h.np), ps(h.np);
    for (int i = 0; i < h.np; ++i) {
        ys[i] = h.at(i, crest) - d;
        ps[i] = h.p(i);
        if (i > 0 && !(ys[i] > ys[i - 1])) {
            std::ostringstream msg;
            msg << "stagnation: h_p <= 0 on the crest line at y = " << ys[i];
            throw StagnationError(ys[i], msg.str());
        }
    }
    const double eta0 = ys[top];
    if (!(eta0 > -d)) fail(ErrorKind::structural, "height field: surface below the bed on the crest line");

    // p(y) along the crest line is -psi(0, y): smooth in y, so a low-degree
    // least-squares fit also filters grid-scale noise from a discrete solver.
    const Interval iv{-d, eta0};
    const ChebyshevFit fit = fit_chebyshev(ys, ps, iv, std::min(degree, h.np - 1));
    const double bed_gap = ps[0] - fit(-d), top_gap = ps[top] - fit(eta0);
    auto p_at = [&](double y) {
        const double s = (y + d) / (eta0 + d);
        return fit(y) + (1.0 - s) * bed_gap + s * top_gap;
    };
    const double gap_slope = (top_gap - bed_gap) / (eta0 + d);

    AxisData out{{}, eta0, c, d, h.params.g, h.params.p_atm};
    const auto nodes = cheb::nodes(m, iv);
    out.u.resize(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double y = nodes[k];
        const double py = fit.prime(y) + gap_slope;  // 1 / h_p
        if (!(py > 0.0)) {
            std::ostringstream msg;
            msg << "stagnation: h_p <= 0 on the crest line at y = " << y;
            throw StagnationError(y, msg.str());
        }
        const double r = rho.rho(p_at(y));
        if (!(r > 0.0)) fail(ErrorKind::profile_range, "density non-positive on the crest line");
        out.u[k] = c - py / std::sqrt(r);
    }
    out.validate();
    return out;
}

}  // namespace stratiwave
