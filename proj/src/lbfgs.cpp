#include "klauskit/lbfgs.hpp"

#include <algorithm>

namespace klauskit {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

constexpr double kC1 = 1e-4; // sufficient decrease
constexpr double kC2 = 0.9;  // curvature

} // namespace

lbfgs_result lbfgs_minimize(std::vector<double>& x, const lbfgs_objective& objective,
                            const lbfgs_config& cfg) {
    const size_t n = x.size();
    lbfgs_result res;
    if (n == 0) {
        res.converged = true;
        return res;
    }

    std::vector<double> g(n), g_new(n), x_new(n), dir(n);
    double fx = objective(x, g);

    std::vector<std::vector<double>> s_hist, y_hist;
    std::vector<double> rho_hist;
    std::vector<double> alpha_buf;

    auto grad_converged = [&](const std::vector<double>& gr, const std::vector<double>& xx) {
        return norm2(gr) < cfg.g_epsilon * std::max(1.0, norm2(xx));
    };

    if (grad_converged(g, x)) {
        res.fx = fx;
        res.converged = true;
        return res;
    }

    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        // search direction via the two-loop recursion
        dir = g;
        const size_t h = s_hist.size();
        alpha_buf.assign(h, 0.0);
        for (size_t k = h; k-- > 0;) {
            alpha_buf[k] = rho_hist[k] * dot(s_hist[k], dir);
            for (size_t i = 0; i < n; ++i) dir[i] -= alpha_buf[k] * y_hist[k][i];
        }
        if (h > 0) {
            double gamma = dot(s_hist[h - 1], y_hist[h - 1]) / dot(y_hist[h - 1], y_hist[h - 1]);
            for (double& v : dir) v *= gamma;
        }
        for (size_t k = 0; k < h; ++k) {
            double beta = rho_hist[k] * dot(y_hist[k], dir);
            for (size_t i = 0; i < n; ++i) dir[i] += (alpha_buf[k] - beta) * s_hist[k][i];
        }
        for (double& v : dir) v = -v;

        double dphi0 = dot(g, dir);
        if (dphi0 >= 0) { // not a descent direction; fall back to steepest descent
            for (size_t i = 0; i < n; ++i) dir[i] = -g[i];
            dphi0 = -dot(g, g);
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }

        // strong-Wolfe line search (bracket, then bisect)
        double alpha = (iter == 1) ? std::min(1.0, 1.0 / std::max(1e-12, norm2(g))) : 1.0;
        double alpha_lo = 0.0, alpha_hi = 0.0;
        double phi_lo = fx;
        double alpha_prev = 0.0, phi_prev = fx;
        bool have_step = false;
        bool zooming = false;
        double fx_new = fx;

        auto eval_at = [&](double a) {
            for (size_t i = 0; i < n; ++i) x_new[i] = x[i] + a * dir[i];
            fx_new = objective(x_new, g_new);
            return dot(g_new, dir);
        };

        for (int ls = 0; ls < cfg.max_linesearch; ++ls) {
            if (!zooming) {
                double dphi = eval_at(alpha);
                if (fx_new > fx + kC1 * alpha * dphi0 || (ls > 0 && fx_new >= phi_prev)) {
                    alpha_lo = alpha_prev;
                    phi_lo = phi_prev;
                    alpha_hi = alpha;
                    zooming = true;
                    continue;
                }
                if (std::abs(dphi) <= -kC2 * dphi0) {
                    have_step = true;
                    break;
                }
                if (dphi >= 0) {
                    alpha_lo = alpha;
                    phi_lo = fx_new;
                    alpha_hi = alpha_prev;
                    zooming = true;
                    continue;
                }
                alpha_prev = alpha;
                phi_prev = fx_new;
                alpha = std::min(alpha * 2.0, 1e8);
            } else {
                alpha = 0.5 * (alpha_lo + alpha_hi);
                double dphi = eval_at(alpha);
                if (fx_new > fx + kC1 * alpha * dphi0 || fx_new >= phi_lo) {
                    alpha_hi = alpha;
                } else {
                    if (std::abs(dphi) <= -kC2 * dphi0) {
                        have_step = true;
                        break;
                    }
                    if (dphi * (alpha_hi - alpha_lo) >= 0) alpha_hi = alpha_lo;
                    alpha_lo = alpha;
                    phi_lo = fx_new;
                }
                if (std::abs(alpha_hi - alpha_lo) < 1e-16) break;
            }
        }

        if (!have_step && !(fx_new < fx && alpha > 0)) {
            res.fx = fx;
            res.iterations = iter;
            return res; // line search failed and nothing improved
        }

        // accept the step
        double improvement = fx - fx_new;
        std::vector<double> s(n), y(n);
        for (size_t i = 0; i < n; ++i) {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        x.swap(x_new);
        g.swap(g_new);
        fx = fx_new;
        res.iterations = iter;

        if (grad_converged(g, x) || improvement < cfg.f_epsilon) {
            res.fx = fx;
            res.converged = true;
            return res;
        }

        double sy = dot(s, y);
        if (sy > 1e-12 * norm2(s) * norm2(y)) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > cfg.history) {
                s_hist.erase(s_hist.begin());
                y_hist.erase(y_hist.begin());
                rho_hist.erase(rho_hist.begin());
            }
        }
    }

    res.fx = fx;
    return res;
}

} // namespace klauskit
