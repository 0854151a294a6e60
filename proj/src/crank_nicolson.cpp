#include "evsource/crank_nicolson.hpp"
#include "evsource/errors.hpp"
#include "evsource/io/dataset.hpp"

#include <cmath>
#include <vector>

namespace evsource {

double GridField::norm_at(Eigen::Index i) const {
    const Eigen::Index m = positions.size();
    const double dx = positions(1) - positions(0);
    double sum = 0.5 * (std::norm(values(i, 0)) + std::norm(values(i, m - 1)));
    for (Eigen::Index j = 1; j + 1 < m; ++j) {
        sum += std::norm(values(i, j));
    }
    return sum * dx;
}

Eigen::Index GridField::row_near(double t) const {
    Eigen::Index best = 0;
    double best_d = std::fabs(times(0) - t);
    for (Eigen::Index i = 1; i < times.size(); ++i) {
        const double d = std::fabs(times(i) - t);
        if (d < best_d) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

double suggested_domain(double x_obs, double t_final) {
    return x_obs + 4.0 + 6.0 * t_final;
}

GridField evolve_cn(const SourceParams& p, const GridSpec& g) {
    if (!(g.dx > 0.0 && g.dt > 0.0 && g.x_domain > 0.0 && g.t_final > 0.0)) {
        throw DomainError("evolve_cn: grid members must be positive");
    }
    const Eigen::Index m = static_cast<Eigen::Index>(std::lround(g.x_domain / g.dx));
    if (m < 16) throw DomainError("evolve_cn: domain too small for the grid step");
    const long steps = std::lround(g.t_final / g.dt);
    if (steps < 1) throw DomainError("evolve_cn: t_final below one step");
    const int store_every =
        g.store_every > 0 ? g.store_every
                          : std::max(1, static_cast<int>(std::lround(0.05 / g.dt)));

    const Complex r = Complex(0.0, 1.0) * g.dt / (2.0 * g.dx * g.dx);
    const Complex off = -r;

    // Quadratic absorbing profile eta(x) on the outer absorber_width,
    // entering the diagonal as +/- dt eta / 2 on the two time levels.
    std::vector<double> eta(m + 1, 0.0);
    if (g.absorber_width > 0.0) {
        const double x0 = g.x_domain - g.absorber_width;
        for (Eigen::Index j = 0; j <= m; ++j) {
            const double x = j * g.dx;
            if (x > x0) {
                const double s = (x - x0) / g.absorber_width;
                eta[j] = g.absorber_strength * s * s;
            }
        }
    }

    // The tridiagonal factors are time-independent: precompute the
    // forward-elimination multipliers once.  The damped startup steps use
    // the fully-implicit variant of the same system.
    const Eigen::Index n_int = m - 1; // interior unknowns j = 1 .. m-1
    std::vector<Complex> c_prime(n_int), inv_w(n_int), rhs_diag(n_int);
    std::vector<Complex> c_prime_be(n_int), inv_w_be(n_int);
    {
        for (Eigen::Index j = 0; j < n_int; ++j) {
            rhs_diag[j] = 1.0 - 2.0 * r - 0.5 * g.dt * eta[j + 1];
        }
        const auto factor = [&](double scale, std::vector<Complex>& cp,
                                std::vector<Complex>& iw) {
            Complex w = 1.0 + scale * (2.0 * r + 0.5 * g.dt * eta[1]);
            iw[0] = 1.0 / w;
            cp[0] = scale * off * iw[0];
            for (Eigen::Index j = 1; j < n_int; ++j) {
                w = 1.0 + scale * (2.0 * r + 0.5 * g.dt * eta[j + 1]) -
                    scale * off * cp[j - 1];
                iw[j] = 1.0 / w;
                cp[j] = scale * off * iw[j];
            }
        };
        factor(1.0, c_prime, inv_w);
        factor(2.0, c_prime_be, inv_w_be);
    }

    const auto boundary = [&p](double t) {
        return std::exp(Complex(0.0, -1.0) * p.omega0 * t);
    };

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(m + 1);
    psi(0) = 1.0; // switch-on convention at x = 0

    std::vector<double> stored_times;
    std::vector<Eigen::VectorXcd> stored_rows;
    stored_times.push_back(0.0);
    stored_rows.push_back(psi);

    std::vector<Complex> rhs(n_int), gvec(n_int);
    for (long n = 0; n < steps; ++n) {
        const double t_new = (n + 1) * g.dt;
        const Complex b_new = boundary(t_new);
        const bool damped = n < g.smoothing_steps;

        if (damped) {
            for (Eigen::Index j = 1; j < m; ++j) rhs[j - 1] = psi(j);
            rhs[0] += 2.0 * r * b_new;
        } else {
            // Half-step average smooths the switch-on jump in the first step.
            const Complex b_old = (n == 0) ? Complex(0.5, 0.0) : psi(0);
            for (Eigen::Index j = 1; j < m; ++j) {
                const Complex left = (j == 1) ? b_old : psi(j - 1);
                rhs[j - 1] = r * left + rhs_diag[j - 1] * psi(j) + r * psi(j + 1);
            }
            rhs[0] += r * b_new;
        }

        const std::vector<Complex>& cp = damped ? c_prime_be : c_prime;
        const std::vector<Complex>& iw = damped ? inv_w_be : inv_w;
        const Complex off_step = damped ? 2.0 * off : off;
        gvec[0] = rhs[0] * iw[0];
        for (Eigen::Index j = 1; j < n_int; ++j) {
            gvec[j] = (rhs[j] - off_step * gvec[j - 1]) * iw[j];
        }
        psi(m - 1) = gvec[n_int - 1];
        for (Eigen::Index j = n_int - 2; j >= 0; --j) {
            psi(j + 1) = gvec[j] - cp[j] * psi(j + 2);
        }
        psi(0) = b_new;
        psi(m) = 0.0;

        if (std::abs(psi(m - 5)) > g.quiescence_threshold) {
            throw QuiescenceViolatedError(
                "evolve_cn: right boundary sentinel activated; enlarge x_domain");
        }

        if ((n + 1) % store_every == 0 || n + 1 == steps) {
            stored_times.push_back(t_new);
            stored_rows.push_back(psi);
        }
    }

    GridField field;
    field.times = Eigen::Map<Eigen::VectorXd>(stored_times.data(),
                                              static_cast<Eigen::Index>(stored_times.size()));
    field.positions = Eigen::VectorXd::LinSpaced(m + 1, 0.0, g.x_domain);
    field.values.resize(static_cast<Eigen::Index>(stored_rows.size()), m + 1);
    for (std::size_t i = 0; i < stored_rows.size(); ++i) {
        field.values.row(static_cast<Eigen::Index>(i)) = stored_rows[i].transpose();
    }
    return field;
}

double verify_self_convergence(const SourceParams& p, const GridSpec& base,
                               double x_probe) {
    GridSpec fine = base;
    fine.dx = 0.5 * base.dx;
    fine.dt = 0.5 * base.dt;
    fine.smoothing_steps = 2 * base.smoothing_steps; // same damped interval
    GridSpec finest = base;
    finest.dx = 0.25 * base.dx;
    finest.dt = 0.25 * base.dt;
    finest.smoothing_steps = 4 * base.smoothing_steps;

    const GridField f0 = evolve_cn(p, base);
    const GridField f1 = evolve_cn(p, fine);
    const GridField f2 = evolve_cn(p, finest);

    const Eigen::Index row0 = f0.times.size() - 1;
    const Eigen::Index row1 = f1.times.size() - 1;
    const Eigen::Index row2 = f2.times.size() - 1;

    // L2 difference over the coarse nodes up to x_probe.
    const Eigen::Index j_max =
        static_cast<Eigen::Index>(std::lround(x_probe / base.dx));
    double e01 = 0.0, e12 = 0.0;
    for (Eigen::Index j = 0; j <= j_max; ++j) {
        e01 += std::norm(f0.values(row0, j) - f1.values(row1, 2 * j));
        e12 += std::norm(f1.values(row1, 2 * j) - f2.values(row2, 4 * j));
    }
    e01 = std::sqrt(e01);
    e12 = std::sqrt(e12);
    if (e12 == 0.0) throw ConvergenceError("verify_self_convergence: degenerate errors");
    const double ratio = e01 / e12;
    if (ratio < 2.0 || ratio > 6.0) {
        throw ConvergenceError("verify_self_convergence: Richardson ratio outside [2, 6]");
    }
    return std::log2(ratio);
}

io::Dataset grid_field_dataset(const GridField& field) {
    io::Dataset d;
    d.columns = {"t", "x", "re_psi", "im_psi", "density"};
    d.metadata["rows"] = std::to_string(field.times.size());
    d.metadata["columns"] = std::to_string(field.positions.size());
    for (Eigen::Index i = 0; i < field.times.size(); ++i) {
        for (Eigen::Index j = 0; j < field.positions.size(); ++j) {
            const Complex v = field.values(i, j);
            d.rows.push_back({io::format_double(field.times(i)),
                              io::format_double(field.positions(j)),
                              io::format_double(v.real()),
                              io::format_double(v.imag()),
                              io::format_double(std::norm(v))});
        }
    }
    return d;
}

} // namespace evsource
