#include "conescan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "conescan/detail/spiral.hpp"
#include "conescan/errors.hpp"
#include "conescan/kernels.hpp"

namespace conescan {

namespace {

// Interpolated position at time t; assumes t is inside the span.
std::pair<double, double> position_at(const trajectory& traj, double t) {
    const auto& s = traj.samples;
    auto it = std::lower_bound(s.begin(), s.end(), t,
                               [](const trajectory_sample& a, double tt) { return a.t < tt; });
    if (it == s.begin())
        return {it->x, it->y};
    if (it == s.end())
        return {s.back().x, s.back().y};
    const auto& b = *it;
    const auto& a = *(it - 1);
    double u = (t - a.t) / (b.t - a.t);
    return {a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
}

double trapezoid_mean(const std::vector<double>& vals, double dt, double span) {
    double sum = 0.0;
    for (std::size_t i = 1; i < vals.size(); ++i)
        sum += 0.5 * (vals[i] + vals[i - 1]) * dt;
    return sum / span;
}

// Finite-difference velocities: central in the interior, one-sided at the ends.
void velocities(const std::vector<double>& xs, const std::vector<double>& ys, double dt,
                std::vector<double>& vx, std::vector<double>& vy) {
    std::size_t n = xs.size();
    vx.resize(n);
    vy.resize(n);
    vx[0] = (xs[1] - xs[0]) / dt;
    vy[0] = (ys[1] - ys[0]) / dt;
    vx[n - 1] = (xs[n - 1] - xs[n - 2]) / dt;
    vy[n - 1] = (ys[n - 1] - ys[n - 2]) / dt;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        vx[i] = (xs[i + 1] - xs[i - 1]) / (2.0 * dt);
        vy[i] = (ys[i + 1] - ys[i - 1]) / (2.0 * dt);
    }
}

}  // namespace

trajectory resample(const trajectory& traj, const std::vector<double>& times) {
    traj.validate();
    trajectory out;
    out.label = traj.label;
    out.scale = traj.scale;
    out.samples.reserve(times.size());
    double t0 = traj.t_begin();
    double t1 = traj.t_end();
    for (double t : times) {
        if (t < t0 - 1e-12 || t > t1 + 1e-12) {
            std::ostringstream msg;
            msg << "resample: time " << t << " outside trajectory span [" << t0 << ", " << t1
                << "]";
            throw parse_error(msg.str());
        }
        auto [x, y] = position_at(traj, std::clamp(t, t0, t1));
        out.samples.push_back({t, x, y});
    }
    return out;
}

mismatch_report mismatch(const trajectory& image, const trajectory& probe, double grid_dt) {
    image.validate();
    probe.validate();
    if (!(grid_dt > 0.0) || !std::isfinite(grid_dt))
        throw parse_error("mismatch: grid step must be positive");

    double t0 = std::max(image.t_begin(), probe.t_begin());
    double t1 = std::min(image.t_end(), probe.t_end());
    if (!(t1 > t0))
        throw parse_error("mismatch: trajectories have no overlapping time window");

    std::size_t n = static_cast<std::size_t>(std::floor((t1 - t0) / grid_dt + 1e-9)) + 1;
    if (n < 3)
        throw parse_error("mismatch: overlap shorter than three grid samples");
    double span = static_cast<double>(n - 1) * grid_dt;

    std::vector<double> ax(n), ay(n), bx(n), by(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = t0 + static_cast<double>(i) * grid_dt;
        auto pa = position_at(image, std::min(t, t1));
        auto pb = position_at(probe, std::min(t, t1));
        ax[i] = pa.first;
        ay[i] = pa.second;
        bx[i] = pb.first;
        by[i] = pb.second;
    }

    const auto& ops = kernels::active();
    std::vector<double> diff(n);
    ops.norm_diff(ax.data(), ay.data(), bx.data(), by.data(), diff.data(), n);

    mismatch_report rep;
    rep.D = trapezoid_mean(diff, grid_dt, span);

    std::vector<double> avx, avy, bvx, bvy;
    velocities(ax, ay, grid_dt, avx, avy);
    velocities(bx, by, grid_dt, bvx, bvy);
    ops.norm_diff(avx.data(), avy.data(), bvx.data(), bvy.data(), diff.data(), n);
    rep.C = trapezoid_mean(diff, grid_dt, span);

    rep.t_f = t1;
    rep.n_samples = static_cast<int>(n);
    return rep;
}

double mismatch_D(const trajectory& image, const trajectory& probe, double grid_dt) {
    return mismatch(image, probe, grid_dt).D;
}

double mismatch_C(const trajectory& image, const trajectory& probe, double grid_dt) {
    return mismatch(image, probe, grid_dt).C;
}

match_ratio_report match_ratio(const trajectory& traj, double pitch, double outer_radius,
                               double dot_spacing, double half_thickness) {
    traj.validate();
    if (traj.samples.size() < 2)
        throw parse_error("match ratio: trajectory needs at least two samples");
    if (!(pitch > 0.0) || !(outer_radius > 0.0) || !(dot_spacing > 0.0) ||
        !(half_thickness > 0.0))
        throw parse_error("match ratio: pitch, radius, spacing and thickness must be positive");

    std::size_t n = traj.samples.size();
    std::vector<double> xs(n), ys(n);
    double extent = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = traj.samples[i].x;
        ys[i] = traj.samples[i].y;
        extent = std::max(extent, std::hypot(xs[i], ys[i]));
    }

    double c = pitch / (2.0 * std::numbers::pi);
    double total = detail::spiral_arc_length(c, outer_radius / c);
    int dots = static_cast<int>(std::floor(total / dot_spacing + 1e-9));

    const auto& ops = kernels::active();
    match_ratio_report rep{0.0, 0, 0, 0};
    double phi = 0.0;
    for (int j = 1; j <= dots; ++j) {
        phi = detail::spiral_phi_at_arc(c, dot_spacing * j, phi);
        double rho = c * phi;
        if (rho > extent + 1e-12) {
            rep.irrelevant++;
            continue;
        }
        double qx = rho * std::cos(phi);
        double qy = rho * std::sin(phi);
        double dist = std::sqrt(ops.min_dist_sq_polyline(qx, qy, xs.data(), ys.data(), n));
        if (dist <= half_thickness)
            rep.matched++;
        else
            rep.mismatched++;
    }
    int counted = rep.matched + rep.mismatched;
    rep.ratio = counted > 0 ? static_cast<double>(rep.matched) / counted : 0.0;
    return rep;
}

void drag_params::validate() const {
    if (stick_radius < 0.0 || !std::isfinite(stick_radius))
        throw parse_error("drag: stick radius must be >= 0");
    if (!(lag_time > 0.0) || !std::isfinite(lag_time))
        throw parse_error("drag: lag time must be positive");
    if (creep_gain < 0.0 || creep_gain > 1.0)
        throw parse_error("drag: creep gain must lie in [0, 1]");
}

trajectory apply_drag_surrogate(const trajectory& probe, const drag_params& params) {
    probe.validate();
    params.validate();
    if (probe.samples.size() < 2)
        return probe;

    double dt = probe.samples[1].t - probe.samples[0].t;
    for (std::size_t i = 1; i < probe.samples.size(); ++i) {
        if (std::fabs(probe.samples[i].t - probe.samples[i - 1].t - dt) > 1e-9)
            throw parse_error("drag surrogate needs a uniformly sampled trajectory");
    }

    double beta = params.creep_gain * (1.0 - std::exp(-dt / params.lag_time));
    trajectory out = probe;
    double ix = probe.samples[0].x;
    double iy = probe.samples[0].y;
    for (std::size_t i = 1; i < out.samples.size(); ++i) {
        double ex = probe.samples[i].x - ix;
        double ey = probe.samples[i].y - iy;
        double nrm = std::hypot(ex, ey);
        if (nrm > params.stick_radius) {
            double move = beta * (nrm - params.stick_radius);
            ix += move * ex / nrm;
            iy += move * ey / nrm;
        }
        out.samples[i].x = ix;
        out.samples[i].y = iy;
    }
    return out;
}

}  // namespace conescan
