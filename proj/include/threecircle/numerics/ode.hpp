#pragma once

// Adaptive explicit integration of first-order systems with dense output.
//
// Steps are taken by a controlled Runge-Kutta-Fehlberg 7(8) pair from
// Boost.Odeint. Each accepted step also records the state at its midpoint, and
// the solution inside a step is the quintic Hermite interpolant through the
// two end nodes and the midpoint (values and derivatives).

#include "threecircle/numerics/types.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

namespace threecircle {

using OdeState = std::vector<double>;

inline constexpr double kLocalTolFactor = 1e-2;
using OdeRhs = std::function<void(double t, const OdeState& y, OdeState& dydt)>;

struct OdeOptions {
    double initial_step = 0.0;  // 0 selects |t1 - t0| * 1e-3
    double max_step = std::numeric_limits<double>::infinity();
    double min_step = 1e-14;  // relative to the span length
    std::size_t max_steps = 2'000'000;
    // Times that must be hit exactly (become nodes of the dense solution).
    std::vector<double> checkpoints;
    // Checked after every accepted step; returning true ends integration early.
    std::function<bool(double t, const OdeState& y)> stop_when;
};

/// Piecewise Hermite interpolant over the accepted steps.
class DenseSolution {
public:
    DenseSolution() = default;

    void push(double t, OdeState y, OdeState f) {
        ts_.push_back(t);
        ys_.push_back(std::move(y));
        fs_.push_back(std::move(f));
    }

    /// Midpoint data of the step ending at the most recently pushed node.
    void push_midpoint(OdeState y, OdeState f) {
        ym_.resize(ts_.size() - 1);
        fm_.resize(ts_.size() - 1);
        ym_.back() = std::move(y);
        fm_.back() = std::move(f);
    }

    /// Derivative at the start of the step ending at the most recently pushed
    /// node, when it differs from the node derivative (one-sided at a jump).
    void push_start_derivative(OdeState f) {
        f0_.resize(ts_.size() - 1);
        f0_.back() = std::move(f);
    }

    [[nodiscard]] double t_begin() const { return ts_.front(); }
    [[nodiscard]] double t_end() const { return ts_.back(); }
    [[nodiscard]] std::size_t nodes() const { return ts_.size(); }
    [[nodiscard]] std::size_t dimension() const { return ys_.empty() ? 0 : ys_.front().size(); }
    [[nodiscard]] const std::vector<double>& times() const { return ts_; }
    [[nodiscard]] const OdeState& node_state(std::size_t k) const { return ys_[k]; }
    [[nodiscard]] const OdeState& node_derivative(std::size_t k) const { return fs_[k]; }

    /// True when integration ended before the requested final time.
    bool truncated = false;
    std::string truncation_reason;

    [[nodiscard]] OdeState operator()(double t) const { return eval(t); }

    [[nodiscard]] OdeState eval(double t) const {
        if (ts_.empty()) throw NumericalError("empty dense solution");
        const bool forward = ts_.back() >= ts_.front();
        const double lo = forward ? ts_.front() : ts_.back();
        const double hi = forward ? ts_.back() : ts_.front();
        const double slop = 1e-12 * std::max(1.0, std::abs(hi - lo));
        if (t < lo - slop || t > hi + slop) {
            std::ostringstream os;
            os << "dense output requested at t=" << t << " outside [" << lo << ", " << hi << "]";
            throw DomainError(os.str());
        }
        if (ts_.size() == 1) return ys_.front();
        std::size_t k;
        if (forward) {
            auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
            k = it == ts_.begin() ? 0 : static_cast<std::size_t>(it - ts_.begin()) - 1;
        } else {
            auto it = std::upper_bound(ts_.begin(), ts_.end(), t, std::greater<>());
            k = it == ts_.begin() ? 0 : static_cast<std::size_t>(it - ts_.begin()) - 1;
        }
        k = std::min(k, ts_.size() - 2);
        const double t0 = ts_[k];
        const double h = ts_[k + 1] - t0;
        const double s = (t - t0) / h;
        if (s == 0.0) return ys_[k];
        if (s == 1.0) return ys_[k + 1];
        OdeState out(ys_[k].size());
        const OdeState& fa = k < f0_.size() && !f0_[k].empty() ? f0_[k] : fs_[k];
        if (k < ym_.size() && !ym_[k].empty()) {
            const auto w = detail_quintic_weights(s);
            for (std::size_t i = 0; i < out.size(); ++i) {
                out[i] = w[0] * ys_[k][i] + w[1] * h * fa[i] + w[2] * ym_[k][i] + w[3] * h * fm_[k][i] +
                         w[4] * ys_[k + 1][i] + w[5] * h * fs_[k + 1][i];
            }
            return out;
        }
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        const double h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s);
        const double h11 = s * s * (s - 1);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = h00 * ys_[k][i] + h10 * h * fa[i] + h01 * ys_[k + 1][i] + h11 * h * fs_[k + 1][i];
        }
        return out;
    }

    [[nodiscard]] double eval_component(double t, std::size_t i) const { return eval(t)[i]; }

private:
    // Hermite basis on s in [0, 1] for (p(0), p'(0), p(1/2), p'(1/2), p(1), p'(1)).
    static std::array<double, 6> detail_quintic_weights(double s) {
        static const Eigen::Matrix<double, 6, 6> inv = [] {
            Eigen::Matrix<double, 6, 6> a = Eigen::Matrix<double, 6, 6>::Zero();
            const double nodes[3] = {0.0, 0.5, 1.0};
            for (int r = 0; r < 3; ++r) {
                for (int p = 0; p < 6; ++p) {
                    a(2 * r, p) = std::pow(nodes[r], p);
                    a(2 * r + 1, p) = p == 0 ? 0.0 : p * std::pow(nodes[r], p - 1);
                }
            }
            return Eigen::Matrix<double, 6, 6>(a.inverse());
        }();
        Eigen::Matrix<double, 1, 6> mono;
        double sp = 1.0;
        for (int p = 0; p < 6; ++p, sp *= s) mono(p) = sp;
        const Eigen::Matrix<double, 1, 6> w = mono * inv;
        return {w(0), w(1), w(2), w(3), w(4), w(5)};
    }

    std::vector<double> ts_;
    std::vector<OdeState> ys_;
    std::vector<OdeState> fs_;
    std::vector<OdeState> ym_;
    std::vector<OdeState> fm_;
    std::vector<OdeState> f0_;
};

/// Integrate y' = rhs(t, y) from t0 to t1 (either direction).
///
/// Throws NumericalError on NaN/Inf in the right-hand side or step-size
/// underflow. A DomainError thrown by `rhs`, or `options.stop_when`, ends the
/// integration early with `truncated` set on the returned solution.
inline DenseSolution integrate_ode(const OdeRhs& rhs, OdeState y0, double t0, double t1, const ToleranceBundle& tol,
                                   const OdeOptions& options = {}) {
    namespace odeint = boost::numeric::odeint;
    using stepper_t = odeint::runge_kutta_fehlberg78<OdeState>;
    using controlled_t = odeint::controlled_runge_kutta<stepper_t>;
    using checker_t = odeint::default_error_checker<double, odeint::range_algebra, odeint::default_operations>;

    if (!std::isfinite(t0) || !std::isfinite(t1)) throw DomainError("integration span must be finite");
    const double span = t1 - t0;
    const double dir = span >= 0 ? 1.0 : -1.0;

    // Stage times are kept strictly inside the current checkpoint segment, so a
    // right-hand side with a jump at a checkpoint sees the one-sided value.
    double seg_lo = t0;
    double seg_hi = t1;
    auto inside = [&](double t) {
        const double lo = std::min(seg_lo, seg_hi);
        const double hi = std::max(seg_lo, seg_hi);
        return std::clamp(t, std::nextafter(lo, hi), std::nextafter(hi, lo));
    };
    auto checked = [&](const OdeState& y, OdeState& dydt, double t) {
        rhs(inside(t), y, dydt);
        for (double v : dydt) {
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "non-finite value in ODE right-hand side at t=" << t;
                throw NumericalError(os.str());
            }
        }
    };

    DenseSolution sol;
    OdeState f0(y0.size());
    checked(y0, f0, t0);
    sol.push(t0, y0, f0);
    if (span == 0.0) return sol;

    std::vector<double> stops;
    for (double c : options.checkpoints) {
        if ((c - t0) * dir > 0 && (t1 - c) * dir > 0) stops.push_back(c);
    }
    std::sort(stops.begin(), stops.end(), [dir](double a, double b) { return a * dir < b * dir; });
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
    stops.push_back(t1);

    // per-step tolerances are tightened so the accumulated global error stays
    // within the requested bundle on smooth problems
    controlled_t stepper(checker_t(tol.ode_abs * kLocalTolFactor, tol.ode_rel * kLocalTolFactor, 1.0, 0.0));
    double t = t0;
    OdeState y = std::move(y0);
    double dt = options.initial_step > 0 ? options.initial_step * dir : span * 1e-3;
    const double min_dt = options.min_step * std::abs(span);
    std::size_t steps = 0;
    std::size_t next_stop = 0;

    while (next_stop < stops.size()) {
        const double target = stops[next_stop];
        seg_lo = next_stop == 0 ? t0 : stops[next_stop - 1];
        seg_hi = target;
        double remaining = target - t;
        if (std::abs(remaining) <= 1e-15 * std::max(1.0, std::abs(target))) {
            ++next_stop;
            continue;
        }
        dt = dir * std::min({std::abs(dt), std::abs(remaining), options.max_step});
        bool hit_target = std::abs(dt) >= std::abs(remaining);
        if (hit_target) dt = remaining;

        odeint::controlled_step_result res;
        const double t_before = t;
        const double dt_tried = dt;
        const OdeState y_before = y;
        try {
            res = stepper.try_step(checked, y, t, dt);
        } catch (const DomainError& e) {
            // a stage left the domain: shrink and retry, or give up when tiny
            dt = dt_tried * 0.25;
            t = t_before;
            y = y_before;
            if (std::abs(dt) < std::max(min_dt, 1e-10 * std::abs(span))) {
                sol.truncated = true;
                sol.truncation_reason = e.what();
                return sol;
            }
            continue;
        }
        if (res == odeint::success) {
            if (hit_target) t = target;
            OdeState ym = y_before;
            OdeState fm(y.size());
            try {
                stepper_t mid;
                mid.do_step(checked, ym, t_before, 0.5 * (t - t_before));
                checked(ym, fm, 0.5 * (t + t_before));
            } catch (const DomainError&) {
                ym.clear();
            }
            OdeState f(y.size());
            checked(y, f, t);
            OdeState f_start;
            if (next_stop > 0 && t_before == stops[next_stop - 1]) {
                f_start.resize(y.size());
                checked(y_before, f_start, t_before);
            }
            sol.push(t, y, f);
            if (!ym.empty()) sol.push_midpoint(std::move(ym), std::move(fm));
            if (!f_start.empty()) sol.push_start_derivative(std::move(f_start));
            if (hit_target) ++next_stop;
            if (++steps > options.max_steps) throw NumericalError("ODE integration exceeded the maximum step count");
            if (options.stop_when && options.stop_when(t, y)) {
                if (next_stop < stops.size()) {
                    sol.truncated = true;
                    sol.truncation_reason = "stop condition met";
                }
                return sol;
            }
        } else if (std::abs(dt) < min_dt) {
            std::ostringstream os;
            os << "step-size underflow at t=" << t << " (problem stiff or singular)";
            throw NumericalError(os.str());
        }
    }
    return sol;
}

}  // namespace threecircle
