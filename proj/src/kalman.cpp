#include "ocular/kalman.hpp"

#include <cmath>

#include "ocular/errors.hpp"

namespace ocular {

Eigen::Matrix2d transition_matrix(double dt) {
    Eigen::Matrix2d F;
    F << 1.0, dt, 0.0, 1.0;
    return F;
}

Eigen::Vector2d input_matrix(double dt) { return {0.5 * dt * dt, dt}; }

Eigen::Matrix2d white_acceleration_q(double dt, double sigma_a) {
    const Eigen::Vector2d g = input_matrix(dt);
    return sigma_a * sigma_a * g * g.transpose();
}

Eigen::Vector2d LinearMotionModel::f(const Eigen::Vector2d& x, double dt, double u) const {
    return transition_matrix(dt) * x + input_matrix(dt) * u;
}

Eigen::Matrix2d LinearMotionModel::jacobian_f(const Eigen::Vector2d&, double dt, double) const {
    return transition_matrix(dt);
}

double LinearMotionModel::h(const Eigen::Vector2d& x) const { return x(0); }

Eigen::RowVector2d LinearMotionModel::jacobian_h(const Eigen::Vector2d&) const { return {1.0, 0.0}; }

SaturatingObservationModel::SaturatingObservationModel(double exposure, double v_max)
    : exposure_(exposure), v_max_(v_max) {
    if (!(exposure >= 0.0) || !(v_max > 0.0)) throw InvalidArgument("saturating observation: bad parameters");
}

double SaturatingObservationModel::h(const Eigen::Vector2d& x) const {
    return x(0) - 0.5 * exposure_ * v_max_ * std::tanh(x(1) / v_max_);
}

Eigen::RowVector2d SaturatingObservationModel::jacobian_h(const Eigen::Vector2d& x) const {
    const double c = std::cosh(x(1) / v_max_);
    return {1.0, -0.5 * exposure_ / (c * c)};
}

namespace {

void check(const TrackerState& s, double z, double dt) {
    if (!std::isfinite(z)) throw InvalidArgument("Kalman step: non-finite measurement");
    if (!(dt > 0.0)) throw InvalidArgument("Kalman step: dt must be positive");
    if (!(s.R > 0.0)) throw InvalidArgument("Kalman step: R must be positive");
}

Eigen::Matrix2d symmetrized(const Eigen::Matrix2d& P) { return 0.5 * (P + P.transpose()); }

}  // namespace

TrackerState kf_step(const TrackerState& state, double z, double dt) {
    check(state, z, dt);
    const Eigen::Matrix2d F = transition_matrix(dt);
    const Eigen::RowVector2d H(1.0, 0.0);

    TrackerState next = state;
    const Eigen::Vector2d x_prior = F * state.x + input_matrix(dt) * state.u;
    const Eigen::Matrix2d P_prior = F * state.P * F.transpose() + state.Q;
    const double S = H * P_prior * H.transpose() + state.R;
    const Eigen::Vector2d K = P_prior * H.transpose() / S;
    next.x = x_prior + K * (z - H * x_prior);
    next.P = symmetrized((Eigen::Matrix2d::Identity() - K * H) * P_prior);
    return next;
}

TrackerState ekf_step(const TrackerState& state, double z, double dt, const MotionModel& model) {
    check(state, z, dt);
    const Eigen::Matrix2d Jf = model.jacobian_f(state.x, dt, state.u);

    TrackerState next = state;
    const Eigen::Vector2d x_prior = model.f(state.x, dt, state.u);
    const Eigen::Matrix2d P_prior = Jf * state.P * Jf.transpose() + state.Q;
    const Eigen::RowVector2d Jh = model.jacobian_h(x_prior);
    const double S = Jh * P_prior * Jh.transpose() + state.R;
    const Eigen::Vector2d K = P_prior * Jh.transpose() / S;
    next.x = x_prior + K * (z - model.h(x_prior));
    next.P = symmetrized((Eigen::Matrix2d::Identity() - K * Jh) * P_prior);
    return next;
}

TrackerState ekf_step(const TrackerState& state, double z, double dt) {
    static const LinearMotionModel linear;
    return ekf_step(state, z, dt, linear);
}

TrackerState predict_step(const TrackerState& state, double dt, const MotionModel& model) {
    if (!(dt > 0.0)) throw InvalidArgument("Kalman step: dt must be positive");
    const Eigen::Matrix2d Jf = model.jacobian_f(state.x, dt, state.u);
    TrackerState next = state;
    next.x = model.f(state.x, dt, state.u);
    next.P = symmetrized(Jf * state.P * Jf.transpose() + state.Q);
    return next;
}

}  // namespace ocular
