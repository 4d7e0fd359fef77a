#pragma once

#include <Eigen/Dense>

namespace ocular {

/// State [position deg, velocity deg/s] of the constant-velocity eye model
/// with input u entering through G = [dt^2/2, dt].
struct TrackerState {
    Eigen::Vector2d x = Eigen::Vector2d::Zero();
    Eigen::Matrix2d P = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d Q = Eigen::Vector2d(1e-4, 1e-2).asDiagonal();
    double R = 0.25;
    double u = 0.0;
};

/// Process model and observation for the extended filter.
class MotionModel {
public:
    virtual ~MotionModel() = default;
    virtual Eigen::Vector2d f(const Eigen::Vector2d& x, double dt, double u) const = 0;
    virtual Eigen::Matrix2d jacobian_f(const Eigen::Vector2d& x, double dt, double u) const = 0;
    virtual double h(const Eigen::Vector2d& x) const = 0;
    virtual Eigen::RowVector2d jacobian_h(const Eigen::Vector2d& x) const = 0;
};

/// x(k+1) = F x(k) + G u, z = H x.
class LinearMotionModel : public MotionModel {
public:
    Eigen::Vector2d f(const Eigen::Vector2d& x, double dt, double u) const override;
    Eigen::Matrix2d jacobian_f(const Eigen::Vector2d& x, double dt, double u) const override;
    double h(const Eigen::Vector2d& x) const override;
    Eigen::RowVector2d jacobian_h(const Eigen::Vector2d& x) const override;
};

/// Linear dynamics, but the camera reports the position lagged by motion
/// blur over an exposure, with the blur saturating at v_max:
/// z = p - (exposure / 2) * v_max * tanh(v / v_max).
class SaturatingObservationModel : public LinearMotionModel {
public:
    SaturatingObservationModel(double exposure, double v_max);
    double h(const Eigen::Vector2d& x) const override;
    Eigen::RowVector2d jacobian_h(const Eigen::Vector2d& x) const override;

private:
    double exposure_;
    double v_max_;
};

Eigen::Matrix2d transition_matrix(double dt);
Eigen::Vector2d input_matrix(double dt);

/// Discrete white-noise-acceleration process covariance sigma_a^2 G G^T.
Eigen::Matrix2d white_acceleration_q(double dt, double sigma_a);

TrackerState kf_step(const TrackerState& state, double z, double dt);
TrackerState ekf_step(const TrackerState& state, double z, double dt, const MotionModel& model);
TrackerState ekf_step(const TrackerState& state, double z, double dt);

/// Time update only, for frames without a measurement.
TrackerState predict_step(const TrackerState& state, double dt, const MotionModel& model);

}  // namespace ocular
