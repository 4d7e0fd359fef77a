#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ocular/eye_state.hpp"

namespace ocular {

struct EigenEyeClass {
    EyeState state = EyeState::Open;
    Eigen::VectorXd mean;          ///< average eye vector
    Eigen::MatrixXd eigenvectors;  ///< columns: top-K_E unit eigen-eyes
    Eigen::VectorXd eigenvalues;   ///< matching eigenvalues of A^T A
};

struct EigenEyeModel {
    int rows = 0;
    int cols = 0;
    std::vector<EigenEyeClass> classes;
    Diagnostics diagnostics;
};

/// Per class: mean, mean-subtracted matrix A, eigenvectors of A^T A lifted
/// by u = A v and normalized. Keeps at most k_e non-degenerate directions.
EigenEyeModel esd_train(const TrainingSet& train, int k_e);

struct EsdResult {
    EyeState state = EyeState::Open;
    std::vector<double> errors;  ///< reconstruction error per class
    bool tie = false;
};

EsdResult esd_classify(const GrayImage& test, const EigenEyeModel& model);

}  // namespace ocular
