#include "ocular/eigen_eye.hpp"

#include <algorithm>

namespace ocular {

namespace {

Eigen::VectorXd as_vector(const GrayImage& img) {
    return Eigen::Map<const Eigen::VectorXd>(img.pixels().data(), static_cast<Eigen::Index>(img.size()));
}

}  // namespace

EigenEyeModel esd_train(const TrainingSet& train, int k_e) {
    if (k_e < 1) throw InvalidArgument("esd_train: K_E must be >= 1");
    if (train.empty()) throw InvalidArgument("esd_train: no classes");
    EigenEyeModel model;
    for (const auto& [state, images] : train) {
        if (images.size() < 2) throw InvalidArgument("esd_train: need at least 2 images per class");
        if (model.classes.empty()) {
            model.rows = images.front().height();
            model.cols = images.front().width();
        }
        const Eigen::Index p = static_cast<Eigen::Index>(model.rows) * model.cols;
        const auto n = static_cast<Eigen::Index>(images.size());
        Eigen::MatrixXd A(p, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& img = images[static_cast<std::size_t>(i)];
            if (img.height() != model.rows || img.width() != model.cols)
                throw InvalidArgument("esd_train: training images differ in size");
            A.col(i) = as_vector(img);
        }
        EigenEyeClass cls;
        cls.state = state;
        cls.mean = A.rowwise().mean();
        A.colwise() -= cls.mean;

        // Small n x n problem instead of the p x p covariance.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A.transpose() * A);
        const Eigen::VectorXd lam = solver.eigenvalues();
        const double tol = std::max(lam.cwiseAbs().maxCoeff(), 1.0) * 1e-10;
        std::vector<Eigen::VectorXd> kept;
        std::vector<double> kept_lambda;
        for (Eigen::Index i = n - 1; i >= 0 && static_cast<int>(kept.size()) < k_e; --i) {
            if (lam(i) <= tol) break;
            Eigen::VectorXd u = A * solver.eigenvectors().col(i);
            u.normalize();
            kept.push_back(std::move(u));
            kept_lambda.push_back(lam(i));
        }
        if (kept.empty()) model.diagnostics.push_back("class " + state_name(state) + ": zero spread, no eigen-eyes");
        cls.eigenvectors.resize(p, static_cast<Eigen::Index>(kept.size()));
        cls.eigenvalues.resize(static_cast<Eigen::Index>(kept.size()));
        for (std::size_t i = 0; i < kept.size(); ++i) {
            cls.eigenvectors.col(static_cast<Eigen::Index>(i)) = kept[i];
            cls.eigenvalues(static_cast<Eigen::Index>(i)) = kept_lambda[i];
        }
        model.classes.push_back(std::move(cls));
    }
    return model;
}

EsdResult esd_classify(const GrayImage& test, const EigenEyeModel& model) {
    if (test.height() != model.rows || test.width() != model.cols)
        throw InvalidArgument("esd_classify: test image does not match the model shape");
    if (model.classes.empty()) throw InvalidArgument("esd_classify: empty model");
    const Eigen::VectorXd gamma = as_vector(test);
    EsdResult out;
    std::size_t best = 0;
    for (std::size_t j = 0; j < model.classes.size(); ++j) {
        const auto& cls = model.classes[j];
        const Eigen::VectorXd phi = gamma - cls.mean;
        const Eigen::VectorXd w = cls.eigenvectors.transpose() * phi;
        const Eigen::VectorXd recon = cls.eigenvectors * w;
        out.errors.push_back((phi - recon).norm());
        if (out.errors[j] < out.errors[best]) best = j;
    }
    for (std::size_t j = 0; j < out.errors.size(); ++j)
        if (j != best && out.errors[j] == out.errors[best]) out.tie = true;
    out.state = model.classes[best].state;
    return out;
}

}  // namespace ocular
